#!/usr/bin/env python3
# Copyright 2026 The zsl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds data/pos_lexicon.tsv from two permissively licensed word lists.

Primary tags come from Brill's tagger lexicon (most frequent Penn tag per
word, as shipped inside the textblob wheel). Full tag sets add every
universal POS that lemminflect's lemma table records for the word.

Usage:
  pip download --no-deps textblob==0.20.1 lemminflect==0.2.3 -d /tmp/whl
  python3 scripts/build_pos_lexicon.py /tmp/whl data/pos_lexicon.tsv
"""

import glob
import gzip
import os
import re
import sys
import zipfile

PENN = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB",
    "VBZ": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV",
}
UPOS = {"noun": "NOUN", "propn": "NOUN", "verb": "VERB", "adj": "ADJ",
        "adv": "ADV"}
ORDER = ["NOUN", "VERB", "ADJ", "ADV", "OTHER"]
WORD = re.compile(r"^[a-z][a-z'-]*$")


def wheel(directory, prefix):
    paths = glob.glob(os.path.join(directory, prefix + "-*.whl"))
    if not paths:
        sys.exit("missing wheel: " + prefix)
    return zipfile.ZipFile(sorted(paths)[-1])


def main(wheel_dir, out_path):
    brill = wheel(wheel_dir, "textblob").read(
        "textblob/en/en-lexicon.txt").decode("utf-8")
    lemmas = gzip.decompress(wheel(wheel_dir, "lemminflect").read(
        "lemminflect/resources/lemma_lu.csv.gz")).decode("utf-8")

    primary = {}
    exact = set()
    tags = {}
    for line in brill.splitlines():
        if not line or line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) < 2:
            continue
        surface, penn = parts[0], parts[1]
        word = surface.lower()
        if not WORD.match(word):
            continue
        tag = PENN.get(penn, "OTHER")
        # The lowercase entry wins over capitalized variants.
        if surface == word:
            primary[word] = tag
            exact.add(word)
        elif word not in exact:
            primary.setdefault(word, tag)
        tags.setdefault(word, set()).add(tag)

    auxiliary = set()
    for line in lemmas.splitlines():
        parts = line.split(",")
        if len(parts) < 2:
            continue
        word, upos = parts[0].lower(), parts[1]
        if not WORD.match(word):
            continue
        if upos == "aux":
            auxiliary.add(word)
            continue
        if upos in UPOS:
            tags.setdefault(word, set()).add(UPOS[upos])
            primary.setdefault(word, UPOS[upos])

    with open(out_path, "w", encoding="utf-8") as out:
        out.write("# word\tprimary_tag\ttags\n")
        for word in sorted(primary):
            tag = "OTHER" if word in auxiliary else primary[word]
            tag_set = set(tags.get(word, set())) | {tag}
            out.write("%s\t%s\t%s\n" % (
                word, tag, ",".join(t for t in ORDER if t in tag_set)))


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
