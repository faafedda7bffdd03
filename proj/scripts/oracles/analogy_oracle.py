#!/usr/bin/env python3
# Copyright 2026 The zsl Authors
# SPDX-License-Identifier: Apache-2.0
"""Brute-force 3CosMul and document translation oracles.

Writes the fixture stores into tests/data and prints the expected results
that the C++ tests freeze. Pure Python; vectors are rounded to float32 the
same way the C++ loader stores them.
"""
import math
import random
import struct
import sys
from pathlib import Path

EPS = 0.001


def f32(x):
    return struct.unpack("f", struct.pack("f", x))[0]


def load(path):
    words, vecs = [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        words.append(parts[0])
        vecs.append([f32(float(v)) for v in parts[1:]])
    return words, vecs


def cos(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return dot / (na * nb)


def cosmul(words, vecs, w, c, cp, top_k, shift=True):
    idx = {x: i for i, x in enumerate(words)}
    sim = (lambda a, b: (1 + cos(a, b)) / 2) if shift else cos
    scored = []
    for i, x in enumerate(words):
        if x in (w, c, cp):
            continue
        s = sim(vecs[i], vecs[idx[cp]]) * sim(vecs[i], vecs[idx[w]]) / (
            sim(vecs[i], vecs[idx[c]]) + EPS)
        scored.append((-s, i, x, s))
    scored.sort()
    return [(x, s) for _, _, x, s in scored[:top_k]]


def translate(tokens, c, cp, words, vecs, lexicon, top_k):
    valid = {"NOUN", "VERB", "ADJ", "ADV"}
    replace = {}
    out = []
    for w in tokens:
        primary = lexicon.get(w, ("OTHER", set()))[0]
        if primary not in valid:
            out.append(w)
            continue
        if w not in replace:
            if w not in words:
                out.append(w)
                continue
            chosen = None
            for cand, _ in cosmul(words, vecs, w, c, cp, top_k):
                tags = lexicon.get(cand, ("OTHER", set()))[1]
                if cand not in replace.values() and primary in tags:
                    chosen = cand
                    break
            if chosen is None:
                out.append(w)
                continue
            replace[w] = chosen
        out.append(replace[w])
    return out, replace


def write_cosmul_fixture(root):
    # Hand-placed 3-d vectors: queries first, then five candidates.
    rows = [
        ("king", [0.9, 0.1, 0.2]),
        ("man", [0.8, -0.3, 0.1]),
        ("woman", [0.2, 0.9, 0.1]),
        ("queen", [0.3, 1.0, 0.25]),
        ("prince", [0.85, 0.05, 0.3]),
        ("girl", [0.1, 0.8, -0.1]),
        ("castle", [0.5, 0.5, 0.9]),
        ("apple", [-0.6, 0.2, 0.4]),
    ]
    text = "".join(f"{w} " + " ".join(f"{v:.6f}" for v in vec) + "\n"
                   for w, vec in rows)
    (root / "cosmul5.txt").write_text(text)
    words, vecs = load(root / "cosmul5.txt")
    print("3CosMul  man : king :: woman : ?  (shifted)")
    for x, s in cosmul(words, vecs, "king", "man", "woman", 5):
        print(f"  {x}\t{s:.12f}")
    print("3CosMul  (raw cosines)")
    for x, s in cosmul(words, vecs, "king", "man", "woman", 5, shift=False):
        print(f"  {x}\t{s:.12f}")


def write_translation_fixture(root):
    rng = random.Random(20240611)
    d = 6

    def gauss(scale):
        return [rng.gauss(0, scale / math.sqrt(d)) for _ in range(d)]

    animal, plant = gauss(1.0), gauss(1.0)
    roles = [gauss(1.0) for _ in range(6)]
    rows, lexicon = [], {}

    def add(word, vec, primary, tags=None):
        rows.append((word, vec))
        lexicon[word] = (primary, set(tags or [primary]))

    add("animal", animal, "NOUN")
    add("plant", plant, "NOUN")
    src = ["snail", "crawls", "shell", "slimy", "slowly", "kitten"]
    dst = ["aster", "grows", "petal", "leafy", "quietly", "sprout"]
    pos = ["NOUN", "VERB", "NOUN", "ADJ", "ADV", "NOUN"]
    role_of = [0, 1, 2, 3, 4, 0]
    for w, r, p in zip(src, role_of, pos):
        add(w, [a + b + n for a, b, n in zip(animal, roles[r], gauss(0.2))], p)
    for w, r, p in zip(dst, role_of, pos):
        tags = [p]
        if w == "petal":
            tags = ["VERB"]  # deliberately incompatible with "shell"
        add(w, [a + b + n for a, b, n in zip(plant, roles[r], gauss(0.2))],
            tags[0], tags)
    fillers = ["stone", "river", "cloud", "bread", "glass", "paper", "metal",
               "sound", "light", "night", "money", "chair", "road", "window",
               "music", "dream", "field", "tower"]
    for i, w in enumerate(fillers):
        add(w, gauss(1.0), ["NOUN", "VERB", "ADJ", "ADV"][i % 4])
    rows = rows[:30]
    lexicon = {w: lexicon[w] for w, _ in rows}
    for w in ["the", "a", "of"]:
        lexicon[w] = ("OTHER", {"OTHER"})
    lexicon["ghost"] = ("NOUN", {"NOUN"})  # in lexicon, not in the store

    (root / "translate30.txt").write_text("".join(
        f"{w} " + " ".join(f"{v:.6f}" for v in vec) + "\n" for w, vec in rows))
    (root / "translate30.lex").write_text("".join(
        f"{w}\t{p}\t{','.join(sorted(t))}\n" for w, (p, t) in lexicon.items()))
    words, vecs = load(root / "translate30.txt")
    doc = ["the", "snail", "crawls", "slowly", "of", "shell", "kitten",
           "ghost", "snail", "slimy"]
    for top_k in (20, 3):
        out, rep = translate(doc, "animal", "plant", words, vecs, lexicon,
                             top_k)
        print(f"translate top_k={top_k}")
        print("  in : " + " ".join(doc))
        print("  out: " + " ".join(out))
        print("  dict: " + ", ".join(f"{k}->{v}" for k, v in rep.items()))
        for w in ["snail", "shell", "kitten"]:
            print(f"  cands({w}): " + " ".join(
                x for x, _ in cosmul(words, vecs, w, "animal", "plant", 5)))


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data")
    root.mkdir(parents=True, exist_ok=True)
    write_cosmul_fixture(root)
    write_translation_fixture(root)


if __name__ == "__main__":
    main()
