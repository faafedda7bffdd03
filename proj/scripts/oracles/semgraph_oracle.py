#!/usr/bin/env python3
# Copyright 2026 The zsl Authors
# SPDX-License-Identifier: Apache-2.0
"""Relationship-vector oracle over a toy graph using all-pairs shortest
paths (Floyd-Warshall) instead of bounded BFS."""
import sys
from pathlib import Path

ALLOWED = {"RelatedTo", "IsA", "PartOf", "AtLocation"}
EDGES = [
    ("RelatedTo", "teacher", "school"),
    ("IsA", "school", "educational_institution"),
    ("IsA", "university", "educational_institution"),
    ("IsA", "educational_institution", "organization"),
    ("IsA", "organization", "agent"),
    ("AtLocation", "people", "place"),
    ("RelatedTo", "ages", "people"),
    ("RelatedTo", "access", "student"),
    ("RelatedTo", "student", "teacher"),
    ("AtLocation", "student", "university"),
    ("RelatedTo", "college", "university"),
    ("RelatedTo", "education", "student"),
    ("IsA", "company", "organization"),
    ("RelatedTo", "business", "company"),
    ("RelatedTo", "money", "business"),
    ("Antonym", "book", "school"),
    ("RelatedTo", "institution", "organization"),
    ("RelatedTo", "educational", "education"),
    ("PartOf", "classroom", "school"),
]
CLASSES = [
    # id, label, one word, description, parent
    (1, "Educational Institution", "school",
     "a place where people of different ages gain access to education", 10),
    (2, "Company", "company", "a business organization", 10),
    (10, "Organization", "organization", "a group with a purpose", 20),
    (20, "Agent", "agent", "something that acts", None),
]
LEXICON = {
    "place": "NOUN", "people": "NOUN", "ages": "NOUN", "education": "NOUN",
    "business": "NOUN", "organization": "NOUN",
    "group": "NOUN", "purpose": "NOUN", "something": "NOUN",
    "gain": "VERB", "access": "VERB", "acts": "VERB", "different": "ADJ", "a": "OTHER",
    "where": "OTHER", "of": "OTHER", "to": "OTHER", "with": "OTHER",
    "that": "OTHER",
}
WORDS = ["institution", "teacher", "student", "money", "book", "school",
         "organization", "education", "ghost"]
K = 2


def tokens(text):
    return [t.lower() for t in text.replace(",", " ").split()]


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data")
    (root / "toy_edges.tsv").write_text("".join(
        f"/r/{r}\t/c/en/{a}/n\t/c/en/{b}\n" for r, a, b in EDGES))
    (root / "toy_classes.csv").write_text(
        "class_id,label,one_word_label,description,parent_id\n" + "".join(
            f'{i},{l},{o},"{d}",{"" if p is None else p}\n'
            for i, l, o, d, p in CLASSES))
    (root / "toy_lexicon.tsv").write_text("".join(
        f"{w}\t{t}\t{t}\n" for w, t in LEXICON.items()))

    nodes = sorted({x for r, a, b in EDGES if r in ALLOWED for x in (a, b)})
    ix = {n: i for i, n in enumerate(nodes)}
    inf = float("inf")
    dist = [[0 if i == j else inf for j in nodes] for i in nodes]
    for r, a, b in EDGES:
        if r in ALLOWED:
            dist[ix[a]][ix[b]] = dist[ix[b]][ix[a]] = 1
    n = len(nodes)
    for m in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][m] + dist[m][j] < dist[i][j]:
                    dist[i][j] = dist[i][m] + dist[m][j]

    by_id = {c[0]: c for c in CLASSES}

    def node_sets(cid):
        _, label, _, desc, parent = by_id[cid]
        cls = {label.lower().replace(" ", "_")}
        if len(tokens(label)) > 1:
            cls |= set(tokens(label))
        sup = set()
        p = parent
        while p is not None:
            sup.add(by_id[p][1].lower().replace(" ", "_"))
            p = by_id[p][4]
        des = {t for t in tokens(desc) if LEXICON.get(t) == "NOUN"}
        return [sorted(s & set(nodes)) for s in (cls, sup, des)]

    for cid in (1, 2):
        sets = node_sets(cid)
        print(f"class {cid} sets: {sets}")
        for w in WORDS:
            vec = []
            for s in sets:
                block = [0.0] * (3 * K + 1)
                if s and w in ix:
                    block[0] = 1.0 if w in s else 0.0
                    for h in range(1, K + 1):
                        c = sum(1 for x in s if dist[ix[w]][ix[x]] == h)
                        block[3 * (h - 1) + 1] = 1.0 if c else 0.0
                        block[3 * (h - 1) + 2] = float(c)
                        block[3 * (h - 1) + 3] = c / len(s)
                vec += block
            print(f"  {w}: " + ", ".join(f"{v:g}" for v in vec))


if __name__ == "__main__":
    main()
