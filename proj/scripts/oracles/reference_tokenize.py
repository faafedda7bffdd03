#!/usr/bin/env python3
# Copyright 2026 The zsl Authors
# SPDX-License-Identifier: Apache-2.0
"""Reference tokenizer for ASCII text: lowercase, split on anything that is
not a letter or digit, drop all-digit tokens."""
import re
import sys

CASES = [
    "In 1984, 99 red balloons",
    "Re: [OT] e-mail me @ foo.bar!!",
    "A1 b22 333 c4d",
    "",
    "...",
    "MiXeD   case\tTabs\nand\r\nlines",
]


def tokenize(text):
    return [t.lower() for t in re.split(r"[^A-Za-z0-9]+", text)
            if t and not t.isdigit()]


if __name__ == "__main__":
    for case in (sys.argv[1:] or CASES):
        print(repr(case), "->", tokenize(case))
