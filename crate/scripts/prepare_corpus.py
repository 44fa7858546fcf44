#!/usr/bin/env python3
"""Build data/alice_milton.txt from the Canterbury corpus texts.

Sources (both public domain, distributed in the Canterbury compression corpus,
e.g. under tests/testdata/ of the brotli source tarball):
  alice29.txt   Lewis Carroll, Alice's Adventures in Wonderland
  plrabn12.txt  John Milton, Paradise Lost

Output: one clause per line, lowercased, punctuation split off, tokens
separated by single spaces. Clauses end at . ! ? ; :

usage: prepare_corpus.py <testdata-dir> <out-file>
"""
import re
import sys
from pathlib import Path


def body(text, start, end):
    lines = text.splitlines()
    i = next(n for n, l in enumerate(lines) if l.strip() == start)
    j = next(n for n, l in enumerate(lines) if l.strip().strip("\x1a") == end)
    keep = []
    for l in lines[i:j]:
        s = l.strip()
        if re.fullmatch(r"(CHAPTER [IVXL]+|Book [IVXL]+)", s):
            continue
        keep.append(s)
    return " ".join(keep)


TOKEN = re.compile(r"[a-z]+(?:'[a-z]+)*|[0-9]+|--|[.,;:!?()\"`']")


def clauses(text):
    text = text.lower()
    out, cur = [], []
    for tok in TOKEN.findall(text):
        if tok in ("`", "'", '"', "(", ")"):
            continue
        cur.append(tok)
        if tok in (".", "!", "?", ";", ":"):
            if len(cur) > 1:
                out.append(" ".join(cur))
            cur = []
    if len(cur) > 1:
        out.append(" ".join(cur))
    return out


def main():
    src = Path(sys.argv[1])
    alice = (src / "alice29.txt").read_text(encoding="latin-1")
    milton = (src / "plrabn12.txt").read_text(encoding="latin-1")
    lines = clauses(body(alice, "CHAPTER I", "THE END"))
    lines += clauses(body(milton, "Book I", "[The End]"))
    Path(sys.argv[2]).write_text("\n".join(lines) + "\n", encoding="utf-8")
    words = sum(len(l.split()) for l in lines)
    print(f"{len(lines)} lines, {words} tokens")


if __name__ == "__main__":
    main()
