#!/usr/bin/env python3
"""Builds the spellchecker acceptance fixture.

Writes clean.txt (500 sentences), corrupted.txt (the same sentences, 300 of
them carrying exactly one typo), typos.tsv (line, kind, typo, target) and
dict.txt. Typos are one-pair swaps, single edits and concatenations of two
adjacent words. Kept deliberately separate from the C++ code: the typo
predicates here are written from scratch.
"""

import collections
import random
import string
import sys
from pathlib import Path

SEED = 20240611
N_SENTENCES = 500
N_TYPOS = 300
KNOWN_MIN = 3
CANDIDATE_MIN = 20

VOCAB = """
the and that have for not with you this but his from they say her she will one all would
there their what out about who get which when make can like time just him know take people
into year your good some could them see other than then now look only come its over think
also back after use two how our work first well way even new want because any these give
day most find here thing many very tell through long where much should school letter student
house water after before between under while again every little world great never place
small found still large often together story answer morning family friend garden window
teacher question mountain river animal picture kitchen yellow orange forest winter summer
""".split()
EXTRA_DICT = ["armadillo", "zeppelin", "quartz", "harbour", "lantern"]


def zipf_weights(n):
    return [1.0 / (r + 1) ** 0.8 for r in range(n)]


def swaps(word):
    out = set()
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i] != word[j]:
                w = list(word)
                w[i], w[j] = w[j], w[i]
                out.add("".join(w))
    return out


def single_edits(word):
    letters = string.ascii_lowercase
    out = set()
    for i in range(len(word) + 1):
        for c in letters:
            out.add(word[:i] + c + word[i:])
    for i in range(len(word)):
        out.add(word[:i] + word[i + 1:])
        for c in letters:
            if c != word[i]:
                out.add(word[:i] + c + word[i + 1:])
    out.discard(word)
    return out


def main(out_dir):
    rng = random.Random(SEED)
    weights = zipf_weights(len(VOCAB))
    sentences = []
    for _ in range(N_SENTENCES):
        n = rng.randint(4, 12)
        sentences.append(rng.choices(VOCAB, weights, k=n) + ["."])

    counts = collections.Counter(w for s in sentences for w in s if len(w) >= 3 and w.isalpha())
    dictionary = set(VOCAB) | set(EXTRA_DICT)

    def known(w):
        return counts[w] >= KNOWN_MIN or w in dictionary

    frequent = {w for w, c in counts.items() if c > CANDIDATE_MIN}
    near_known = set()
    for w in frequent | dictionary:
        near_known |= swaps(w) | single_edits(w)

    corrupted = [list(s) for s in sentences]
    records = []
    lines = list(range(N_SENTENCES))
    rng.shuffle(lines)
    kinds = ["swap"] * 120 + ["edit"] * 120 + ["split"] * 60
    rng.shuffle(kinds)
    for kind in kinds:
        while True:
            line = lines.pop()
            toks = sentences[line]
            if kind == "split":
                pairs = [i for i in range(len(toks) - 1) if toks[i].isalpha() and toks[i + 1].isalpha()]
                if not pairs:
                    continue
                i = rng.choice(pairs)
                joined = toks[i] + toks[i + 1]
                splits = [k for k in range(1, len(joined)) if known(joined[:k]) and known(joined[k:])]
                if known(joined) or joined in near_known or splits != [len(toks[i])]:
                    continue
                corrupted[line] = toks[:i] + [joined] + toks[i + 2:]
                records.append((line, kind, joined, toks[i] + " " + toks[i + 1]))
                break
            idx = [i for i, w in enumerate(toks) if len(w) >= 3 and w.isalpha()]
            if not idx:
                continue
            i = rng.choice(idx)
            target = toks[i]
            options = sorted(swaps(target) if kind == "swap" else single_edits(target))
            options = [t for t in options if len(t) >= 3 and not known(t)]
            if not options:
                continue
            typo = rng.choice(options)
            corrupted[line] = toks[:i] + [typo] + toks[i + 1:]
            records.append((line, kind, typo, target))
            break

    out = Path(out_dir)
    (out / "clean.txt").write_text("".join(" ".join(s) + "\n" for s in sentences))
    (out / "corrupted.txt").write_text("".join(" ".join(s) + "\n" for s in corrupted))
    (out / "dict.txt").write_text("".join(w + "\n" for w in sorted(dictionary)))
    with open(out / "typos.tsv", "w") as f:
        f.write("line\tkind\ttypo\ttarget\n")
        for line, kind, typo, target in sorted(records):
            f.write(f"{line}\t{kind}\t{typo}\t{target}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
