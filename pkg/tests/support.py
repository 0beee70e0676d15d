"""Shared helpers for the test suite: instance generators and a second,
structurally independent reference implementation used to validate the
oracle itself on small inputs."""
from __future__ import annotations

import sys
from functools import lru_cache

import numpy as np

from wavealign import Alphabet, ScoringScheme, Sequence

DNA = Alphabet.dna(wildcard=False)
PROTEIN = Alphabet.protein()

NEG = -(10 ** 15)


def make_seq(text: str, alphabet: Alphabet = DNA, seq_id: str = "s") -> Sequence:
    return Sequence.make(seq_id, text, alphabet)


def random_scheme(rng: np.random.Generator, alphabet: Alphabet = DNA) -> ScoringScheme:
    return ScoringScheme.match_mismatch(
        alphabet,
        int(rng.integers(1, 6)),
        int(rng.integers(-5, 0)),
        int(rng.integers(0, 11)),
        int(rng.integers(1, 6)),
    )


def random_text(rng: np.random.Generator, n: int, alphabet: Alphabet = DNA) -> str:
    return "".join(rng.choice(list(alphabet.symbols), n))


def mutate(text: str, rate: float, rng: np.random.Generator,
           alphabet: Alphabet = DNA) -> str:
    """Substitutions, insertions and deletions at roughly the given rate."""
    out = []
    symbols = list(alphabet.symbols)
    for ch in text:
        r = rng.random()
        if r < rate / 3:
            out.append(symbols[int(rng.integers(0, len(symbols)))])
        elif r < 2 * rate / 3:
            out.append(ch)
            out.append(symbols[int(rng.integers(0, len(symbols)))])
        elif r < rate:
            pass
        else:
            out.append(ch)
    return "".join(out) or text[:1]


def random_pair(rng: np.random.Generator, kind: int, max_len: int = 300,
                alphabet: Alphabet = DNA) -> tuple[str, str]:
    """One of six instance shapes: random, similar, identical, one-symbol,
    repetitive, disjoint-alphabet."""
    la = int(rng.integers(1, max_len + 1))
    lb = int(rng.integers(1, max_len + 1))
    if kind == 1:
        a = random_text(rng, la, alphabet)
        return a, mutate(a, 0.1, rng, alphabet)
    if kind == 2:
        a = random_text(rng, la, alphabet)
        return a, a
    if kind == 3:
        syms = alphabet.symbols
        return syms[0], syms[int(rng.integers(0, len(syms)))]
    if kind == 4:
        unit = random_text(rng, int(rng.integers(1, 6)), alphabet)
        a = (unit * (la // len(unit) + 1))[:la]
        b = (unit * (lb // len(unit) + 1))[:lb]
        return a, b
    if kind == 5:
        half = len(alphabet.symbols) // 2
        a = "".join(rng.choice(list(alphabet.symbols[:half]), la))
        b = "".join(rng.choice(list(alphabet.symbols[half:]), lb))
        return a, b
    return random_text(rng, la, alphabet), random_text(rng, lb, alphabet)


# -- independent recursive reference ------------------------------------------
# Top-down memoized recurrences, deliberately structured differently from
# the oracle's bottom-up fill.

def ref_local_score(s1: str, s2: str, scheme: ScoringScheme) -> int:
    sub = scheme.substitution
    go, ge = scheme.gap_open, scheme.gap_extend
    sys.setrecursionlimit(10000 + 10 * (len(s1) + len(s2)))

    @lru_cache(maxsize=None)
    def h(i, j):
        if i == 0 or j == 0:
            return 0
        return max(0, h(i - 1, j - 1) + sub(s1[i - 1], s2[j - 1]), e(i, j), f(i, j))

    @lru_cache(maxsize=None)
    def e(i, j):
        if j == 0:
            return NEG
        return max(h(i, j - 1) - go - ge, e(i, j - 1) - ge)

    @lru_cache(maxsize=None)
    def f(i, j):
        if i == 0:
            return NEG
        return max(h(i - 1, j) - go - ge, f(i - 1, j) - ge)

    return max(
        h(i, j) for i in range(len(s1) + 1) for j in range(len(s2) + 1)
    )


def ref_global_score(s1: str, s2: str, scheme: ScoringScheme) -> int:
    """Affine-border global score (ordinary Needleman-Wunsch with Gotoh gaps)."""
    sub = scheme.substitution
    go, ge = scheme.gap_open, scheme.gap_extend
    sys.setrecursionlimit(10000 + 10 * (len(s1) + len(s2)))

    @lru_cache(maxsize=None)
    def h(i, j):
        if i == 0 and j == 0:
            return 0
        best = NEG
        if i > 0 and j > 0:
            best = h(i - 1, j - 1) + sub(s1[i - 1], s2[j - 1])
        best = max(best, e(i, j), f(i, j))
        return best

    @lru_cache(maxsize=None)
    def e(i, j):
        if j == 0:
            return NEG
        return max(h(i, j - 1) - go - ge, e(i, j - 1) - ge)

    @lru_cache(maxsize=None)
    def f(i, j):
        if i == 0:
            return NEG
        return max(h(i - 1, j) - go - ge, f(i - 1, j) - ge)

    return h(len(s1), len(s2))
