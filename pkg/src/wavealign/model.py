"""Alphabets, sequences, scoring schemes, coordinates and alignment paths.

Conventions used throughout the package:

* scores are plain integers; fractional schemes must be pre-scaled
* a gap of length k costs gap_open + k * gap_extend
* coordinates are 0-based half-open; display formats convert to 1-based
* an INSERT consumes the second sequence, a DELETE consumes the first
* when no positive-scoring local alignment exists, the result is score 0
  with start == end == (0, 0) and an empty path
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import (
    IllegalResidue,
    IncompleteMatrix,
    NonPositiveMaxScore,
    PathInconsistent,
)

#: Substitution value marking an undefined symbol pair in a partly-built table.
UNDEFINED_SCORE = np.iinfo(np.int64).min


class Op(IntEnum):
    MATCH = 0
    MISMATCH = 1
    INSERT = 2   # consumes seq2
    DELETE = 3   # consumes seq1


_CIGAR_CHAR = "=XID"
_CIGAR_RE = re.compile(r"(\d+)([=XID])")

DNA_SYMBOLS = "ACGT"
PROTEIN_SYMBOLS = "ACDEFGHIKLMNPQRSTVWY"


@dataclass(frozen=True)
class Alphabet:
    """An ordered residue set with an optional zero-scoring wildcard symbol."""

    kind: str                      # "nucleotide" or "protein"
    symbols: str                   # ordered, unique, upper-case
    wildcard: str | None = None    # member symbol scoring 0 against everything
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet: {self.symbols!r}")
        if self.wildcard is not None and self.wildcard not in self.symbols:
            raise ValueError(f"wildcard {self.wildcard!r} not in alphabet")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def dna(cls, wildcard: bool = True) -> "Alphabet":
        """DNA alphabet; by default 'N' is allowed and scores 0 against all."""
        if wildcard:
            return cls("nucleotide", DNA_SYMBOLS + "N", "N")
        return cls("nucleotide", DNA_SYMBOLS)

    @classmethod
    def protein(cls) -> "Alphabet":
        return cls("protein", PROTEIN_SYMBOLS)

    @classmethod
    def from_symbols(cls, kind: str, symbols: Iterable[str]) -> "Alphabet":
        return cls(kind, "".join(symbols).upper())

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    def encode(self, residues: str) -> np.ndarray:
        """Map residues to uint8 codes, rejecting anything outside the alphabet."""
        lut = np.full(256, 255, dtype=np.uint8)
        for sym, i in self._index.items():
            lut[ord(sym)] = i
        raw = np.frombuffer(residues.encode("ascii", "replace"), dtype=np.uint8)
        codes = lut[raw]
        bad = np.flatnonzero(codes == 255)
        if bad.size:
            pos = int(bad[0])
            raise IllegalResidue(
                f"illegal residue {residues[pos]!r} at offset {pos}", pos
            )
        return codes


@dataclass(frozen=True)
class Sequence:
    """A validated residue string with an identifier."""

    id: str
    residues: str
    alphabet: Alphabet
    codes: np.ndarray = field(repr=False, compare=False, default=None)

    @classmethod
    def make(cls, seq_id: str, text: str, alphabet: Alphabet) -> "Sequence":
        residues = text.upper()
        return cls(seq_id, residues, alphabet, alphabet.encode(residues))

    def __post_init__(self):
        if self.codes is None:
            object.__setattr__(self, "codes", self.alphabet.encode(self.residues))

    def __len__(self) -> int:
        return len(self.residues)


class Coord(NamedTuple):
    i: int   # index into the first sequence
    j: int   # index into the second sequence


@dataclass(frozen=True)
class ScoringScheme:
    """Substitution scores plus affine gap penalties.

    ``matrix[a, b]`` holds the substitution score for code pair (a, b).
    ``max_substitution_score`` must equal the true maximum over the alphabet;
    ``validate_scheme`` recomputes and enforces this.
    """

    alphabet: Alphabet
    matrix: np.ndarray               # (K, K) int64
    gap_open: int
    gap_extend: int
    max_substitution_score: int

    def __post_init__(self):
        if self.gap_open < 0:
            raise ValueError("gap_open must be non-negative")
        if self.gap_extend < 1:
            raise ValueError("gap_extend must be positive")
        k = len(self.alphabet)
        if self.matrix.shape != (k, k):
            raise ValueError("substitution matrix shape does not match alphabet")

    def substitution(self, a: str, b: str) -> int:
        return int(self.matrix[self.alphabet.index(a), self.alphabet.index(b)])

    @classmethod
    def match_mismatch(
        cls,
        alphabet: Alphabet,
        match: int,
        mismatch: int,
        gap_open: int,
        gap_extend: int,
    ) -> "ScoringScheme":
        k = len(alphabet)
        m = np.full((k, k), mismatch, dtype=np.int64)
        np.fill_diagonal(m, match)
        if alphabet.wildcard is not None:
            w = alphabet.index(alphabet.wildcard)
            m[w, :] = 0
            m[:, w] = 0
        return cls(alphabet, m, gap_open, gap_extend, int(m.max()))

    @classmethod
    def from_table(
        cls,
        alphabet: Alphabet,
        table: Mapping[tuple[str, str], int],
        gap_open: int,
        gap_extend: int,
    ) -> "ScoringScheme":
        """Build from a (symbol, symbol) -> score mapping; missing pairs stay
        undefined and are rejected by validate_scheme."""
        k = len(alphabet)
        m = np.full((k, k), UNDEFINED_SCORE, dtype=np.int64)
        for (a, b), score in table.items():
            if a in alphabet and b in alphabet:
                m[alphabet.index(a), alphabet.index(b)] = int(score)
        defined = m[m != UNDEFINED_SCORE]
        max_sub = int(defined.max()) if defined.size else 0
        return cls(alphabet, m, gap_open, gap_extend, max_sub)


def validate_scheme(scheme: ScoringScheme) -> ScoringScheme:
    """Recompute and verify max_substitution_score; reject unusable schemes."""
    if np.any(scheme.matrix == UNDEFINED_SCORE):
        a, b = np.argwhere(scheme.matrix == UNDEFINED_SCORE)[0]
        raise IncompleteMatrix(
            "substitution undefined for pair "
            f"({scheme.alphabet.symbols[a]!r}, {scheme.alphabet.symbols[b]!r})"
        )
    true_max = int(scheme.matrix.max())
    if true_max <= 0:
        raise NonPositiveMaxScore(
            f"maximum substitution score is {true_max}; "
            "no positive-scoring local alignment can exist"
        )
    if true_max == scheme.max_substitution_score:
        return scheme
    return ScoringScheme(
        scheme.alphabet, scheme.matrix, scheme.gap_open, scheme.gap_extend, true_max
    )


@dataclass(frozen=True)
class AlignmentSummary:
    """Score plus start/end coordinates (the product of phases 1 and 2)."""

    score: int
    start: Coord
    end: Coord

    def __post_init__(self):
        if self.score < 0:
            raise ValueError("local alignment score cannot be negative")
        if self.start.i > self.end.i or self.start.j > self.end.j:
            raise ValueError(f"start {self.start} exceeds end {self.end}")
        if (self.score == 0) != (self.start == self.end):
            raise ValueError("score 0 must pair with an empty region and vice versa")

    @classmethod
    def empty(cls) -> "AlignmentSummary":
        return cls(0, Coord(0, 0), Coord(0, 0))


_CONSUMES_1 = np.array([1, 1, 0, 1], dtype=np.int64)   # by Op code
_CONSUMES_2 = np.array([1, 1, 1, 0], dtype=np.int64)


@dataclass(frozen=True)
class AlignmentPath:
    """Ordered edit operations anchored at a start coordinate."""

    start: Coord
    ops: np.ndarray   # uint8 array of Op codes

    def __post_init__(self):
        object.__setattr__(
            self, "ops", np.ascontiguousarray(self.ops, dtype=np.uint8)
        )

    def __len__(self) -> int:
        return int(self.ops.size)

    @property
    def end(self) -> Coord:
        if self.ops.size == 0:
            return self.start
        return Coord(
            self.start.i + int(_CONSUMES_1[self.ops].sum()),
            self.start.j + int(_CONSUMES_2[self.ops].sum()),
        )

    @classmethod
    def empty(cls) -> "AlignmentPath":
        return cls(Coord(0, 0), np.empty(0, dtype=np.uint8))


def _op_runs(ops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run-length encode an op array: (run op codes, run lengths)."""
    if ops.size == 0:
        return ops, np.empty(0, dtype=np.int64)
    boundaries = np.flatnonzero(np.diff(ops)) + 1
    starts = np.concatenate(([0], boundaries))
    lengths = np.diff(np.concatenate((starts, [ops.size])))
    return ops[starts], lengths


def score_of_path(
    path: AlignmentPath,
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
) -> int:
    """Re-score a path: substitution scores minus affine costs per gap run.

    Raises PathInconsistent when op labels contradict the residues or the
    path walks out of bounds.
    """
    ops = path.ops
    if ops.size == 0:
        return 0
    i_steps = _CONSUMES_1[ops]
    j_steps = _CONSUMES_2[ops]
    i_idx = path.start.i + np.cumsum(i_steps) - 1
    j_idx = path.start.j + np.cumsum(j_steps) - 1
    if path.start.i < 0 or path.start.j < 0:
        raise PathInconsistent("negative start coordinate")
    if int(i_steps.sum()) > 0 and int(i_idx[-1]) >= len(seq1):
        raise PathInconsistent("path overruns the first sequence")
    if int(j_steps.sum()) > 0 and int(j_idx[-1]) >= len(seq2):
        raise PathInconsistent("path overruns the second sequence")

    diag = ops <= Op.MISMATCH
    a = seq1.codes[i_idx[diag]]
    b = seq2.codes[j_idx[diag]]
    equal = a == b
    labelled_match = ops[diag] == Op.MATCH
    if not np.array_equal(equal, labelled_match):
        k = int(np.flatnonzero(equal != labelled_match)[0])
        raise PathInconsistent(f"op label contradicts residues at diagonal step {k}")
    subs = int(scheme.matrix[a, b].sum())

    run_ops, run_lens = _op_runs(ops)
    gap_runs = run_ops >= Op.INSERT
    n_gap_runs = int(gap_runs.sum())
    gap_total = int(run_lens[gap_runs].sum())
    return subs - n_gap_runs * scheme.gap_open - gap_total * scheme.gap_extend


def path_to_cigar(path: AlignmentPath) -> str:
    """Extended CIGAR (=, X, I, D) with run-length counts."""
    run_ops, run_lens = _op_runs(path.ops)
    return "".join(f"{n}{_CIGAR_CHAR[o]}" for o, n in zip(run_ops, run_lens))


def cigar_to_ops(text: str) -> np.ndarray:
    """Inverse of path_to_cigar (op codes only; the anchor is external)."""
    consumed = 0
    parts = []
    for m in _CIGAR_RE.finditer(text):
        consumed += len(m.group(0))
        n = int(m.group(1))
        parts.append(np.full(n, _CIGAR_CHAR.index(m.group(2)), dtype=np.uint8))
    if consumed != len(text):
        raise ValueError(f"malformed CIGAR: {text!r}")
    if not parts:
        return np.empty(0, dtype=np.uint8)
    return np.concatenate(parts)
