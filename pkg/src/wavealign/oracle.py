"""Full-matrix Smith-Waterman / Needleman-Wunsch with traceback.

This module is the ground truth the rest of the package is tested against.
It is deliberately unoptimized: quadratic memory, no pruning, no banding,
no blocking. Its one job is to be obviously correct.

Three-matrix affine recurrences (Gotoh):

    E[i][j] = max(H[i][j-1] - gap_open - gap_extend, E[i][j-1] - gap_extend)
    F[i][j] = max(H[i-1][j] - gap_open - gap_extend, F[i-1][j] - gap_extend)
    H[i][j] = max(H[i-1][j-1] + sub(a, b), E[i][j], F[i][j])  [and 0 in local mode]

E ends in an op consuming the second sequence (INSERT), F in one consuming
the first (DELETE). Traceback ties resolve diagonal first, then E, then F,
and a gap closes rather than extends when both are optimal.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .errors import CellBudgetExceeded
from .model import (
    AlignmentPath,
    AlignmentSummary,
    Coord,
    Op,
    ScoringScheme,
    Sequence,
)

_NEG = -(2 ** 61)

#: Largest (len1+1)*(len2+1) the oracle will allocate by default.
DEFAULT_CELL_BUDGET = 10 ** 8


@njit(cache=True, nogil=True)
def _fill(c1, c2, sub, go, ge, H, E, F, clamp0):
    n = c1.size
    m = c2.size
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            e = H[i, j - 1] - go - ge
            t = E[i, j - 1] - ge
            if t > e:
                e = t
            f = H[i - 1, j] - go - ge
            t = F[i - 1, j] - ge
            if t > f:
                f = t
            h = H[i - 1, j - 1] + sub[c1[i - 1], c2[j - 1]]
            if e > h:
                h = e
            if f > h:
                h = f
            if clamp0 and h < 0:
                h = 0
            E[i, j] = e
            F[i, j] = f
            H[i, j] = h


def _matrices(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    mode: str,
    start_in_vgap: bool,
    cell_budget: int,
):
    n, m = len(seq1), len(seq2)
    if (n + 1) * (m + 1) > cell_budget:
        raise CellBudgetExceeded(
            f"{(n + 1) * (m + 1)} cells exceed the oracle budget of {cell_budget}"
        )
    go, ge = scheme.gap_open, scheme.gap_extend
    H = np.full((n + 1, m + 1), _NEG, dtype=np.int64)
    E = np.full((n + 1, m + 1), _NEG, dtype=np.int64)
    F = np.full((n + 1, m + 1), _NEG, dtype=np.int64)
    if mode == "local":
        H[0, :] = 0
        H[:, 0] = 0
    elif mode == "affine":
        H[0, 0] = 0
        ramp_m = -go - np.arange(1, m + 1, dtype=np.int64) * ge
        ramp_n = -go - np.arange(1, n + 1, dtype=np.int64) * ge
        H[0, 1:] = ramp_m
        E[0, 1:] = ramp_m
        H[1:, 0] = ramp_n
        F[1:, 0] = ramp_n
    elif mode == "pinned":
        H[0, 0] = 0
    else:
        raise ValueError(f"unknown border mode {mode!r}")
    if start_in_vgap:
        # the alignment must begin inside an already-open vertical gap: the
        # only exit from the origin is the no-open-fee DELETE chain down
        # column 0
        H[0, :] = _NEG
        E[0, :] = _NEG
        F[0, :] = _NEG
        F[0, 0] = 0
        ramp = -np.arange(1, n + 1, dtype=np.int64) * ge
        F[1:, 0] = ramp
        H[1:, 0] = ramp
        E[1:, 0] = _NEG
    _fill(seq1.codes, seq2.codes, scheme.matrix, go, ge, H, E, F, mode == "local")
    return H, E, F


def _traceback(H, E, F, c1, c2, sub, i, j, go, ge, state, stop_at_zero):
    ops = []
    while i > 0 or j > 0:
        if state == 0:
            if stop_at_zero and H[i, j] == 0:
                break
            if i > 0 and j > 0 and H[i, j] == H[i - 1, j - 1] + sub[c1[i - 1], c2[j - 1]]:
                ops.append(Op.MATCH if c1[i - 1] == c2[j - 1] else Op.MISMATCH)
                i -= 1
                j -= 1
            elif j > 0 and H[i, j] == E[i, j]:
                state = 1
            elif i > 0 and H[i, j] == F[i, j]:
                state = 2
            else:
                raise AssertionError("oracle traceback dead end in H")
        elif state == 1:
            ops.append(Op.INSERT)
            if E[i, j] == H[i, j - 1] - go - ge:
                state = 0
            elif E[i, j] != E[i, j - 1] - ge:
                raise AssertionError("oracle traceback dead end in E")
            j -= 1
        else:
            ops.append(Op.DELETE)
            if F[i, j] == H[i - 1, j] - go - ge:
                state = 0
            elif F[i, j] != F[i - 1, j] - ge:
                raise AssertionError("oracle traceback dead end in F")
            i -= 1
    ops.reverse()
    return Coord(i, j), np.array(ops, dtype=np.uint8)


def oracle_local(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> tuple[AlignmentSummary, AlignmentPath]:
    """Optimal local alignment; ties broken toward the smallest (end.i, end.j)."""
    H, E, F = _matrices(seq1, seq2, scheme, "local", False, cell_budget)
    flat = int(np.argmax(H))          # row-major argmax == lexicographic tie-break
    ei, ej = divmod(flat, H.shape[1])
    score = int(H[ei, ej])
    if score <= 0:
        return AlignmentSummary.empty(), AlignmentPath.empty()
    start, ops = _traceback(
        H, E, F, seq1.codes, seq2.codes, scheme.matrix,
        ei, ej, scheme.gap_open, scheme.gap_extend, 0, True,
    )
    summary = AlignmentSummary(score, start, Coord(ei, ej))
    return summary, AlignmentPath(start, ops)


def oracle_global(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    border_rule: str = "affine",
    start_in_vgap: bool = False,
    end_in_vgap: bool = False,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> tuple[int, AlignmentPath]:
    """Optimal global alignment of the full sequences.

    border_rule "affine" is the ordinary Needleman-Wunsch-with-affine-gaps
    border; "pinned" sets every border cell except the origin to the minus
    infinity sentinel, forcing the alignment to span corner to corner with
    no free leading gap. The vgap flags force the path to begin/end inside
    a vertical (DELETE) gap whose opening fee is charged only when the gap
    begins here (start_in_vgap continues a gap opened upstream for free).
    """
    if start_in_vgap and len(seq1) == 0:
        raise ValueError("cannot continue a vertical gap into an empty row range")
    H, E, F = _matrices(seq1, seq2, scheme, border_rule, start_in_vgap, cell_budget)
    n, m = len(seq1), len(seq2)
    if end_in_vgap:
        if n == 0:
            raise ValueError("cannot end a vertical gap with no rows")
        score = int(F[n, m])
        state = 2
    else:
        score = int(H[n, m])
        state = 0
    _, ops = _traceback(
        H, E, F, seq1.codes, seq2.codes, scheme.matrix,
        n, m, scheme.gap_open, scheme.gap_extend, state, False,
    )
    return score, AlignmentPath(Coord(0, 0), ops)


def rescore_path(
    path: AlignmentPath,
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
) -> int:
    """Single-pass re-scorer, independent of model.score_of_path."""
    i, j = path.start
    total = 0
    prev = -1
    for op in path.ops.tolist():
        if op <= Op.MISMATCH:
            total += int(scheme.matrix[seq1.codes[i], seq2.codes[j]])
            i += 1
            j += 1
        elif op == Op.INSERT:
            total -= scheme.gap_extend + (scheme.gap_open if prev != Op.INSERT else 0)
            j += 1
        else:
            total -= scheme.gap_extend + (scheme.gap_open if prev != Op.DELETE else 0)
            i += 1
        prev = op
    return total
