"""Phase 3: linear-memory path reconstruction between known start and end.

Divide and conquer: a forward pass over the top half and a reverse pass
over the bottom half of a rectangle meet at the middle row; the column
where their combined score attains the rectangle's known score is a point
the optimal path crosses, splitting the problem in two. Recursion stops
when a rectangle is small enough for a direct quadratic-memory traceback.

A single gap can span a split row. The crossing therefore also considers
the vertical-gap states of both passes joined with one opening fee added
back (each pass charged its own), and children inherit flags that make
their border rules continue the gap without re-opening it.

Each subproblem is a global alignment of known score, so its passes and
leaf solves are banded: any alignment scoring s over an R x C rectangle
contains at most (max_sub*(R+C) - 2s) / (max_sub + 2*gap_extend) gap
columns, which caps how far the path can stray from the corner-to-corner
corridor.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import AllocationMeter, PassSpec, WavefrontEngine, global_borders
from .errors import DiscontiguousParts, ScoreMismatch
from .kernels import NEG_INF, TRACK_NONE, leaf_solve
from .model import (
    AlignmentPath,
    AlignmentSummary,
    Coord,
    Op,
    ScoringScheme,
    Sequence,
    score_of_path,
)

logger = logging.getLogger(__name__)

DEFAULT_LEAF_LIMIT = 128 * 128


@dataclass(frozen=True)
class Subproblem:
    """A rectangle of the DP matrix with a known global-alignment score.

    The vgap flags record whether the optimal path enters/leaves the
    rectangle inside a vertical gap; a flagged start continues the gap
    with no opening fee, a flagged end must finish with a DELETE.
    """

    start: Coord
    end: Coord
    expected: int
    start_vgap: bool = False
    end_vgap: bool = False

    @property
    def rows(self) -> int:
        return self.end.i - self.start.i

    @property
    def cols(self) -> int:
        return self.end.j - self.start.j


@dataclass(frozen=True)
class EditBound:
    """Deformation allowance for a known-score subproblem (reported only;
    the applied corridor comes from the gap budget below)."""

    t_edit: int

    @classmethod
    def for_rect(cls, rows: int, cols: int, score: int, scheme: ScoringScheme):
        t = max(rows, cols) - score // scheme.max_substitution_score
        return cls(max(0, t))


def band_interval(
    rows: int, cols: int, score: int, scheme: ScoringScheme
) -> tuple[int, int]:
    """Admissible (row - col) corridor for a global alignment of known score.

    Any path from (0,0) to (rows, cols) with g gap columns stays within
    (g - |rows - cols|) / 2 diagonals of the corner-to-corner corridor,
    and g is capped by the score: score <= max_sub * aligned - ge * g with
    2 * aligned + g = rows + cols.
    """
    d = rows - cols
    denom = scheme.max_substitution_score + 2 * scheme.gap_extend
    g = (scheme.max_substitution_score * (rows + cols) - 2 * score) // denom
    g = min(max(g, abs(d)), rows + cols)
    pad = (g - abs(d)) // 2
    return min(0, d) - pad, max(0, d) + pad


def _run_global_pass(codes1, codes2, scheme, lead, interval, engine):
    top_h, top_f, left = global_borders(
        int(codes2.size), scheme.gap_open, scheme.gap_extend, lead
    )
    spec = PassSpec(
        codes1=codes1,
        codes2=codes2,
        sub=scheme.matrix,
        gap_open=scheme.gap_open,
        gap_extend=scheme.gap_extend,
        clamp_zero=False,
        track=TRACK_NONE,
        top_h=top_h,
        top_f=top_f,
        left_border=left,
        band=interval,
        fill_h=NEG_INF,
        prune=None,
    )
    return engine.run_wavefront(spec)


def _pick_crossing(hh: np.ndarray, ff: np.ndarray) -> tuple[int, int, bool]:
    """Crossing column and join kind: best combined score, ties to the
    smallest column, plain join preferred over gap join at the same column."""
    best = max(int(hh.max()), int(ff.max()))
    cand_h = np.flatnonzero(hh == best)
    cand_f = np.flatnonzero(ff == best)
    jh = int(cand_h[0]) if cand_h.size else np.iinfo(np.int64).max
    jf = int(cand_f[0]) if cand_f.size else np.iinfo(np.int64).max
    if jh <= jf:
        return best, jh, False
    return best, jf, True


def find_crossing(
    sub: Subproblem,
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    engine: WavefrontEngine,
    band: bool = True,
) -> tuple[Coord, int, int, bool]:
    """Where the optimal path crosses the rectangle's middle row.

    Returns (crossing coord, upper score, lower score, gap_join). The lower
    score is in reverse-pass accounting: when gap_join is set, both halves
    charged an opening fee for the same gap, so upper + lower + gap_open
    equals the rectangle's score.
    """
    rows, cols = sub.rows, sub.cols
    if rows < 2:
        raise ValueError("crossing needs at least two rows")
    midr = rows // 2
    interval = band_interval(rows, cols, sub.expected, scheme) if band else None

    up1 = seq1.codes[sub.start.i:sub.start.i + midr]
    dn1 = np.ascontiguousarray(seq1.codes[sub.start.i + midr:sub.end.i][::-1])
    up2 = seq2.codes[sub.start.j:sub.end.j]
    dn2 = np.ascontiguousarray(up2[::-1])

    # a start_vgap child continues a gap whose fee was charged upstream; an
    # end_vgap child owns its trailing gap's opening fee, so its reverse
    # pass must charge it
    res_up = _run_global_pass(
        up1, up2, scheme, "continue" if sub.start_vgap else "free",
        interval, engine,
    )
    rev_interval = None
    if interval is not None:
        rev_interval = (rows - cols - interval[1], rows - cols - interval[0])
    res_dn = _run_global_pass(
        dn1, dn2, scheme, "charge" if sub.end_vgap else "free",
        rev_interval, engine,
    )

    hh = res_up.final_row_h + res_dn.final_row_h[::-1]
    ff = res_up.final_row_f + res_dn.final_row_f[::-1] + scheme.gap_open
    best, j, gap_join = _pick_crossing(hh, ff)
    if best != sub.expected:
        raise ScoreMismatch(
            f"middle-row combination reached {best}, expected {sub.expected}"
        )
    if gap_join:
        upper = int(res_up.final_row_f[j])
        lower = int(res_dn.final_row_f[cols - j])
    else:
        upper = int(res_up.final_row_h[j])
        lower = int(res_dn.final_row_h[cols - j])
    return Coord(sub.start.i + midr, sub.start.j + j), upper, lower, gap_join


def _gap_run_score(length: int, opened_upstream: bool, scheme: ScoringScheme) -> int:
    if length == 0:
        return 0
    open_fee = 0 if opened_upstream else scheme.gap_open
    return -(open_fee + length * scheme.gap_extend)


def _solve_leaf(
    sub: Subproblem,
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    band: bool,
    meter: AllocationMeter | None,
) -> np.ndarray:
    rows, cols = sub.rows, sub.cols
    if rows == 0 and cols == 0:
        if sub.expected != 0:
            raise ScoreMismatch("empty rectangle with nonzero expected score")
        return np.empty(0, dtype=np.uint8)
    if rows == 0:
        if sub.start_vgap or sub.end_vgap:
            raise ScoreMismatch("vertical gap flags on a rectangle with no rows")
        if sub.expected != _gap_run_score(cols, False, scheme):
            raise ScoreMismatch("pure insert run does not reproduce expected score")
        return np.full(cols, Op.INSERT, dtype=np.uint8)
    if cols == 0:
        if sub.expected != _gap_run_score(rows, sub.start_vgap, scheme):
            raise ScoreMismatch("pure delete run does not reproduce expected score")
        return np.full(rows, Op.DELETE, dtype=np.uint8)

    if band:
        lo, hi = band_interval(rows, cols, sub.expected, scheme)
    else:
        lo, hi = -(rows + cols), rows + cols
    c1 = seq1.codes[sub.start.i:sub.end.i]
    c2 = seq2.codes[sub.start.j:sub.end.j]
    ops_out = np.empty(rows + cols, dtype=np.uint8)
    cells = 3 * (rows + 1) * (cols + 1) + ops_out.size
    if meter is not None:
        meter.add(cells)
    try:
        achieved, count = leaf_solve(
            c1, c2, scheme.matrix, scheme.gap_open, scheme.gap_extend,
            sub.start_vgap, sub.end_vgap, lo, hi, ops_out,
        )
    finally:
        if meter is not None:
            meter.release(cells)
    if count < 0 or achieved != sub.expected:
        raise ScoreMismatch(
            f"leaf solve reached {achieved}, expected {sub.expected} "
            f"({rows}x{cols} rectangle at {sub.start})"
        )
    return ops_out[:count].copy()


def solve_rect(
    sub: Subproblem,
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    engine: WavefrontEngine,
    leaf_limit: int = DEFAULT_LEAF_LIMIT,
    band: bool = True,
    concurrent_leaves: bool = False,
) -> np.ndarray:
    """Full op sequence for one known-score rectangle."""
    leaves: list[Subproblem] = []

    def collect(s: Subproblem):
        if s.rows * s.cols <= leaf_limit or s.rows <= 1 or s.cols <= 1:
            leaves.append(s)
            return
        mid, upper, lower, gap_join = find_crossing(
            s, seq1, seq2, scheme, engine, band
        )
        collect(Subproblem(s.start, mid, upper, s.start_vgap, gap_join))
        lower_expected = lower + (scheme.gap_open if gap_join else 0)
        collect(Subproblem(mid, s.end, lower_expected, gap_join, s.end_vgap))

    collect(sub)

    def leaf(s: Subproblem) -> np.ndarray:
        return _solve_leaf(s, seq1, seq2, scheme, band, engine.meter)

    if concurrent_leaves and len(leaves) > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            parts = list(pool.map(leaf, leaves))
    else:
        parts = [leaf(s) for s in leaves]
    if not parts:
        return np.empty(0, dtype=np.uint8)
    return np.concatenate(parts)


def reconstruct(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    summary: AlignmentSummary,
    engine: WavefrontEngine,
    leaf_limit: int = DEFAULT_LEAF_LIMIT,
    band: bool = True,
    concurrent_leaves: bool = False,
) -> AlignmentPath:
    """Full alignment path for a summary produced by phases 1 and 2."""
    if summary.score == 0:
        return AlignmentPath.empty()
    root = Subproblem(summary.start, summary.end, summary.score)
    ops = solve_rect(
        root, seq1, seq2, scheme, engine, leaf_limit, band, concurrent_leaves
    )
    path = AlignmentPath(summary.start, ops)
    achieved = score_of_path(path, seq1, seq2, scheme)
    if achieved != summary.score:
        raise ScoreMismatch(
            f"reconstructed path scores {achieved}, expected {summary.score}"
        )
    return path


def join_paths(parts: list[AlignmentPath]) -> AlignmentPath:
    """Concatenate coordinate-contiguous sub-paths. Adjacent gap runs across
    seams merge into one run when re-scored, which is exactly the affine
    accounting the split flags arranged for."""
    if not parts:
        return AlignmentPath.empty()
    for left, right in zip(parts, parts[1:]):
        if left.end != right.start:
            raise DiscontiguousParts(
                f"part ends at {left.end} but next starts at {right.start}"
            )
    ops = np.concatenate([p.ops for p in parts]) if parts else None
    return AlignmentPath(parts[0].start, ops)
