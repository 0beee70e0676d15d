"""Dual-worker decomposition: score the two halves of the matrix at once.

The row range is halved. One engine runs the ordinary forward local pass
over the upper half while a second engine concurrently runs the same pass
over the reversed lower half (whose endpoint, in forward terms, is a start
point). The halves' middle rows combine exactly like a reconstruction
split, yielding three candidate optima: wholly in the upper half, wholly
in the lower half, or crossing the boundary. Each case finishes with the
corresponding single-pipeline machinery.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import AllocationMeter, PassSpec, WavefrontEngine, local_borders
from .errors import ScoreMismatch
from .kernels import TRACK_MAX, TRACK_MIN
from .model import (
    AlignmentPath,
    AlignmentSummary,
    Coord,
    ScoringScheme,
    Sequence,
    score_of_path,
)
from . import phase2, phase3

logger = logging.getLogger(__name__)


@dataclass
class MidCombine:
    """The three candidate optima plus what the crossing needs later.

    upper_seg / lower_seg are the middle-row values at the crossing column
    in each pass's own accounting; with a gap join both include an opening
    fee for the same gap, so mid_score = upper_seg + lower_seg + gap_open.
    """

    upper_score: int
    upper_end: Coord
    lower_score: int
    lower_start: Coord
    mid_score: int
    mid_col: int
    gap_join: bool
    upper_seg: int
    lower_seg: int


def classify_midcase(mc: MidCombine) -> str:
    """Argmax of the three candidate scores; ties upper > midpoint > lower."""
    if mc.upper_score >= mc.mid_score and mc.upper_score >= mc.lower_score:
        return "upper"
    if mc.mid_score >= mc.lower_score:
        return "midpoint"
    return "lower"


def _local_pass(codes1, codes2, scheme, engine):
    top_h, top_f, left = local_borders(int(codes2.size))
    spec = PassSpec(
        codes1=codes1,
        codes2=codes2,
        sub=scheme.matrix,
        gap_open=scheme.gap_open,
        gap_extend=scheme.gap_extend,
        clamp_zero=True,
        track=TRACK_MIN,
        top_h=top_h,
        top_f=top_f,
        left_border=left,
        band=None,
        fill_h=0,
        prune=None,
    )
    return engine.run_wavefront(spec)


def split_align(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    workers: int = 2,
    block_rows: int = 512,
    block_cols: int = 512,
    leaf_limit: int = phase3.DEFAULT_LEAF_LIMIT,
    band: bool = True,
    concurrent_leaves: bool = False,
    meter: AllocationMeter | None = None,
    report: dict | None = None,
) -> tuple[AlignmentSummary, AlignmentPath]:
    """Align with the matrix split into two concurrently scored halves.

    The result score always equals the single-pipeline score and the path
    re-scores to it; tie-breaks may pick a different co-optimal alignment.
    """
    n1, n2 = len(seq1), len(seq2)
    mid = n1 // 2
    per_half = max(1, workers // 2)
    go = scheme.gap_open

    up1 = seq1.codes[:mid]
    dn1 = np.ascontiguousarray(seq1.codes[mid:][::-1])
    dn2 = np.ascontiguousarray(seq2.codes[::-1])

    eng_up = WavefrontEngine(per_half, block_rows, block_cols, meter)
    eng_dn = WavefrontEngine(per_half, block_rows, block_cols, meter)
    try:
        if mid >= 1:
            with ThreadPoolExecutor(max_workers=2) as pool:
                fut_up = pool.submit(_local_pass, up1, seq2.codes, scheme, eng_up)
                fut_dn = pool.submit(_local_pass, dn1, dn2, scheme, eng_dn)
                res_up = fut_up.result()
                res_dn = fut_dn.result()
        else:
            res_up = None
            res_dn = _local_pass(dn1, dn2, scheme, eng_dn)

        if res_up is not None:
            upper_score = max(0, res_up.best_score)
            upper_end = (
                Coord(res_up.best_i + 1, res_up.best_j + 1)
                if upper_score > 0 else Coord(0, 0)
            )
            hh = res_up.final_row_h + res_dn.final_row_h[::-1]
            ff = res_up.final_row_f + res_dn.final_row_f[::-1] + go
            mid_score, jc, gap_join = phase3._pick_crossing(hh, ff)
            if gap_join:
                upper_seg = int(res_up.final_row_f[jc])
                lower_seg = int(res_dn.final_row_f[n2 - jc])
            else:
                upper_seg = int(res_up.final_row_h[jc])
                lower_seg = int(res_dn.final_row_h[n2 - jc])
        else:
            upper_score, upper_end = 0, Coord(0, 0)
            mid_score, jc, gap_join = 0, 0, False
            upper_seg = lower_seg = 0

        lower_score = max(0, res_dn.best_score)
        if lower_score > 0:
            # the reverse endpoint is, in forward terms, the start point
            lower_start = Coord(n1 - (res_dn.best_i + 1), n2 - (res_dn.best_j + 1))
        else:
            lower_start = Coord(0, 0)

        mc = MidCombine(
            upper_score, upper_end, lower_score, lower_start,
            int(mid_score), int(jc), bool(gap_join), upper_seg, lower_seg,
        )
        case = classify_midcase(mc)
        if report is not None:
            report.update(
                case=case,
                upper_score=mc.upper_score,
                lower_score=mc.lower_score,
                mid_score=mc.mid_score,
                upper_rows=(0, mid),
                lower_rows=(mid, n1),
                upper_cells=res_up.cells_executed if res_up else 0,
                lower_cells=res_dn.cells_executed,
            )
        logger.debug("split case %s (upper=%d lower=%d mid=%d)",
                     case, mc.upper_score, mc.lower_score, mc.mid_score)

        if case == "upper":
            if mc.upper_score == 0:
                return AlignmentSummary.empty(), AlignmentPath.empty()
            return _finish_upper(seq1, seq2, scheme, mc, eng_up,
                                 leaf_limit, band, concurrent_leaves)
        if case == "lower":
            return _finish_lower(seq1, seq2, scheme, mc, eng_dn,
                                 leaf_limit, band, concurrent_leaves)
        return _finish_midpoint(seq1, seq2, scheme, mc, mid, eng_up, eng_dn,
                                leaf_limit, band, concurrent_leaves)
    finally:
        eng_up.close()
        eng_dn.close()


def _search_interval(score, rows, cols, scheme, band):
    """Engine-units corridor for a restricted search, or None without banding."""
    if not band:
        return None
    n_short, m_long = min(rows, cols), max(rows, cols)
    bspec = phase2.compute_band(score, n_short, m_long, scheme)
    lo, hi = phase2.applied_interval(bspec, score, n_short, scheme)
    return (lo, hi) if rows >= cols else (-hi, -lo)


def _finish_upper(seq1, seq2, scheme, mc, engine, leaf_limit, band, conc):
    score, end = mc.upper_score, mc.upper_end
    bspec = None
    if band:
        bspec = phase2.compute_band(score, min(end.i, end.j),
                                    max(end.i, end.j), scheme)
    start = phase2.locate_start(seq1, seq2, scheme, end, score, bspec, engine)
    summary = AlignmentSummary(score, start, end)
    path = phase3.reconstruct(seq1, seq2, scheme, summary, engine,
                              leaf_limit, band, conc)
    return summary, path


def _finish_lower(seq1, seq2, scheme, mc, engine, leaf_limit, band, conc):
    score, start = mc.lower_score, mc.lower_start
    n1, n2 = len(seq1), len(seq2)
    sc1 = seq1.codes[start.i:]
    sc2 = seq2.codes[start.j:]
    interval = _search_interval(score, n1 - start.i, n2 - start.j, scheme, band)
    ci, cj = phase2.restricted_search(
        sc1, sc2, scheme, score, interval, engine, track=TRACK_MIN
    )
    end = Coord(start.i + ci + 1, start.j + cj + 1)
    summary = AlignmentSummary(score, start, end)
    path = phase3.reconstruct(seq1, seq2, scheme, summary, engine,
                              leaf_limit, band, conc)
    return summary, path


def _finish_midpoint(seq1, seq2, scheme, mc, mid, eng_up, eng_dn,
                     leaf_limit, band, conc):
    jc, gap = mc.mid_col, mc.gap_join
    go = scheme.gap_open
    cross = Coord(mid, jc)
    upper_expected = mc.upper_seg                      # charges the open if gap
    upper_target = mc.upper_seg + (go if gap else 0)   # pre-open accounting
    lower_expected = mc.lower_seg + (go if gap else 0)

    # when the midpoint case wins only by tie-break, one side may be empty:
    # the alignment touches the boundary rather than crossing it
    upper_empty = not gap and mc.upper_seg == 0

    if upper_empty:
        ustart = cross
        upper_sub = None
    else:
        # locate the upper segment's start: reverse restricted search over
        # the prefixes ending at the crossing, continuing the gap when one
        # spans it
        rc1 = np.ascontiguousarray(seq1.codes[:mid][::-1])
        rc2 = np.ascontiguousarray(seq2.codes[:jc][::-1])
        interval = None
        if upper_target >= 1:
            interval = _search_interval(upper_target, mid, jc, scheme, band)
        ri, rj = phase2.restricted_search(
            rc1, rc2, scheme, upper_target, interval, eng_up,
            preopen_vgap=gap, track=TRACK_MAX, gap_tolerant=True,
        )
        ustart = Coord(mid - ri - 1, jc - rj - 1)
        upper_sub = phase3.Subproblem(ustart, cross, upper_expected,
                                      start_vgap=False, end_vgap=gap)

    # the lower side is never empty when the midpoint case is selected
    # (it strictly beats staying inside the upper half)
    fc1 = seq1.codes[mid:]
    fc2 = seq2.codes[jc:]
    n1, n2 = len(seq1), len(seq2)
    interval = None
    if lower_expected >= 1:
        interval = _search_interval(lower_expected, n1 - mid, n2 - jc,
                                    scheme, band)
    ci, cj = phase2.restricted_search(
        fc1, fc2, scheme, lower_expected, interval, eng_dn,
        preopen_vgap=gap, track=TRACK_MIN, gap_tolerant=True,
    )
    lend = Coord(mid + ci + 1, jc + cj + 1)
    lower_sub = phase3.Subproblem(cross, lend, lower_expected,
                                  start_vgap=gap, end_vgap=False)

    # the halves reconstruct independently, then concatenate
    if upper_sub is None:
        ops_up = np.empty(0, dtype=np.uint8)
        ops_dn = phase3.solve_rect(lower_sub, seq1, seq2, scheme, eng_dn,
                                   leaf_limit, band, conc)
    else:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fut_up = pool.submit(phase3.solve_rect, upper_sub, seq1, seq2,
                                 scheme, eng_up, leaf_limit, band, conc)
            fut_dn = pool.submit(phase3.solve_rect, lower_sub, seq1, seq2,
                                 scheme, eng_dn, leaf_limit, band, conc)
            ops_up = fut_up.result()
            ops_dn = fut_dn.result()

    path = phase3.join_paths([
        AlignmentPath(ustart, ops_up),
        AlignmentPath(cross, ops_dn),
    ])
    summary = AlignmentSummary(mc.mid_score, ustart, lend)
    achieved = score_of_path(path, seq1, seq2, scheme)
    if achieved != summary.score:
        raise ScoreMismatch(
            f"joined midpoint path scores {achieved}, expected {summary.score}"
        )
    return summary, path
