"""Phase 2: constrained reverse pass locating the alignment start point.

The pass runs over the reversed prefixes that end at the phase-1 endpoint.
Borders are minus infinity except the origin (the endpoint), scores may go
negative, and the smallest start coordinate whose score equals the known
optimum is returned.

Banding per Ukkonen: a deformation bound t (score over the best
substitution score), a maximal alignment extent m', and a padding p define
the admissible diagonal corridor [-p, p + (m - n)] in longer-minus-shorter
units, with banding applied at block granularity. On top of the corridor
the applied band is widened to the indel budget floor((max_sub*n - score) /
gap_extend): the corridor formulas divide the gap budget by gap_extend
alone, which can under-cover when the best substitution score exceeds 1,
and a too-narrow band would break the exactness contract.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .engine import PassSpec, WavefrontEngine, global_borders, restricted_borders
from .errors import StartNotFound
from .kernels import NEG_INF, TRACK_MAX
from .model import Coord, ScoringScheme, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BandSpec:
    """Diagonal corridor for a known-score alignment ending at the origin."""

    t: int          # deformation bound
    m_prime: int    # maximum extent along the longer sequence
    p: int          # padding
    lo: int         # admissible interval in (longer - shorter) units
    hi: int
    degenerate: bool = False


def compute_band(
    score: int, n_short: int, m_long: int, scheme: ScoringScheme
) -> BandSpec:
    """Band parameters for a local alignment of known score over prefixes
    of lengths n_short <= m_long."""
    if score < 1:
        raise ValueError("banding needs a positive known score")
    if n_short > m_long:
        raise ValueError("n_short must not exceed m_long")
    t = score // scheme.max_substitution_score
    degenerate = t > n_short
    if degenerate:
        logger.warning(
            "degenerate band: deformation %d exceeds short length %d; clamping",
            t, n_short,
        )
        t = n_short
    m_prime = min(n_short + (n_short - t) // scheme.gap_extend, m_long)
    p = max(0, math.ceil(0.5 * (2 * n_short - t - m_prime)))
    return BandSpec(t, m_prime, p, -p, p + (m_long - n_short), degenerate)


def indel_budget(score: int, n_short: int, scheme: ScoringScheme) -> int:
    """Upper bound on total gap length in any alignment achieving score."""
    return max(0, (scheme.max_substitution_score * n_short - score)
               // scheme.gap_extend)


def applied_interval(
    band: BandSpec, score: int, n_short: int, scheme: ScoringScheme
) -> tuple[int, int]:
    """The corridor actually enforced: the BandSpec corridor widened to
    cover [-g, g] for the indel budget g (soundness floor)."""
    g = indel_budget(score, n_short, scheme)
    return min(band.lo, -g), max(band.hi, g)


def restricted_search(
    rcodes1: np.ndarray,
    rcodes2: np.ndarray,
    scheme: ScoringScheme,
    target: int,
    interval: tuple[int, int] | None,
    engine: WavefrontEngine,
    preopen_vgap: bool = False,
    track: int = TRACK_MAX,
    gap_tolerant: bool = False,
) -> tuple[int, int]:
    """Run an origin-anchored pass and return the cell attaining target.

    track TRACK_MAX prefers the largest (i, j) among hits (start location
    on reversed inputs), TRACK_MIN the smallest (end location on forward
    inputs). Raises StartNotFound when no cell attains the target.

    With gap_tolerant the borders price a leading gap run at its affine
    cost instead of forbidding it. A true local optimum never begins or
    ends inside a gap (stripping the run scores strictly higher), so plain
    start location keeps the minus-infinity borders; but the dual-split
    midpoint hands us middle-row targets whose folded gap states make a
    leading run part of the accounted score, and those searches must admit
    it. Anchoring is preserved either way: border chains still price paths
    from the origin.
    """
    n1, n2 = int(rcodes1.size), int(rcodes2.size)
    if gap_tolerant or preopen_vgap:
        top_h, top_f, left = global_borders(
            n2, scheme.gap_open, scheme.gap_extend,
            "continue" if preopen_vgap else "free",
        )
    else:
        top_h, top_f, left = restricted_borders(n2, scheme.gap_extend)
    spec = PassSpec(
        codes1=rcodes1,
        codes2=rcodes2,
        sub=scheme.matrix,
        gap_open=scheme.gap_open,
        gap_extend=scheme.gap_extend,
        clamp_zero=False,
        track=track,
        top_h=top_h,
        top_f=top_f,
        left_border=left,
        band=interval,
        fill_h=NEG_INF,
        prune=None,
    )
    res = engine.run_wavefront(spec)
    if res.best_i < 0 or res.best_score != target:
        raise StartNotFound(
            f"no cell attains the known score {target} "
            f"(best found: {res.best_score if res.best_i >= 0 else 'none'}); "
            "this indicates an internal bug"
        )
    return res.best_i, res.best_j


def locate_start(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    end: Coord,
    score: int,
    band: BandSpec | None,
    engine: WavefrontEngine,
) -> Coord:
    """Smallest (i, j) at which an optimal alignment ending at end begins."""
    if score < 1:
        raise ValueError("locate_start needs a positive score")
    rc1 = np.ascontiguousarray(seq1.codes[:end.i][::-1])
    rc2 = np.ascontiguousarray(seq2.codes[:end.j][::-1])
    interval = None
    if band is not None:
        n_short = min(end.i, end.j)
        lo, hi = applied_interval(band, score, n_short, scheme)
        # convert longer-minus-shorter units to this pass's (row - col)
        if end.i >= end.j:
            interval = (lo, hi)
        else:
            interval = (-hi, -lo)
    ri, rj = restricted_search(rc1, rc2, scheme, score, interval, engine)
    return Coord(end.i - ri - 1, end.j - rj - 1)
