"""Phase 1: forward local-alignment scoring pass with block pruning.

Produces the optimal local score and its endpoint. The endpoint tie-break
is the lexicographically smallest (i, j), matching the reference oracle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .engine import PassResult, PassSpec, WavefrontEngine, local_borders
from .kernels import TRACK_MIN
from .model import Coord, ScoringScheme, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoredEndpoint:
    score: int
    end: Coord


def prune_verdict(
    best_so_far: int,
    max_substitution_score: int,
    len1: int,
    len2: int,
    input_max: int,
    origin: Coord,
) -> bool:
    """True when no path through the block can reach best_so_far.

    input_max is the highest H entering the block's boundary (at least 0 in
    local mode, since an alignment may start fresh inside the block). From
    the block's top-left origin at most min(remaining rows, remaining cols)
    aligned columns can still be added, each worth at most the maximum
    substitution score. Strict inequality keeps equal-scoring alignments.
    """
    remaining = min(len1 - origin.i, len2 - origin.j)
    return input_max + max_substitution_score * remaining < best_so_far


def best_local(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    engine: WavefrontEngine,
    prune: bool = True,
) -> tuple[ScoredEndpoint, PassResult]:
    """Optimal local score and endpoint over the full matrix."""
    n1, n2 = len(seq1), len(seq2)
    top_h, top_f, left = local_borders(n2)
    hook = None
    if prune:
        max_sub = scheme.max_substitution_score

        def hook(input_max, oi, oj, best):
            return max(input_max, 0) + max_sub * min(n1 - oi, n2 - oj) < best

    spec = PassSpec(
        codes1=seq1.codes,
        codes2=seq2.codes,
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
        prune=hook,
    )
    res = engine.run_wavefront(spec)
    if res.pruned_blocks:
        logger.debug(
            "pruned %d of %d blocks (%.1f%%)",
            res.pruned_blocks, res.total_blocks,
            100.0 * res.pruned_blocks / res.total_blocks,
        )
    if res.best_score <= 0:
        return ScoredEndpoint(0, Coord(0, 0)), res
    return ScoredEndpoint(res.best_score, Coord(res.best_i + 1, res.best_j + 1)), res
