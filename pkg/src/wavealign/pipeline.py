"""Top-level alignment entry points tying the three phases together."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .engine import (
    AllocationMeter,
    DEFAULT_BLOCK_COLS,
    DEFAULT_BLOCK_ROWS,
    WavefrontEngine,
)
from .model import (
    AlignmentPath,
    AlignmentSummary,
    ScoringScheme,
    Sequence,
    validate_scheme,
)
from . import phase1, phase2, phase3, split as split_mod

logger = logging.getLogger(__name__)


@dataclass
class AlignConfig:
    workers: int = 1
    block_rows: int = DEFAULT_BLOCK_ROWS
    block_cols: int = DEFAULT_BLOCK_COLS
    leaf_limit: int = phase3.DEFAULT_LEAF_LIMIT
    prune: bool = True
    band: bool = True
    split: int = 1
    concurrent_leaves: bool = False
    meter: AllocationMeter | None = None

    def __post_init__(self):
        if self.split not in (1, 2):
            raise ValueError("split must be 1 or 2")
        if self.workers < 1 or self.leaf_limit < 1:
            raise ValueError("workers and leaf_limit must be positive")
        if self.block_rows < 1 or self.block_cols < 1:
            raise ValueError("block dims must be positive")


def align(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    config: AlignConfig | None = None,
    report: dict | None = None,
) -> tuple[AlignmentSummary, AlignmentPath]:
    """Optimal local alignment of two sequences: summary plus full path."""
    cfg = config or AlignConfig()
    if len(seq1) < 1 or len(seq2) < 1:
        raise ValueError("alignment inputs must be non-empty")
    scheme = validate_scheme(scheme)

    if cfg.split == 2:
        return split_mod.split_align(
            seq1, seq2, scheme,
            workers=cfg.workers,
            block_rows=cfg.block_rows,
            block_cols=cfg.block_cols,
            leaf_limit=cfg.leaf_limit,
            band=cfg.band,
            concurrent_leaves=cfg.concurrent_leaves,
            meter=cfg.meter,
            report=report,
        )

    with WavefrontEngine(cfg.workers, cfg.block_rows, cfg.block_cols,
                         cfg.meter) as engine:
        scored, p1 = phase1.best_local(seq1, seq2, scheme, engine, cfg.prune)
        if report is not None:
            report.update(
                score=scored.score,
                total_blocks=p1.total_blocks,
                pruned_blocks=p1.pruned_blocks,
                pruned_fraction=p1.pruned_blocks / p1.total_blocks,
                cells_executed=p1.cells_executed,
            )
        if scored.score == 0:
            return AlignmentSummary.empty(), AlignmentPath.empty()

        band = None
        if cfg.band:
            end = scored.end
            band = phase2.compute_band(
                scored.score, min(end.i, end.j), max(end.i, end.j), scheme
            )
        start = phase2.locate_start(
            seq1, seq2, scheme, scored.end, scored.score, band, engine
        )
        summary = AlignmentSummary(scored.score, start, scored.end)
        path = phase3.reconstruct(
            seq1, seq2, scheme, summary, engine,
            cfg.leaf_limit, cfg.band, cfg.concurrent_leaves,
        )
        return summary, path


def score_only(
    seq1: Sequence,
    seq2: Sequence,
    scheme: ScoringScheme,
    config: AlignConfig | None = None,
    report: dict | None = None,
) -> phase1.ScoredEndpoint:
    """Phase 1 alone: the optimal local score and endpoint, no path."""
    cfg = config or AlignConfig()
    if len(seq1) < 1 or len(seq2) < 1:
        raise ValueError("alignment inputs must be non-empty")
    scheme = validate_scheme(scheme)
    with WavefrontEngine(cfg.workers, cfg.block_rows, cfg.block_cols,
                         cfg.meter) as engine:
        scored, p1 = phase1.best_local(seq1, seq2, scheme, engine, cfg.prune)
        if report is not None:
            report.update(
                score=scored.score,
                total_blocks=p1.total_blocks,
                pruned_blocks=p1.pruned_blocks,
                pruned_fraction=p1.pruned_blocks / p1.total_blocks,
                cells_executed=p1.cells_executed,
            )
        return scored
