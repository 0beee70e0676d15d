"""Block-wavefront execution engine.

The engine tiles a DP cell matrix with blocks, runs the blocks of each
anti-diagonal on a worker pool, and puts a barrier between successive
anti-diagonals. All parallelism in the package lives here. Block kernels
release the GIL, so threads scale onto real cores.

Boundary state is linear in the sequence lengths: one (H, F) row pair the
width of the matrix, plus one (H, E) column package per block row that is
handed from each block to its right neighbor and rewritten in place. Block
kernels allocate nothing.

Determinism: for fixed inputs the result is identical for any worker count
and any scheduling order. Per-block bests merge in block order after the
wave barrier, and the shared best score that drives pruning is only
refreshed at barriers, so prune decisions never depend on timing.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import WorkerPanic
from .kernels import NEG_INF, TRACK_MIN, TRACK_NONE, affine_block

DEFAULT_BLOCK_ROWS = 512
DEFAULT_BLOCK_COLS = 512


@dataclass(frozen=True)
class BlockGrid:
    """Tiling of a rows x cols cell matrix into blocks (last row/col ragged)."""

    rows: int
    cols: int
    block_rows: int
    block_cols: int
    grid_rows: int
    grid_cols: int

    @property
    def anti_diagonals(self) -> int:
        return self.grid_rows + self.grid_cols - 1

    def row_span(self, bi: int) -> tuple[int, int]:
        r0 = bi * self.block_rows
        return r0, min(r0 + self.block_rows, self.rows)

    def col_span(self, bj: int) -> tuple[int, int]:
        c0 = bj * self.block_cols
        return c0, min(c0 + self.block_cols, self.cols)


def plan_grid(
    len1: int,
    len2: int,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    block_cols: int = DEFAULT_BLOCK_COLS,
) -> BlockGrid:
    if len1 < 1 or len2 < 1:
        raise ValueError("cannot tile an empty matrix")
    block_rows = max(1, min(block_rows, len1))
    block_cols = max(1, min(block_cols, len2))
    return BlockGrid(
        len1, len2, block_rows, block_cols,
        -(-len1 // block_rows), -(-len2 // block_cols),
    )


class AllocationMeter:
    """Counts live DP-state cells (array elements) across the pipeline."""

    def __init__(self):
        self._lock = threading.Lock()
        self.current = 0
        self.peak = 0

    def add(self, n: int):
        with self._lock:
            self.current += n
            if self.current > self.peak:
                self.peak = self.current

    def release(self, n: int):
        with self._lock:
            self.current -= n


@dataclass
class PassSpec:
    """One wavefront pass over a cell matrix.

    top_h/top_f are the DP row-0 border (length cols+1, index 0 = origin
    corner); the engine takes ownership and overwrites them in place.
    left_border(i0, i1) returns border-column (H, E, F) values for DP rows
    [i0, i1); it seeds the column package of each block row (element 0 of
    the first call per row is the block's corner input).
    """

    codes1: np.ndarray
    codes2: np.ndarray
    sub: np.ndarray
    gap_open: int
    gap_extend: int
    clamp_zero: bool
    track: int
    top_h: np.ndarray
    top_f: np.ndarray
    left_border: Callable[[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]]
    band: Optional[tuple[int, int]] = None   # admissible (row - col) interval
    fill_h: int = NEG_INF                    # H fill for skipped blocks
    prune: Optional[Callable[[int, int, int, int], bool]] = None
    # prune(input_max, origin_i, origin_j, best_so_far) -> skip?


@dataclass
class PassResult:
    best_score: int
    best_i: int                  # cell coords; -1 when nothing tracked
    best_j: int
    final_row_h: np.ndarray      # H of the last DP row, index 0 = border column
    final_row_f: np.ndarray
    total_blocks: int
    executed_blocks: int
    pruned_blocks: int
    banded_out_blocks: int
    cells_executed: int


class _Package:
    __slots__ = ("col_h", "col_e", "corner")

    def __init__(self, col_h, col_e, corner):
        self.col_h = col_h
        self.col_e = col_e
        self.corner = corner


class WavefrontEngine:
    def __init__(
        self,
        workers: int = 1,
        block_rows: int = DEFAULT_BLOCK_ROWS,
        block_cols: int = DEFAULT_BLOCK_COLS,
        meter: AllocationMeter | None = None,
        trace: list | None = None,
    ):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self.block_rows = block_rows
        self.block_cols = block_cols
        self.meter = meter
        self.trace = trace
        self._trace_lock = threading.Lock()
        self._pool: ThreadPoolExecutor | None = None

    # -- lifecycle ------------------------------------------------------------

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def _get_pool(self) -> ThreadPoolExecutor:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.workers)
        return self._pool

    def _emit(self, kind: str, bi: int, bj: int):
        if self.trace is not None:
            with self._trace_lock:
                self.trace.append((kind, bi, bj))

    # -- main loop ------------------------------------------------------------

    def run_wavefront(self, spec: PassSpec) -> PassResult:
        rows = int(spec.codes1.size)
        cols = int(spec.codes2.size)
        grid = plan_grid(rows, cols, self.block_rows, self.block_cols)
        row_h = spec.top_h
        row_f = spec.top_f
        if row_h.shape != (cols + 1,) or row_f.shape != (cols + 1,):
            raise ValueError("top border arrays must have length cols+1")

        meter_cells = 2 * (cols + 1)
        pkgs: list[_Package] = []
        for bi in range(grid.grid_rows):
            r0, r1 = grid.row_span(bi)
            bh, be, _ = spec.left_border(r0, r1 + 1)
            pkgs.append(_Package(bh[1:].copy(), be[1:].copy(), int(bh[0])))
            meter_cells += 2 * (r1 - r0) + 1
        if self.meter is not None:
            self.meter.add(meter_cells)

        track = spec.track
        best_s = 0 if track == TRACK_MIN else NEG_INF
        best_i = -1
        best_j = -1
        barrier_best = 0
        n_exec = n_pruned = n_banded = 0
        cells = 0

        try:
            for d in range(grid.anti_diagonals):
                bi_lo = max(0, d - grid.grid_cols + 1)
                bi_hi = min(d, grid.grid_rows - 1)
                tasks = []
                for bi in range(bi_lo, bi_hi + 1):
                    bj = d - bi
                    r0, r1 = grid.row_span(bi)
                    c0, c1 = grid.col_span(bj)
                    pkg = pkgs[bi]
                    if spec.band is not None:
                        lo, hi = spec.band
                        if r0 - c1 + 1 > hi or r1 - 1 - c0 < lo:
                            self._skip(spec, pkg, row_h, row_f, r0, r1, c0, c1)
                            self._emit("skip", bi, bj)
                            n_banded += 1
                            continue
                    if spec.prune is not None:
                        input_max = max(
                            int(row_h[c0 + 1:c1 + 1].max()),
                            int(pkg.col_h.max()),
                            pkg.corner,
                        )
                        if spec.prune(input_max, r0, c0, barrier_best):
                            self._skip(spec, pkg, row_h, row_f, r0, r1, c0, c1)
                            self._emit("skip", bi, bj)
                            n_pruned += 1
                            continue
                    tasks.append((bi, bj, r0, r1, c0, c1))

                results = self._run_wave(spec, tasks, row_h, row_f, pkgs)

                for (bi, bj, r0, r1, c0, c1), (bs, bci, bcj) in zip(tasks, results):
                    n_exec += 1
                    cells += (r1 - r0) * (c1 - c0)
                    if track == TRACK_NONE:
                        continue
                    if track == TRACK_MIN:
                        if bs > 0 and (bs > best_s or (bs == best_s and
                                       (bci, bcj) < (best_i, best_j))):
                            best_s, best_i, best_j = bs, bci, bcj
                    else:
                        if bci >= 0 and (bs > best_s or (bs == best_s and
                                         (bci, bcj) > (best_i, best_j))):
                            best_s, best_i, best_j = bs, bci, bcj
                if spec.prune is not None:
                    barrier_best = max(barrier_best, best_s)
                self._emit("barrier", d, -1)

            i1, _, f1 = spec.left_border(rows, rows + 1)
            row_h[0] = i1[0]
            row_f[0] = f1[0]
        finally:
            if self.meter is not None:
                self.meter.release(meter_cells)

        return PassResult(
            best_score=int(best_s),
            best_i=int(best_i),
            best_j=int(best_j),
            final_row_h=row_h,
            final_row_f=row_f,
            total_blocks=grid.grid_rows * grid.grid_cols,
            executed_blocks=n_exec,
            pruned_blocks=n_pruned,
            banded_out_blocks=n_banded,
            cells_executed=cells,
        )

    # -- helpers ---------------------------------------------------------------

    def _skip(self, spec, pkg, row_h, row_f, r0, r1, c0, c1):
        """Fill a skipped block's outputs. H gets the mode's fill value (a
        sound lower bound); gap states get minus infinity."""
        pkg.corner = int(row_h[c1])
        row_h[c0 + 1:c1 + 1] = spec.fill_h
        row_f[c0 + 1:c1 + 1] = NEG_INF
        pkg.col_h[:] = spec.fill_h
        pkg.col_e[:] = NEG_INF

    def _block_task(self, spec, row_h, row_f, pkgs, task):
        bi, bj, r0, r1, c0, c1 = task
        self._emit("start", bi, bj)
        pkg = pkgs[bi]
        corner_in = pkg.corner
        pkg.corner = int(row_h[c1])
        out = affine_block(
            spec.codes1, spec.codes2, spec.sub,
            spec.gap_open, spec.gap_extend,
            r0, r1, c0, c1, row_h, row_f,
            pkg.col_h, pkg.col_e, corner_in,
            spec.clamp_zero, spec.track,
        )
        self._emit("finish", bi, bj)
        return out

    def _run_wave(self, spec, tasks, row_h, row_f, pkgs):
        if not tasks:
            return []
        if self.workers == 1 or len(tasks) == 1:
            try:
                return [self._block_task(spec, row_h, row_f, pkgs, t)
                        for t in tasks]
            except Exception as exc:
                raise WorkerPanic("block kernel failed") from exc
        pool = self._get_pool()
        futures = [
            pool.submit(self._block_task, spec, row_h, row_f, pkgs, t)
            for t in tasks
        ]
        results = []
        panic = None
        for f in futures:
            try:
                results.append(f.result())
            except Exception as exc:   # collect everything; never deadlock
                if panic is None:
                    panic = exc
        if panic is not None:
            raise WorkerPanic("block kernel failed") from panic
        return results


# -- border builders shared by the phase modules --------------------------------

def local_borders(cols: int):
    """Zero H borders, minus-infinity gap states (Smith-Waterman)."""
    top_h = np.zeros(cols + 1, dtype=np.int64)
    top_f = np.full(cols + 1, NEG_INF, dtype=np.int64)

    def left(i0: int, i1: int):
        h = np.zeros(i1 - i0, dtype=np.int64)
        e = np.full(i1 - i0, NEG_INF, dtype=np.int64)
        return h, e, e
    return top_h, top_f, left


def restricted_borders(cols: int, gap_extend: int):
    """Origin-pinned borders for the constrained start/end location passes.

    Everything except the origin is minus infinity, so any path must be
    anchored there; scores are free to go negative.
    """
    top_h = np.full(cols + 1, NEG_INF, dtype=np.int64)
    top_f = np.full(cols + 1, NEG_INF, dtype=np.int64)
    top_h[0] = 0

    def left(i0: int, i1: int):
        idx = np.arange(i0, i1, dtype=np.int64)
        e = np.full(i1 - i0, NEG_INF, dtype=np.int64)
        h = np.where(idx == 0, 0, NEG_INF)
        return h, e, e
    return top_h, top_f, left


def global_borders(cols: int, gap_open: int, gap_extend: int, lead: str = "free"):
    """Needleman-Wunsch affine borders.

    lead controls how the path may begin:
      "free"      ordinary borders, leading gaps priced at affine cost
      "continue"  the path must begin with a DELETE continuing a gap opened
                  upstream: no opening fee, leading INSERT run forbidden
      "charge"    the path must begin with a DELETE but the gap opens here,
                  so the fee is charged
    """
    if lead == "free":
        ramp = np.arange(cols + 1, dtype=np.int64) * gap_extend
        top_h = -gap_open - ramp
        top_h[0] = 0
        top_f = np.full(cols + 1, NEG_INF, dtype=np.int64)
    else:
        top_h = np.full(cols + 1, NEG_INF, dtype=np.int64)
        top_f = np.full(cols + 1, NEG_INF, dtype=np.int64)
    open_fee = 0 if lead == "continue" else gap_open

    def left(i0: int, i1: int):
        idx = np.arange(i0, i1, dtype=np.int64)
        e = np.full(i1 - i0, NEG_INF, dtype=np.int64)
        if lead == "free":
            h = np.where(idx == 0, 0, -gap_open - idx * gap_extend)
            f = np.where(idx == 0, NEG_INF, h)
        else:
            h = np.where(idx == 0, NEG_INF, -open_fee - idx * gap_extend)
            f = np.where(idx == 0, 0 if lead == "continue" else -open_fee,
                         -open_fee - idx * gap_extend)
        return h, e, f
    return top_h, top_f, left
