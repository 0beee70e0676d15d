import numpy as np
import pytest

from support import DNA, make_seq, random_scheme, random_text

from wavealign import (
    AllocationMeter,
    ScoringScheme,
    WavefrontEngine,
    WorkerPanic,
    plan_grid,
)
from wavealign.engine import PassSpec, local_borders
from wavealign.kernels import NEG_INF, TRACK_MIN
import wavealign.engine


def local_spec(codes1, codes2, scheme, band=None, prune=None):
    top_h, top_f, left = local_borders(int(codes2.size))
    return PassSpec(
        codes1=codes1, codes2=codes2, sub=scheme.matrix,
        gap_open=scheme.gap_open, gap_extend=scheme.gap_extend,
        clamp_zero=True, track=TRACK_MIN,
        top_h=top_h, top_f=top_f, left_border=left,
        band=band, fill_h=0, prune=prune,
    )


class TestPlanGrid:
    def test_ragged_tiling(self):
        g = plan_grid(10, 10, 4, 4)
        assert (g.grid_rows, g.grid_cols) == (3, 3)
        assert g.row_span(2) == (8, 10)
        assert g.col_span(2) == (8, 10)
        assert g.anti_diagonals == 5

    def test_degenerate_single_cell(self):
        g = plan_grid(1, 1)
        assert (g.grid_rows, g.grid_cols) == (1, 1)

    def test_block_dims_clamp_to_lengths(self):
        g = plan_grid(10, 2000, 512, 512)
        assert g.block_rows == 10
        assert g.grid_cols == -(-2000 // 512)

    def test_million_cell_dims(self):
        g = plan_grid(10 ** 6, 10 ** 6)
        assert g.grid_rows == -(-10 ** 6 // 512)
        assert g.grid_cols == g.grid_rows

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            plan_grid(0, 5)


class TestDeterminism:
    def test_results_identical_across_worker_counts(self, rng):
        scheme = random_scheme(rng)
        c1 = make_seq(random_text(rng, 700)).codes
        c2 = make_seq(random_text(rng, 900)).codes
        results = []
        for workers in (1, 8):
            with WavefrontEngine(workers, 64, 64) as eng:
                res = eng.run_wavefront(local_spec(c1, c2, scheme))
                results.append(res)
        a, b = results
        assert (a.best_score, a.best_i, a.best_j) == (b.best_score, b.best_i, b.best_j)
        assert np.array_equal(a.final_row_h, b.final_row_h)
        assert np.array_equal(a.final_row_f, b.final_row_f)
        assert a.executed_blocks == b.executed_blocks

    def test_single_block_grid_runs_once(self, rng, dna_scheme):
        c = make_seq(random_text(rng, 30)).codes
        with WavefrontEngine(4) as eng:
            res = eng.run_wavefront(local_spec(c, c, dna_scheme))
        assert res.total_blocks == 1
        assert res.executed_blocks == 1


class TestDependencies:
    def test_no_block_starts_before_its_inputs_finish(self, rng, dna_scheme):
        c1 = make_seq(random_text(rng, 256)).codes
        c2 = make_seq(random_text(rng, 256)).codes
        trace = []
        eng = WavefrontEngine(4, 32, 32, trace=trace)
        with eng:
            eng.run_wavefront(local_spec(c1, c2, dna_scheme))
        position = {}
        for pos, (kind, bi, bj) in enumerate(trace):
            if kind in ("finish", "skip"):
                position[(bi, bj)] = pos
        started = 0
        for pos, (kind, bi, bj) in enumerate(trace):
            if kind != "start":
                continue
            started += 1
            for dep in ((bi - 1, bj), (bi, bj - 1), (bi - 1, bj - 1)):
                if dep[0] >= 0 and dep[1] >= 0:
                    assert position[dep] < pos, (dep, (bi, bj))
        assert started == 64


class TestBandAndFill:
    def test_band_admitting_main_diagonal_runs_four_blocks(self, dna_scheme, rng):
        c = make_seq(random_text(rng, 8)).codes
        with WavefrontEngine(1, 2, 2) as eng:
            res = eng.run_wavefront(local_spec(c, c, dna_scheme, band=(0, 0)))
        assert res.total_blocks == 16
        assert res.executed_blocks == 4
        assert res.banded_out_blocks == 12

    def test_skipped_blocks_fill_h_and_neg_gap_states(self, dna_scheme, rng):
        c = make_seq(random_text(rng, 8)).codes
        with WavefrontEngine(1, 2, 2) as eng:
            res = eng.run_wavefront(local_spec(c, c, dna_scheme, band=(0, 0)))
        # final row: last block row is in-band only near the main diagonal
        assert res.final_row_h[1] == 0          # banded-out column, local fill
        assert res.final_row_f[1] == NEG_INF


class TestWorkerPanic:
    def test_kernel_failure_propagates(self, rng, dna_scheme, monkeypatch):
        def boom(*args):
            raise RuntimeError("injected")

        monkeypatch.setattr(wavealign.engine, "affine_block", boom)
        c = make_seq(random_text(rng, 128)).codes
        with WavefrontEngine(2, 16, 16) as eng:
            with pytest.raises(WorkerPanic):
                eng.run_wavefront(local_spec(c, c, dna_scheme))


class TestMemory:
    def test_boundary_state_scales_linearly(self, dna_scheme):
        rng = np.random.default_rng(5)
        peaks = {}
        for n in (2000, 8000, 32000):
            c = make_seq(random_text(rng, n)).codes
            meter = AllocationMeter()
            with WavefrontEngine(1, 512, 512, meter=meter) as eng:
                eng.run_wavefront(local_spec(c, c, dna_scheme))
            peaks[n] = meter.peak
            assert meter.current == 0
        ratios = [peaks[n] / (2 * n) for n in peaks]
        assert max(ratios) / min(ratios) < 1.1
        assert max(ratios) < 16     # a small constant, nothing quadratic
