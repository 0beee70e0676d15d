import itertools

import numpy as np
import pytest

from support import (
    DNA,
    make_seq,
    random_scheme,
    random_text,
    ref_global_score,
    ref_local_score,
)

from wavealign import (
    Coord,
    Op,
    ScoringScheme,
    score_of_path,
    oracle_global,
    oracle_local,
)
from wavealign.errors import CellBudgetExceeded


class TestLocalExamples:
    def test_identical_sequences(self):
        s = make_seq("ACGT")
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        summary, path = oracle_local(s, s, scheme)
        assert summary.score == 4
        assert summary.start == Coord(0, 0)
        assert summary.end == Coord(4, 4)
        assert path.ops.tolist() == [Op.MATCH] * 4

    def test_disjoint_sequences_empty_result(self):
        scheme = ScoringScheme.match_mismatch(DNA, 1, -1, 5, 2)
        summary, path = oracle_local(make_seq("GGG"), make_seq("CCC"), scheme)
        assert summary.score == 0
        assert summary.start == summary.end == Coord(0, 0)
        assert len(path) == 0

    def test_classic_linear_gap_instance(self):
        # value confirmed by the independent recursive implementation below
        scheme = ScoringScheme.match_mismatch(DNA, 2, -1, 0, 1)
        s1, s2 = make_seq("ACACACTA"), make_seq("AGCACACA")
        summary, path = oracle_local(s1, s2, scheme)
        assert summary.score == 12
        assert ref_local_score("ACACACTA", "AGCACACA", scheme) == 12
        assert score_of_path(path, s1, s2, scheme) == 12


class TestGlobalExamples:
    def test_single_symbol(self):
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        score, path = oracle_global(make_seq("A"), make_seq("A"), scheme)
        assert score == 1
        assert path.ops.tolist() == [Op.MATCH]

    def test_forced_gap(self):
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 2, 1)
        score, path = oracle_global(make_seq("AA"), make_seq(""), scheme)
        assert score == -4
        assert path.ops.tolist() == [Op.DELETE, Op.DELETE]

    def test_budget_refusal(self):
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        s = make_seq(random_text(np.random.default_rng(0), 200))
        with pytest.raises(CellBudgetExceeded):
            oracle_local(s, s, scheme, cell_budget=100)


class TestAgainstRecursiveReference:
    def test_local_scores_match(self, rng):
        for _ in range(40):
            a = random_text(rng, int(rng.integers(1, 45)))
            b = random_text(rng, int(rng.integers(1, 45)))
            scheme = random_scheme(rng)
            summary, _ = oracle_local(make_seq(a), make_seq(b), scheme)
            assert summary.score == ref_local_score(a, b, scheme)

    def test_global_scores_match(self, rng):
        for _ in range(40):
            a = random_text(rng, int(rng.integers(1, 40)))
            b = random_text(rng, int(rng.integers(1, 40)))
            scheme = random_scheme(rng)
            score, path = oracle_global(make_seq(a), make_seq(b), scheme)
            assert score == ref_global_score(a, b, scheme)
            assert score_of_path(path, make_seq(a), make_seq(b), scheme) == score


class TestProperties:
    def test_swap_symmetry(self, rng):
        for _ in range(30):
            s1 = make_seq(random_text(rng, int(rng.integers(1, 80))))
            s2 = make_seq(random_text(rng, int(rng.integers(1, 80))))
            scheme = random_scheme(rng)
            a, _ = oracle_local(s1, s2, scheme)
            b, _ = oracle_local(s2, s1, scheme)
            assert a.score == b.score

    def test_extension_never_decreases_score(self, rng):
        for _ in range(30):
            core = random_text(rng, int(rng.integers(1, 60)))
            s2 = make_seq(random_text(rng, int(rng.integers(1, 60))))
            scheme = random_scheme(rng)
            base, _ = oracle_local(make_seq(core), s2, scheme)
            left = random_text(rng, int(rng.integers(0, 10)))
            right = random_text(rng, int(rng.integers(0, 10)))
            extended, _ = oracle_local(make_seq(left + core + right), s2, scheme)
            assert extended.score >= base.score

    def test_local_equals_best_substring_global(self, rng):
        """Exhaustive over all substring pairs, pinned-global borders."""
        two = ScoringScheme.match_mismatch(DNA, 3, -2, 2, 1)
        alphabet = "AC"
        for _ in range(25):
            a = "".join(rng.choice(list(alphabet), int(rng.integers(1, 9))))
            b = "".join(rng.choice(list(alphabet), int(rng.integers(1, 9))))
            summary, _ = oracle_local(make_seq(a), make_seq(b), two)
            best = 0
            for i0, i1 in itertools.combinations(range(len(a) + 1), 2):
                for j0, j1 in itertools.combinations(range(len(b) + 1), 2):
                    score, _ = oracle_global(
                        make_seq(a[i0:i1]), make_seq(b[j0:j1]), two,
                        border_rule="pinned",
                    )
                    best = max(best, score)
            assert summary.score == best

    def test_endpoint_tiebreak_is_lexicographic_minimum(self, rng):
        unit = ScoringScheme.match_mismatch(DNA, 1, -1, 1, 1)
        # repeats create many co-optimal endpoints
        s1 = make_seq("ATATATAT")
        s2 = make_seq("AT")
        summary, _ = oracle_local(s1, s2, unit)
        assert summary.score == 2
        assert summary.end == Coord(2, 2)


class TestVgapBorders:
    def test_start_in_vgap_continues_gap_for_free(self):
        scheme = ScoringScheme.match_mismatch(DNA, 2, -3, 5, 1)
        s1, s2 = make_seq("GACGT"), make_seq("ACGT")
        plain, _ = oracle_global(s1, s2, scheme)
        flagged, path = oracle_global(s1, s2, scheme, start_in_vgap=True)
        # forced leading DELETE without the opening fee
        assert path.ops.tolist()[0] == Op.DELETE
        assert flagged == 2 * 4 - 1   # four matches minus one unopened extend
        assert plain == 8 - 5 - 1

    def test_end_in_vgap_forces_trailing_delete(self):
        scheme = ScoringScheme.match_mismatch(DNA, 2, -3, 5, 1)
        s1, s2 = make_seq("ACGTG"), make_seq("ACGT")
        score, path = oracle_global(s1, s2, scheme, end_in_vgap=True)
        assert path.ops.tolist()[-1] == Op.DELETE
        assert score == 8 - 6    # open charged at the trailing gap
