import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import DNA, PROTEIN, make_seq, random_scheme, random_text

from wavealign import (
    Alphabet,
    AlignmentPath,
    AlignmentSummary,
    Coord,
    IllegalResidue,
    IncompleteMatrix,
    NonPositiveMaxScore,
    Op,
    PathInconsistent,
    ScoringScheme,
    cigar_to_ops,
    oracle_local,
    path_to_cigar,
    score_of_path,
    validate_scheme,
)
from wavealign.oracle import rescore_path


def path(start, ops):
    return AlignmentPath(Coord(*start), np.array(ops, dtype=np.uint8))


class TestAlphabet:
    def test_dna_wildcard_membership(self):
        a = Alphabet.dna()
        assert "N" in a and a.wildcard == "N"
        assert "N" not in Alphabet.dna(wildcard=False)

    def test_encode_case_folds_via_sequence(self):
        s = make_seq("acgt")
        assert s.residues == "ACGT"
        assert s.codes.tolist() == [0, 1, 2, 3]

    def test_illegal_residue_reports_position(self):
        with pytest.raises(IllegalResidue) as exc:
            make_seq("AC*T")
        assert exc.value.position == 2

    def test_duplicate_symbols_rejected(self):
        with pytest.raises(ValueError):
            Alphabet("nucleotide", "ACGA")


class TestScheme:
    def test_match_mismatch_max(self):
        s = ScoringScheme.match_mismatch(DNA, 2, -1, 5, 2)
        assert validate_scheme(s).max_substitution_score == 2

    def test_all_zero_rejected(self):
        s = ScoringScheme.match_mismatch(DNA, 0, 0, 5, 2)
        with pytest.raises(NonPositiveMaxScore):
            validate_scheme(s)

    def test_incomplete_table_rejected(self):
        table = {("A", "A"): 1}
        s = ScoringScheme.from_table(DNA, table, 5, 2)
        with pytest.raises(IncompleteMatrix):
            validate_scheme(s)

    def test_max_recomputed_when_stale(self):
        s = ScoringScheme.match_mismatch(DNA, 3, -1, 5, 2)
        stale = ScoringScheme(s.alphabet, s.matrix, 5, 2, 1)
        assert validate_scheme(stale).max_substitution_score == 3

    def test_max_dominates_all_pairs(self, rng):
        s = validate_scheme(random_scheme(rng, PROTEIN))
        assert s.max_substitution_score == int(s.matrix.max())

    def test_wildcard_scores_zero(self):
        a = Alphabet.dna()
        s = ScoringScheme.match_mismatch(a, 2, -1, 5, 2)
        assert s.substitution("N", "A") == 0
        assert s.substitution("N", "N") == 0

    def test_gap_parameters_validated(self):
        with pytest.raises(ValueError):
            ScoringScheme.match_mismatch(DNA, 1, -1, -1, 2)
        with pytest.raises(ValueError):
            ScoringScheme.match_mismatch(DNA, 1, -1, 5, 0)


class TestScoreOfPath:
    def test_all_match(self):
        s = make_seq("ACGT")
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        assert score_of_path(path((0, 0), [Op.MATCH] * 4), s, s, scheme) == 4

    def test_gap_run_costs_open_plus_extends(self):
        s1 = make_seq("AGGA")
        s2 = make_seq("AA")
        scheme = ScoringScheme.match_mismatch(DNA, 2, -1, 2, 1)
        p = path((0, 0), [Op.MATCH, Op.DELETE, Op.DELETE, Op.MATCH])
        assert score_of_path(p, s1, s2, scheme) == 2 + 2 - (2 + 2 * 1)

    def test_label_contradiction_raises(self):
        s = make_seq("ACGT")
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        p = path((0, 0), [Op.MISMATCH] + [Op.MATCH] * 3)
        with pytest.raises(PathInconsistent):
            score_of_path(p, s, s, scheme)

    def test_overrun_raises(self):
        s = make_seq("AC")
        scheme = ScoringScheme.match_mismatch(DNA, 1, -3, 5, 2)
        with pytest.raises(PathInconsistent):
            score_of_path(path((0, 0), [Op.MATCH] * 3), s, s, scheme)

    def test_empty_path_scores_zero(self, dna_scheme):
        s = make_seq("ACGT")
        assert score_of_path(AlignmentPath.empty(), s, s, dna_scheme) == 0

    def test_matches_independent_rescorer_on_oracle_paths(self, rng):
        for _ in range(50):
            s1 = make_seq(random_text(rng, 50))
            s2 = make_seq(random_text(rng, 50))
            scheme = random_scheme(rng)
            summary, p = oracle_local(s1, s2, scheme)
            if summary.score == 0:
                continue
            assert score_of_path(p, s1, s2, scheme) == rescore_path(p, s1, s2, scheme)
            assert score_of_path(p, s1, s2, scheme) == summary.score


class TestCigar:
    def test_single_run(self):
        assert path_to_cigar(path((0, 0), [Op.MATCH] * 3)) == "3="

    def test_mixed_runs(self):
        ops = [Op.MATCH, Op.MISMATCH, Op.INSERT, Op.INSERT, Op.MATCH]
        assert path_to_cigar(path((0, 0), ops)) == "1=1X2I1="

    def test_empty(self):
        assert path_to_cigar(AlignmentPath.empty()) == ""

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            cigar_to_ops("3=junk")

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.sampled_from([0, 1, 2, 3]), max_size=400))
    def test_round_trip(self, ops):
        arr = np.array(ops, dtype=np.uint8)
        text = path_to_cigar(AlignmentPath(Coord(0, 0), arr))
        assert np.array_equal(cigar_to_ops(text), arr)


class TestSummaryInvariants:
    def test_zero_score_requires_empty_region(self):
        with pytest.raises(ValueError):
            AlignmentSummary(0, Coord(0, 0), Coord(1, 1))
        with pytest.raises(ValueError):
            AlignmentSummary(5, Coord(2, 2), Coord(2, 2))

    def test_start_bounded_by_end(self):
        with pytest.raises(ValueError):
            AlignmentSummary(3, Coord(4, 0), Coord(2, 5))

    def test_path_end_replay(self):
        p = path((2, 3), [Op.MATCH, Op.INSERT, Op.DELETE])
        assert p.end == Coord(4, 5)
