import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slkf import opinion as sl
from slkf.errors import (BaseRateMismatch, DegenerateUnfusion, DomainError, LengthMismatch,
                         NegativeMass, SumViolation)

from .helpers import assert_close, assert_valid, opinion_pairs, opinions, simplex

HALF = [0.5, 0.5]
U9 = sl.uniform(9)


class TestMakeOpinion:
    def test_dogmatic(self):
        op = sl.make_opinion(HALF, 0.0, HALF)
        assert op.uncertainty == 0.0
        np.testing.assert_array_equal(op.belief, HALF)

    def test_vacuous(self):
        op = sl.make_opinion([0, 0], 1.0, HALF)
        assert op.uncertainty == 1.0

    def test_sum_violation(self):
        with pytest.raises(SumViolation):
            sl.make_opinion([0.6, 0.6], 0.1, HALF)

    def test_negative_mass(self):
        with pytest.raises(NegativeMass):
            sl.make_opinion([1.1, -0.1], 0.0, HALF)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            sl.make_opinion([0.5, 0.5], 0.0, [1 / 3] * 3)

    def test_single_outcome_rejected(self):
        with pytest.raises(LengthMismatch):
            sl.make_opinion([1.0], 0.0, [1.0])

    def test_rounding_noise_absorbed(self):
        op = sl.make_opinion([0.5 + 4e-10, -3e-10], 0.5, HALF)
        assert op.belief[1] == 0.0
        assert abs(op.belief.sum() + op.uncertainty - 1) < 1e-15

    def test_immutable(self):
        op = sl.make_opinion([0.2, 0.3], 0.5, HALF)
        with pytest.raises(ValueError):
            op.belief[0] = 0.9


class TestConstructors:
    def test_vacuous(self):
        op = sl.vacuous(HALF)
        np.testing.assert_array_equal(op.belief, [0, 0])
        assert op.uncertainty == 1

    def test_vacuous_nine_bins(self):
        op = sl.vacuous(U9)
        assert op.uncertainty == 1 and not op.belief.any()

    def test_vacuous_bad_base_rate(self):
        with pytest.raises(SumViolation):
            sl.vacuous([0.3, 0.3])

    def test_dogmatic(self):
        op = sl.dogmatic([1, 0], HALF)
        assert op.uncertainty == 0 and op.belief[0] == 1

    def test_dogmatic_bad(self):
        with pytest.raises(SumViolation):
            sl.dogmatic([0.5, 0.6], HALF)


class TestEvidence:
    def test_zero_counts_vacuous(self):
        op = sl.from_evidence(sl.EvidenceVector(np.zeros(9)), U9)
        assert op.uncertainty == 1

    def test_single_count(self):
        op = sl.from_evidence(sl.EvidenceVector.unit(0, 9), U9)
        np.testing.assert_allclose(op.belief, [0.1] + [0] * 8, atol=1e-15)
        assert op.uncertainty == pytest.approx(0.9, abs=1e-15)

    def test_35_counts(self):
        counts = np.bincount(np.arange(35) % 9, minlength=9).astype(float)
        op = sl.from_evidence(sl.EvidenceVector(counts), U9)
        assert op.uncertainty == pytest.approx(0.204545454545455, abs=1e-12)

    def test_negative_counts(self):
        with pytest.raises(NegativeMass):
            sl.EvidenceVector([1.0, -1.0])

    @given(st.lists(st.floats(0, 50), min_size=2, max_size=9), st.floats(0.5, 20))
    def test_round_trip(self, counts, W):
        ev = sl.EvidenceVector(counts, W)
        back = sl.to_evidence(sl.from_evidence(ev, sl.uniform(len(counts))), W)
        np.testing.assert_allclose(back.counts, counts, atol=1e-9 * (1 + max(counts)))

    @given(st.integers(2, 9).flatmap(
        lambda n: st.tuples(st.lists(st.floats(0, 30), min_size=n, max_size=n), simplex(n, 0.01))),
        st.floats(0.5, 20))
    def test_projection_is_dirichlet_mean(self, args, W):
        counts, a = args
        counts = np.array(counts)
        op = sl.from_evidence(sl.EvidenceVector(counts, W), a)
        expected = (counts + W * a) / (W + counts.sum())
        np.testing.assert_allclose(sl.project(op), expected, atol=1e-9)


class TestProject:
    def test_vacuous(self):
        np.testing.assert_array_equal(sl.project(sl.vacuous(HALF)), HALF)

    def test_dogmatic(self):
        np.testing.assert_allclose(sl.project(sl.dogmatic([0.2, 0.8], HALF)), [0.2, 0.8])

    def test_hand_value(self):
        op = sl.make_opinion([0.3, 0.2], 0.5, [0.4, 0.6])
        np.testing.assert_allclose(sl.project(op), [0.5, 0.5], atol=1e-15)

    @given(opinions())
    def test_sums_to_one(self, op):
        assert abs(sl.project(op).sum() - 1) <= 1e-9


class TestFusion:
    def test_vacuous_neutral(self):
        B = sl.make_opinion([0.3, 0.2], 0.5, HALF)
        assert_close(sl.fuse_acbf(sl.vacuous(HALF), B), B, 1e-15)

    def test_hand_value(self):
        A = sl.make_opinion([0.3, 0.2], 0.5, HALF)
        B = sl.make_opinion([0.4, 0.1], 0.5, HALF)
        C = sl.fuse_acbf(A, B)
        np.testing.assert_allclose(C.belief, [7 / 15, 0.2], atol=1e-12)
        assert C.uncertainty == pytest.approx(1 / 3, abs=1e-12)

    def test_two_single_evidence_opinions(self):
        one = sl.from_evidence(sl.EvidenceVector.unit(4, 9), U9)
        other = sl.from_evidence(sl.EvidenceVector.unit(2, 9), U9)
        assert sl.fuse_acbf(one, other).uncertainty == pytest.approx(0.818181818181818, abs=1e-12)

    def test_both_dogmatic_average(self):
        C = sl.fuse_acbf(sl.dogmatic([1, 0], HALF), sl.dogmatic([0, 1], HALF))
        np.testing.assert_allclose(C.belief, HALF)
        assert C.uncertainty == 0

    def test_both_vacuous(self):
        C = sl.fuse_acbf(sl.vacuous([0.2, 0.8]), sl.vacuous([0.6, 0.4]))
        assert C.uncertainty == 1
        np.testing.assert_allclose(C.base_rate, [0.4, 0.6])

    def test_dogmatic_dominates(self):
        D = sl.dogmatic([0.7, 0.3], HALF)
        C = sl.fuse_acbf(D, sl.make_opinion([0.1, 0.4], 0.5, HALF))
        assert_close(C, D, 1e-12)

    def test_base_rate_rule(self):
        A = sl.make_opinion([0.2, 0.2], 0.6, [0.3, 0.7])
        B = sl.make_opinion([0.1, 0.4], 0.5, [0.5, 0.5])
        uA, uB = 0.6, 0.5
        a = (np.array([0.3, 0.7]) * uB + np.array([0.5, 0.5]) * uA
             - np.array([0.8, 1.2]) * uA * uB) / (uA + uB - 2 * uA * uB)
        np.testing.assert_allclose(sl.fuse_acbf(A, B).base_rate, a, atol=1e-12)

    def test_domain_mismatch(self):
        with pytest.raises(LengthMismatch):
            sl.fuse_acbf(sl.vacuous(HALF), sl.vacuous(U9))

    @given(opinion_pairs(same_base=False))
    def test_commutative(self, pair):
        A, B = pair
        assert_close(sl.fuse_acbf(A, B), sl.fuse_acbf(B, A))

    @given(st.data())
    def test_associative(self, data):
        A, B = data.draw(opinion_pairs(u_min=0.01))
        C = data.draw(opinions(base_rate=A.base_rate, u_min=0.01))
        assert_close(sl.fuse_acbf(sl.fuse_acbf(A, B), C), sl.fuse_acbf(A, sl.fuse_acbf(B, C)))

    @given(opinion_pairs(same_base=False))
    def test_closure(self, pair):
        assert_valid(sl.fuse_acbf(*pair))

    @given(st.integers(2, 9).flatmap(lambda n: st.tuples(
        st.lists(st.floats(0, 40), min_size=n, max_size=n),
        st.lists(st.floats(0, 40), min_size=n, max_size=n))), st.floats(0.5, 20))
    def test_evidence_additivity(self, counts, W):
        r1, r2 = (np.array(c) for c in counts)
        a = sl.uniform(r1.size)
        fused = sl.fuse_acbf(sl.from_evidence(sl.EvidenceVector(r1, W), a),
                             sl.from_evidence(sl.EvidenceVector(r2, W), a))
        assert_close(fused, sl.from_evidence(sl.EvidenceVector(r1 + r2, W), a))


class TestUnfusion:
    def test_vacuous_neutral(self):
        C = sl.make_opinion([0.3, 0.2], 0.5, HALF)
        assert_close(sl.unfuse_cbf(C, sl.vacuous(HALF)), C, 1e-15)

    def test_self_unfusion_vacuous(self):
        B = sl.make_opinion([0.3, 0.2], 0.5, HALF)
        out = sl.unfuse_cbf(B, B)
        assert out.uncertainty == pytest.approx(1.0)
        np.testing.assert_allclose(out.belief, 0, atol=1e-15)

    def test_base_rate_mismatch(self):
        with pytest.raises(BaseRateMismatch):
            sl.unfuse_cbf(sl.vacuous(HALF), sl.vacuous([0.4, 0.6]))

    def test_dogmatic_degenerate(self):
        D = sl.dogmatic(HALF, HALF)
        with pytest.raises(DegenerateUnfusion):
            sl.unfuse_cbf(D, D)

    def test_not_contained(self):
        C = sl.make_opinion([0.5, 0.0], 0.5, HALF)
        B = sl.make_opinion([0.0, 0.5], 0.5, HALF)
        with pytest.raises(NegativeMass):
            sl.unfuse_cbf(C, B)

    @given(opinion_pairs(u_min=0.01, u_max=0.99))
    def test_round_trip(self, pair):
        A, B = pair
        assert_close(sl.unfuse_cbf(sl.fuse_acbf(A, B), B), A)


class TestTrustDiscount:
    def test_hand_value(self):
        out = sl.trust_discount(sl.make_opinion([0.6, 0.3], 0.1, HALF), 0.5)
        np.testing.assert_allclose(out.belief, [0.3, 0.15])
        assert out.uncertainty == pytest.approx(0.55)

    def test_golden_uptick(self):
        counts = np.bincount(np.arange(69) % 9, minlength=9).astype(float)
        op = sl.from_evidence(sl.EvidenceVector(counts), U9)
        assert op.uncertainty == pytest.approx(9 / 78, abs=1e-15)
        assert sl.trust_discount(op, 0.99).uncertainty == pytest.approx(0.124230769230769,
                                                                        abs=1e-12)

    @pytest.mark.parametrize("p", [-0.1, 1.1, float("nan")])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            sl.trust_discount(sl.vacuous(HALF), p)

    @given(opinions())
    def test_identity_at_one(self, op):
        out = sl.trust_discount(op, 1.0)
        np.testing.assert_array_equal(out.belief, op.belief)
        np.testing.assert_array_equal(out.base_rate, op.base_rate)
        assert out.uncertainty == pytest.approx(op.uncertainty, abs=1e-15)

    @given(opinions(), st.floats(0, 1))
    def test_uncertainty_never_decreases(self, op, p):
        out = sl.trust_discount(op, p)
        assert out.uncertainty >= op.uncertainty - 1e-12
        np.testing.assert_array_equal(out.base_rate, op.base_rate)
        assert_valid(out)


class TestConflict:
    def test_self(self):
        op = sl.make_opinion([0.3, 0.2], 0.5, HALF)
        assert sl.degree_of_conflict(op, op) == 0

    def test_vacuous(self):
        assert sl.degree_of_conflict(sl.vacuous(HALF), sl.dogmatic([1, 0], HALF)) == 0

    def test_maximal(self):
        assert sl.degree_of_conflict(sl.dogmatic([1, 0], HALF), sl.dogmatic([0, 1], HALF)) == 1

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            sl.degree_of_conflict(sl.vacuous(HALF), sl.vacuous(U9))

    @given(opinion_pairs(same_base=False))
    def test_symmetric_and_bounded(self, pair):
        A, B = pair
        dc = sl.degree_of_conflict(A, B)
        assert 0 <= dc <= 1
        assert dc == pytest.approx(sl.degree_of_conflict(B, A), abs=1e-15)

    @given(opinions())
    def test_zero_against_vacuous(self, op):
        assert sl.degree_of_conflict(op, sl.vacuous(op.base_rate)) == 0
