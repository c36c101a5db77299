"""Growth-series diagnostics and subsequence bound checks."""

from __future__ import annotations

import math

import pytest

from momentkit import (
    CONVERGENCE_CONSISTENT,
    DIVERGENCE_CONSISTENT,
    INCONCLUSIVE,
    AtomicMeasure,
    DegreeOverflow,
    HypothesisFailure,
    MomentSequence,
    NotNormalized,
    TrivialFunctional,
    carleman_terms,
    check_subsequence_bounds,
    moments_factorial,
    moments_lognormal,
    moments_of_atomic,
    normalize,
    stieltjes_terms,
    subsequence_terms,
)
from momentkit.errors import NotPositive


class TestNormalize:
    def test_scales_mass_to_one(self):
        s = MomentSequence(1, 2, {(0,): 2.0, (1,): 4.0, (2,): 10.0})
        n = normalize(s)
        assert n.mass == 1.0
        assert n.value((1,)) == 2.0

    def test_zero_mass_is_trivial(self):
        s = MomentSequence(1, 1, {(0,): 0.0, (1,): 0.0})
        with pytest.raises(TrivialFunctional):
            normalize(s)

    def test_negative_mass_rejected(self):
        s = MomentSequence(1, 0, {(0,): -1.0})
        with pytest.raises(NotPositive):
            normalize(s)

    def test_log_values_shift_by_log_mass(self):
        s = MomentSequence(1, 1, {(0,): 2.0, (1,): math.inf}, {(1,): 1000.0})
        n = normalize(s)
        assert n.log_value((1,)) == pytest.approx(1000.0 - math.log(2.0))


class TestStieltjesTerms:
    def test_factorial_first_terms(self):
        # a_n = (n!)^(-1/(2n)): a_1 = 1, a_2 = 2^(-1/4), a_3 = 6^(-1/6).
        rep = stieltjes_terms(moments_factorial(10), count=10)
        assert rep.terms[0] == pytest.approx(1.0)
        assert rep.terms[1] == pytest.approx(2.0 ** (-0.25))
        assert rep.terms[2] == pytest.approx(6.0 ** (-1.0 / 6.0))

    def test_factorial_classified_divergence_consistent(self):
        rep = stieltjes_terms(moments_factorial(120), count=120)
        assert rep.classification == DIVERGENCE_CONSISTENT
        assert rep.fit_details["rule"] == "power-law"
        assert not rep.degenerate

    def test_lognormal_terms_are_exact_geometric(self):
        # log m_n = n^2 / 2, so a_n = exp(-n/4) on the nose.
        rep = stieltjes_terms(moments_lognormal(60), count=60)
        for n in range(1, 61):
            assert rep.terms[n - 1] == pytest.approx(
                math.exp(-n / 4.0), abs=1e-14
            )
        assert rep.classification == CONVERGENCE_CONSISTENT
        assert rep.fit_details["rule"] == "geometric-ratio"

    def test_partial_sums_accumulate(self):
        rep = stieltjes_terms(moments_factorial(6), count=6)
        assert rep.partial_sums[2] == pytest.approx(sum(rep.terms[:3]))

    def test_requires_normalized(self):
        s = MomentSequence(1, 2, {(0,): 2.0, (1,): 2.0, (2,): 4.0})
        with pytest.raises(NotNormalized):
            stieltjes_terms(s, count=2)

    def test_count_beyond_data(self):
        with pytest.raises(DegreeOverflow):
            stieltjes_terms(moments_factorial(5), count=6)

    def test_degenerate_zero_moment(self):
        # The point mass at 0 has every higher moment equal to zero; the
        # terms blow up and the verdict is divergence-consistent by the
        # degenerate rule.
        mu = AtomicMeasure(1, [((0.0,), 1.0)])
        rep = stieltjes_terms(moments_of_atomic(mu, 8), count=8)
        assert rep.degenerate
        assert rep.classification == DIVERGENCE_CONSISTENT
        assert rep.fit_details["rule"] == "degenerate-zero-moment"

    def test_vanishing_tail_terms(self):
        # log m_n = n^3: a_n = exp(-n^2/2) underflows to 0.0 late in the
        # tail, which can only happen under extremely fast growth.
        deg = 60
        values = {(0,): 1.0}
        logs = {}
        for n in range(1, deg + 1):
            values[(n,)] = math.inf
            logs[(n,)] = float(n**3)
        s = MomentSequence(1, deg, values, logs)
        rep = stieltjes_terms(s, count=deg)
        assert rep.classification == CONVERGENCE_CONSISTENT
        assert rep.fit_details["rule"] == "vanishing-terms"

    def test_inconclusive_between_rules(self):
        # a_n = n^(-2): decays too fast for the power-law rule
        # (exponent 2 > 1.05) but with ratios tending to 1, too slowly for
        # the geometric rule.
        deg = 80
        values = {(0,): 1.0}
        logs = {}
        for n in range(1, deg + 1):
            values[(n,)] = math.inf
            logs[(n,)] = 4.0 * n * math.log(n) if n > 1 else 0.0
        s = MomentSequence(1, deg, values, logs)
        rep = stieltjes_terms(s, count=deg)
        assert rep.terms[9] == pytest.approx(10.0 ** (-2.0), rel=1e-12)
        assert rep.classification == INCONCLUSIVE


class TestCarlemanTerms:
    def test_factorial_first_terms(self):
        # a_n = (s_{2n})^(-1/(2n)): a_1 = (2!)^(-1/2), a_2 = (4!)^(-1/4).
        rep = carleman_terms(moments_factorial(10), count=5)
        assert rep.terms[0] == pytest.approx(2.0 ** (-0.5))
        assert rep.terms[1] == pytest.approx(24.0 ** (-0.25))

    def test_factorial_classified_divergence_consistent(self):
        rep = carleman_terms(moments_factorial(120), count=60)
        assert rep.classification == DIVERGENCE_CONSISTENT

    def test_needs_even_orders(self):
        with pytest.raises(DegreeOverflow):
            carleman_terms(moments_factorial(10), count=6)


class TestSubsequenceTerms:
    def test_stride_one_matches_stieltjes(self):
        s = moments_factorial(12)
        a = subsequence_terms(s, stride=1, count=12)
        b = stieltjes_terms(s, count=12)
        assert a.terms == b.terms

    def test_stride_two_picks_even_orders(self):
        s = moments_factorial(12)
        rep = subsequence_terms(s, stride=2, count=6)
        # Term n is s_{2n}^(-1/(2*2n)); the Carleman-type term is
        # s_{2n}^(-1/(2n)), so each strided term is its square root.
        car = carleman_terms(s, count=6)
        assert rep.terms == pytest.approx([t**0.5 for t in car.terms])


def _alternating_sequence() -> MomentSequence:
    # s = (1, 0, 1, 0, 1): plain Hankel is PSD but the index-shifted one is
    # [[0, 1], [1, 0]] with eigenvalue -1.
    return MomentSequence(
        1, 4, {(0,): 1.0, (1,): 0.0, (2,): 1.0, (3,): 0.0, (4,): 1.0}
    )


class TestCheckSubsequenceBounds:
    def test_all_ones_has_zero_margins(self):
        s = MomentSequence(1, 12, {(k,): 1.0 for k in range(13)})
        rep = check_subsequence_bounds(s, stride=2, count=10)
        assert rep.passed
        assert rep.monotone_margin == pytest.approx(0.0, abs=1e-15)
        assert rep.termwise_margin == pytest.approx(0.0, abs=1e-15)
        assert rep.sum_lhs <= rep.sum_rhs

    def test_factorial_strides(self):
        s = moments_factorial(64)
        for stride in (2, 3, 4):
            rep = check_subsequence_bounds(s, stride=stride, count=60)
            assert rep.passed
            assert rep.stride == stride
            assert rep.monotone_margin >= 0.0
            assert rep.termwise_margin <= 0.0 + 1e-12

    def test_lognormal_strides(self):
        s = moments_lognormal(64)
        for stride in (2, 3, 4):
            assert check_subsequence_bounds(s, stride=stride, count=60).passed

    def test_atomic_measure_passes(self):
        mu = AtomicMeasure(1, [((0.5,), 0.4), ((2.0,), 0.3), ((7.0,), 0.3)])
        s = moments_of_atomic(mu, 64)
        rep = check_subsequence_bounds(s, stride=3, count=60)
        assert rep.passed

    def test_shifted_hankel_failure_raises(self):
        with pytest.raises(HypothesisFailure):
            check_subsequence_bounds(_alternating_sequence(), stride=2, count=2)

    def test_count_below_stride_rejected(self):
        s = moments_factorial(12)
        with pytest.raises(ValueError):
            check_subsequence_bounds(s, stride=4, count=3)

    def test_data_too_short(self):
        s = moments_factorial(12)
        with pytest.raises(DegreeOverflow):
            check_subsequence_bounds(s, stride=4, count=12)
