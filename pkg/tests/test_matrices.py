"""Moment matrix, localizing matrix, PSD verdicts, numerical rank."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from momentkit import (
    EigenFailure,
    MomentSequence,
    Polynomial,
    check_hypotheses,
    localizing_matrix,
    moment_matrix,
    moments_factorial,
    moments_of_atomic,
    numerical_rank,
    psd_check,
    AtomicMeasure,
)
from momentkit.matrices import require_psd
from momentkit.errors import NotPsd


class TestMomentMatrix:
    def test_factorial_level_two(self):
        # s_k = k! gives entries s_{i+j}:
        #   [[0!, 1!, 2!], [1!, 2!, 3!], [2!, 3!, 4!]].
        s = moments_factorial(4)
        m = moment_matrix(s, 2)
        assert m.basis == [(0,), (1,), (2,)]
        np.testing.assert_array_equal(
            m.entries, [[1.0, 1.0, 2.0], [1.0, 2.0, 6.0], [2.0, 6.0, 24.0]]
        )

    def test_two_dim_basis_order(self):
        mu = AtomicMeasure(2, [((1.0, 2.0), 1.0)])
        s = moments_of_atomic(mu, 2)
        m = moment_matrix(s, 1)
        assert m.basis == [(0, 0), (1, 0), (0, 1)]
        # Entry ((1,0), (0,1)) = s_(1,1) = 1 * 2.
        np.testing.assert_allclose(
            m.entries, [[1.0, 1.0, 2.0], [1.0, 1.0, 2.0], [2.0, 2.0, 4.0]]
        )

    def test_rank_equals_atom_count(self):
        mu = AtomicMeasure(
            2, [((1.0, 2.0), 0.5), ((3.0, 1.0), 0.3), ((5.0, 4.0), 0.2)]
        )
        s = moments_of_atomic(mu, 4)
        assert numerical_rank(moment_matrix(s, 2)) == 3
        assert numerical_rank(moment_matrix(s, 1)) == 3

    def test_symmetry_validated(self):
        from momentkit import SymmetricMatrixWithBasis

        with pytest.raises(ValueError):
            SymmetricMatrixWithBasis([(0,), (1,)], np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestLocalizingMatrix:
    def test_level_zero_is_riesz_value(self):
        # The 1 x 1 localizing matrix is exactly L(f).
        mu = AtomicMeasure(1, [((2.0,), 0.7)])
        s = moments_of_atomic(mu, 2, exact=True)
        f = Polynomial(1, {(1,): Fraction(1), (0,): Fraction(-3)})  # x - 3
        loc = localizing_matrix(s, f, 0)
        assert loc.entries.shape == (1, 1)
        assert loc.entries[0, 0] == pytest.approx(0.7 * (2.0 - 3.0))

    def test_coordinate_shift_on_factorial(self):
        # Localizing by f = x shifts every index by one: entries s_{i+j+1}.
        s = moments_factorial(3)
        loc = localizing_matrix(s, Polynomial.variable(1, 0), 1)
        np.testing.assert_array_equal(loc.entries, [[1.0, 2.0], [2.0, 6.0]])

    def test_zero_polynomial_gives_zero_matrix(self):
        s = moments_factorial(2)
        loc = localizing_matrix(s, Polynomial.zero(1), 1)
        np.testing.assert_array_equal(loc.entries, np.zeros((2, 2)))

    def test_atom_violating_constraint_not_psd(self):
        # f(atom) < 0 forces a negative localizing matrix for a point mass.
        mu = AtomicMeasure(1, [((2.0,), 1.0)])
        s = moments_of_atomic(mu, 4, exact=True)
        f = Polynomial(1, {(0,): Fraction(1), (1,): Fraction(-1)})  # 1 - x
        verdict = psd_check(localizing_matrix(s, f, 1))
        assert not verdict.is_psd


class TestPsdCheck:
    def test_indefinite_matrix(self):
        # Eigenvalues of [[1, 2], [2, 1]] are 3 and -1.
        verdict = psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert not verdict.is_psd
        assert verdict.min_eigenvalue == pytest.approx(-1.0)

    def test_identity(self):
        verdict = psd_check(np.eye(3))
        assert verdict.is_psd
        assert verdict.min_eigenvalue == pytest.approx(1.0)

    def test_huge_scale_no_overflow(self):
        verdict = psd_check(1e300 * np.eye(2))
        assert verdict.is_psd

    def test_tiny_negative_within_relative_tolerance(self):
        m = np.diag([1.0, -1e-12])
        assert psd_check(m).is_psd
        assert not psd_check(m, tol_rel=1e-14).is_psd

    def test_empty_matrix_is_psd(self):
        assert psd_check(np.zeros((0, 0))).is_psd

    def test_non_finite_entries_raise(self):
        with pytest.raises(EigenFailure):
            psd_check(np.array([[math.inf, 0.0], [0.0, 1.0]]))

    def test_require_psd_raises_with_context(self):
        with pytest.raises(NotPsd):
            require_psd(np.array([[-1.0]]), label="test matrix")


class TestNumericalRank:
    def test_rank_one(self):
        assert numerical_rank(np.array([[1.0, 1.0], [1.0, 1.0]])) == 1

    def test_zero_matrix(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_full_rank(self):
        assert numerical_rank(np.diag([3.0, 2.0, 1.0])) == 3


class TestCheckHypotheses:
    def test_factorial_with_coordinate_constraint(self):
        # Factorial moments come from a measure on [0, inf), so both the
        # moment matrix and the x-localizing matrix are PSD.
        s = moments_factorial(6)
        report = check_hypotheses(s, [Polynomial.variable(1, 0)], level=2)
        assert report.passed
        assert report.moment_verdict.is_psd
        assert len(report.localizing_verdicts) == 1
        assert report.localizing_verdicts[0].is_psd

    def test_failing_constraint_reported(self):
        mu = AtomicMeasure(1, [((2.0,), 1.0)])
        s = moments_of_atomic(mu, 4, exact=True)
        f = Polynomial(1, {(0,): Fraction(1), (1,): Fraction(-1)})  # 1 - x
        report = check_hypotheses(s, [f], level=1)
        assert not report.passed
        assert report.moment_verdict.is_psd
        assert not report.localizing_verdicts[0].is_psd

    def test_indefinite_moment_matrix_fails(self):
        s = MomentSequence(1, 2, {(0,): 1.0, (1,): 0.0, (2,): -1.0})
        report = check_hypotheses(s, [], level=1)
        assert not report.passed
        assert not report.moment_verdict.is_psd
