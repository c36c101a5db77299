"""Ground-truth moment data with known representing measures (or known
growth behavior), for tests, demos, and the CLI's ``generate`` command.

Three families:

* atomic — moments of an explicit finite atomic measure, optionally with
  exact rational arithmetic;
* exponential-type — 1-D moments ``n!`` (density ``exp(-x)`` on
  ``[0, inf)``), computed by the exact integer recursion; the associated
  root series decay like powers of ``n``, so growth diagnostics should find
  them divergence-consistent;
* lognormal-type — 1-D moments ``exp(n^2 / 2)`` (standard lognormal
  density), a classical indeterminate case; the root series decay
  geometrically, so diagnostics should find them convergence-consistent.
  Values overflow IEEE doubles past ``n = 37`` and are stored as ``inf``
  with authoritative log values alongside.

The power-curve family bundles moments, constraints, and an explicit
inverse for end-to-end reduction runs: constraints ``x2 - x1^k`` and ``x1``
cut out the region on and above a power curve in the right half plane, and
the evaluation map ``(x1, x2) -> (x2 - x1^k, x1)`` is inverted by
``(y1, y2) -> (y2, y1 + y2^k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MembershipViolation
from .polynomials import (
    AtomicMeasure,
    MomentSequence,
    Polynomial,
    Scalar,
    monomials_up_to,
)
from .reduction import InverseMap, SemiAlgebraicPresentation


def moments_of_atomic(
    measure: AtomicMeasure, max_degree: int, exact: bool = False
) -> MomentSequence:
    """Moments ``sum_i w_i * x_i^alpha`` of a finite atomic measure.

    With ``exact=True`` every coordinate and weight is converted to the
    exact rational it represents and all entries come out as ``Fraction``.
    """
    atoms: list[tuple[tuple[Scalar, ...], Scalar]] = []
    for point, weight in measure.atoms:
        if exact:
            atoms.append(
                (tuple(Fraction(x) for x in point), Fraction(weight))
            )
        else:
            atoms.append((tuple(float(x) for x in point), float(weight)))
    values: dict[tuple[int, ...], Scalar] = {}
    for alpha in monomials_up_to(measure.dim, max_degree):
        total: Scalar = Fraction(0) if exact else 0.0
        for point, weight in atoms:
            term: Scalar = weight
            for x, e in zip(point, alpha):
                if e:
                    term = term * x**e
            total = total + term
        values[alpha] = total
    return MomentSequence(measure.dim, max_degree, values)


def moments_factorial(max_degree: int) -> MomentSequence:
    """1-D moments ``s_n = n!`` as exact integers, with log values.

    These are the moments of the unit-mass density ``exp(-x)`` on
    ``[0, inf)``.
    """
    values: dict[tuple[int, ...], Scalar] = {}
    logs: dict[tuple[int, ...], float] = {}
    fact = 1
    for n in range(max_degree + 1):
        if n:
            fact *= n
        values[(n,)] = fact
        logs[(n,)] = math.lgamma(n + 1)
    return MomentSequence(1, max_degree, values, logs)


def moments_lognormal(max_degree: int) -> MomentSequence:
    """1-D moments ``s_n = exp(n^2 / 2)`` of the standard lognormal density.

    Entries beyond the IEEE double range are stored as ``inf``; the log
    values ``n^2 / 2`` (exact in doubles) are always present and are what
    the growth diagnostics consume.
    """
    values: dict[tuple[int, ...], Scalar] = {}
    logs: dict[tuple[int, ...], float] = {}
    for n in range(max_degree + 1):
        log_v = n * n / 2.0
        try:
            v = math.exp(log_v)
        except OverflowError:
            v = math.inf
        values[(n,)] = v
        logs[(n,)] = log_v
    return MomentSequence(1, max_degree, values, logs)


@dataclass
class PowerCurveFixture:
    """A reduction test problem: moments of an atomic measure supported on
    the region above a power curve, its constraint presentation, and the
    explicit inverse of the evaluation map."""

    moments: MomentSequence
    presentation: SemiAlgebraicPresentation
    inverse: InverseMap
    measure: AtomicMeasure
    exponent: int


def power_curve_presentation(exponent: int) -> SemiAlgebraicPresentation:
    """Constraints ``x2 - x1^k >= 0`` and ``x1 >= 0`` in two variables."""
    if exponent < 1:
        raise ValueError(f"curve exponent must be >= 1, got {exponent}")
    f1 = Polynomial(2, {(0, 1): 1, (exponent, 0): -1})
    f2 = Polynomial.variable(2, 0)
    return SemiAlgebraicPresentation(2, [f1, f2])


def power_curve_inverse(exponent: int) -> InverseMap:
    """Exact inverse of ``(x1, x2) -> (x2 - x1^k, x1)``: the components
    ``x1 = y2`` and ``x2 = y1 + y2^k``."""
    g1 = Polynomial.variable(2, 1)
    g2 = Polynomial(2, {(1, 0): 1, (0, exponent): 1})
    return InverseMap(2, [g1, g2])


def power_curve_fixture(
    exponent: int,
    measure: AtomicMeasure,
    max_degree: int,
    exact: bool = False,
) -> PowerCurveFixture:
    """Bundle moments, constraints, and inverse for atoms above the curve.

    Raises :class:`MembershipViolation` when some atom does not satisfy the
    constraints (boundary points, where a constraint is exactly zero, are
    fine).
    """
    pres = power_curve_presentation(exponent)
    offenders = [
        (point, tuple(float(v) for v in pres.values_at(point)))
        for point, _ in measure.atoms
        if not pres.contains(point)
    ]
    if offenders:
        raise MembershipViolation(
            f"atoms violate the curve constraints: {offenders}"
        )
    moments = moments_of_atomic(measure, max_degree, exact=exact)
    return PowerCurveFixture(
        moments, pres, power_curve_inverse(exponent), measure, exponent
    )
