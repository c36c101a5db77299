"""Reduction of a constrained moment problem to an unconstrained one in the
image of its constraint polynomials.

A semi-algebraic presentation is a list of polynomials ``f_1, ..., f_m`` in
``d`` variables; the feasible set is ``{x : f_j(x) >= 0 for all j}``.  The
substitution ``y_j -> f_j`` is a unital algebra homomorphism from
``m``-variable polynomials to ``d``-variable ones, and composing it with the
moment functional of ``s`` produces pushed-forward moment data in the image
variables.  If an atomic measure represents the pushed data on the closed
positive orthant, pulling each atom back through the joint evaluation map
``x -> (f_1(x), ..., f_m(x))`` produces an atomic representing measure for
the original data supported on the feasible set.  When the constraint
polynomials generate the full polynomial algebra, the evaluation map is
injective and the pull-back is unambiguous; :func:`check_generates` decides
that property exactly within a degree budget.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    AmbiguousPreimageWarning,
    DegreeOverflow,
    DimMismatch,
    MembershipViolation,
    NoPreimage,
)
from .polynomials import (
    AtomicMeasure,
    MomentSequence,
    MultiIndex,
    Polynomial,
    Scalar,
    grlex_key,
    monomials_up_to,
)

#: Convergence tolerance for the Newton preimage search.
NEWTON_TOL = 1e-10
#: Iteration cap per Newton start.
NEWTON_STEPS = 40
#: Number of Newton starting points (spread over a box).
NEWTON_STARTS = 50


@dataclass
class SemiAlgebraicPresentation:
    """Constraint polynomials ``f_1..f_m`` in ``d`` variables; the feasible
    set is where all of them are nonnegative."""

    dim: int
    generators: list[Polynomial]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if not self.generators:
            raise ValueError("a presentation needs at least one polynomial")
        for f in self.generators:
            if f.dim != self.dim:
                raise DimMismatch(
                    f"constraint in {f.dim} variables inside a "
                    f"{self.dim}-dimensional presentation"
                )

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def max_degree(self) -> int:
        """Largest constraint degree (at least 0 even if all are constant)."""
        return max(max(int(f.degree), 0) if not f.is_zero() else 0
                   for f in self.generators)

    def values_at(self, point: Sequence[Scalar]) -> tuple[Scalar, ...]:
        """The joint evaluation map ``x -> (f_1(x), ..., f_m(x))``."""
        return tuple(f.evaluate(point) for f in self.generators)

    def contains(self, point: Sequence[Scalar], tol: float = 0.0) -> bool:
        """Whether every constraint is ``>= -tol`` at ``point``."""
        return all(float(v) >= -tol for v in self.values_at(point))

    def substitute(self, poly: Polynomial) -> Polynomial:
        """Apply the homomorphism ``y_j -> f_j`` to an ``m``-variable
        polynomial, exactly.

        The result is ``sum_alpha poly_alpha * f^alpha`` with exact rational
        arithmetic, so ``substitute(p * q) == substitute(p) * substitute(q)``
        and ``substitute(p + q) == substitute(p) + substitute(q)`` hold as
        identities, not approximations.
        """
        if poly.dim != self.num_generators:
            raise DimMismatch(
                f"polynomial in {poly.dim} variables under a presentation "
                f"with {self.num_generators} constraints"
            )
        result = Polynomial.zero(self.dim)
        for alpha, coeff in poly.sorted_terms():
            image = Polynomial.constant(self.dim, coeff)
            for j, e in enumerate(alpha):
                if e:
                    image = image * self.generators[j] ** e
            result = result + image
        return result


@dataclass
class InverseMap:
    """Explicit inverse of the joint evaluation map: ``d`` polynomials in the
    ``m`` image variables with ``g(f_1(x), ..., f_m(x)) = x``."""

    num_generators: int
    components: list[Polynomial]

    def __post_init__(self) -> None:
        for g in self.components:
            if g.dim != self.num_generators:
                raise DimMismatch(
                    f"inverse component in {g.dim} variables, expected "
                    f"{self.num_generators}"
                )

    @property
    def dim(self) -> int:
        return len(self.components)

    def evaluate(self, point: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return tuple(g.evaluate(point) for g in self.components)


@dataclass
class GenerationResult:
    """Outcome of the exact generation check."""

    generated: bool
    budget: int
    witnesses: list[Polynomial] | None


def _image_monomials(
    pres: SemiAlgebraicPresentation, budget: int
) -> dict[MultiIndex, Polynomial]:
    """Images ``f^alpha`` for all ``|alpha| <= budget``, built incrementally."""
    m = pres.num_generators
    images: dict[MultiIndex, Polynomial] = {}
    for alpha in monomials_up_to(m, budget):
        if sum(alpha) == 0:
            images[alpha] = Polynomial.constant(pres.dim, 1)
            continue
        j = next(i for i, e in enumerate(alpha) if e)
        prev = tuple(e - (1 if i == j else 0) for i, e in enumerate(alpha))
        images[alpha] = images[prev] * pres.generators[j]
    return images


def _solve_exact(
    columns: list[dict[MultiIndex, Fraction]],
    targets: list[dict[MultiIndex, Fraction]],
) -> list[dict[int, Fraction] | None]:
    """Solve ``A x = t`` exactly for several targets over the rationals.

    ``columns[j]`` is the sparse j-th column of ``A`` (rows keyed by
    multi-index); returns, per target, a sparse solution keyed by column
    index, or ``None`` when that target is outside the column span.
    """
    rows = sorted(
        {k for col in columns for k in col}
        | {k for t in targets for k in t},
        key=grlex_key,
    )
    row_pos = {k: i for i, k in enumerate(rows)}
    n_rows, n_cols, n_targets = len(rows), len(columns), len(targets)
    mat = [
        [Fraction(0)] * (n_cols + n_targets) for _ in range(n_rows)
    ]
    for j, col in enumerate(columns):
        for k, v in col.items():
            mat[row_pos[k]][j] = v
    for t, target in enumerate(targets):
        for k, v in target.items():
            mat[row_pos[k]][n_cols + t] = v

    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n_cols):
        pivot_row = next(
            (i for i in range(row, n_rows) if mat[i][col]), None
        )
        if pivot_row is None:
            continue
        mat[row], mat[pivot_row] = mat[pivot_row], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for i in range(n_rows):
            if i != row and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[row])]
        pivots.append((row, col))
        row += 1
        if row == n_rows:
            break

    solutions: list[dict[int, Fraction] | None] = []
    for t in range(n_targets):
        rhs_col = n_cols + t
        consistent = all(
            not mat[i][rhs_col]
            for i in range(n_rows)
            if all(not mat[i][c] for c in range(n_cols))
        )
        if not consistent:
            solutions.append(None)
            continue
        sol = {
            col: mat[r][rhs_col] for r, col in pivots if mat[r][rhs_col]
        }
        solutions.append(sol)
    return solutions


def check_generates(
    pres: SemiAlgebraicPresentation, budget: int
) -> GenerationResult:
    """Decide exactly whether products of the constraints up to a degree
    budget span every coordinate.

    Parameters
    ----------
    pres : SemiAlgebraicPresentation
        The constraint polynomials.
    budget : int
        Images ``f^alpha`` with ``|alpha| <= budget`` are admitted.

    Returns
    -------
    GenerationResult
        ``generated`` is true iff every coordinate ``x_i`` is an exact
        rational combination of the admitted images; ``witnesses`` then
        holds one ``m``-variable polynomial per coordinate whose
        substitution equals that coordinate exactly.  A negative answer is
        only negative *for this budget*; generation might still hold with a
        larger one.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    images = _image_monomials(pres, budget)
    order = sorted(images, key=grlex_key)
    columns = [dict(images[alpha].terms) for alpha in order]
    targets = [
        dict(Polynomial.variable(pres.dim, i).terms) for i in range(pres.dim)
    ]
    solved = _solve_exact(columns, targets)
    if any(sol is None for sol in solved):
        return GenerationResult(False, budget, None)
    witnesses = [
        Polynomial(
            pres.num_generators,
            {order[j]: c for j, c in sol.items()},
        )
        for sol in solved  # type: ignore[union-attr]
    ]
    return GenerationResult(True, budget, witnesses)


def pushforward_moments(
    s: MomentSequence, pres: SemiAlgebraicPresentation, image_degree: int
) -> MomentSequence:
    """Moment data of the functional composed with the substitution map.

    The pushed entry at ``alpha`` (an ``m``-multi-index) is the original
    functional applied to ``f^alpha``.  Exact when ``s`` is exact.

    Requires ``image_degree * max_degree(pres) <= s.max_degree`` so that the
    deepest image stays inside the data.
    """
    if pres.dim != s.dim:
        raise DimMismatch(
            f"presentation in {pres.dim} variables against "
            f"{s.dim}-dimensional moments"
        )
    if image_degree < 0:
        raise ValueError(f"image degree must be >= 0, got {image_degree}")
    need = image_degree * pres.max_degree
    if need > s.max_degree:
        raise DegreeOverflow(
            f"pushing forward to degree {image_degree} needs original entries "
            f"up to degree {need}, data stops at {s.max_degree}"
        )
    images = _image_monomials(pres, image_degree)
    values = {alpha: s.riesz(image) for alpha, image in images.items()}
    return MomentSequence(pres.num_generators, image_degree, values)


def _newton_preimages(
    pres: SemiAlgebraicPresentation,
    target: Sequence[float],
    tol: float,
) -> list[tuple[float, ...]]:
    """Distinct Newton solutions of ``values_at(x) = target`` from a grid of
    starting points (numerical Jacobian, least-squares steps)."""
    d = pres.dim
    target_arr = np.asarray([float(t) for t in target])
    per_axis = max(3, math.ceil(NEWTON_STARTS ** (1.0 / d)))
    # Cover both signs: the feasible set need not sit in the positive
    # orthant, and distinct preimages of one atom often differ in sign.
    axis_points = np.linspace(-10.0, 10.0, per_axis)
    found: list[tuple[float, ...]] = []

    def residual(x: np.ndarray) -> np.ndarray:
        return (
            np.asarray([float(v) for v in pres.values_at(tuple(x))])
            - target_arr
        )

    for start in itertools.product(axis_points, repeat=d):
        x = np.asarray(start, dtype=float)
        ok = False
        for _ in range(NEWTON_STEPS):
            f = residual(x)
            if float(np.max(np.abs(f))) <= NEWTON_TOL:
                ok = True
                break
            jac = np.empty((len(f), d))
            for j in range(d):
                h = 1e-7 * max(1.0, abs(float(x[j])))
                xh = x.copy()
                xh[j] += h
                jac[:, j] = (residual(xh) - f) / h
            step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
            if not np.all(np.isfinite(step)):
                break
            x = x + step
            if float(np.max(np.abs(step))) <= 1e-14 * max(
                1.0, float(np.max(np.abs(x)))
            ):
                f = residual(x)
                ok = float(np.max(np.abs(f))) <= NEWTON_TOL
                break
        if not ok or not np.all(np.isfinite(x)):
            continue
        candidate = tuple(float(v) for v in x)
        cluster_tol = max(tol, 1e-8)
        if all(
            max(abs(a - b) for a, b in zip(candidate, prev)) > cluster_tol
            for prev in found
        ):
            found.append(candidate)
    return found


def pull_back_atoms(
    nu: AtomicMeasure,
    pres: SemiAlgebraicPresentation,
    inverse: InverseMap | None = None,
    tol: float = 1e-6,
) -> AtomicMeasure:
    """Pull an atomic measure on the image variables back to the feasible set.

    Parameters
    ----------
    nu : AtomicMeasure
        Atoms in the ``m`` image variables (one coordinate per constraint).
    pres : SemiAlgebraicPresentation
        The constraints defining the evaluation map and the feasible set.
    inverse : InverseMap, optional
        Explicit inverse polynomials; when omitted, each preimage is found
        by a multi-start Newton search on the evaluation map.
    tol : float
        Residual tolerance for ``values_at(preimage) = atom`` and slack for
        the feasible-set membership test.

    Returns
    -------
    AtomicMeasure
        One preimage point per atom, carrying the same weight.  Preimages
        that coincide within ``tol`` are merged (weights added).

    Raises
    ------
    NoPreimage
        If some atom has no preimage within ``tol``.
    MembershipViolation
        If a preimage violates a constraint by more than ``tol``.

    Warns
    -----
    AmbiguousPreimageWarning
        If the Newton search finds several distinct feasible preimages for
        one atom (possible when the constraints do not generate the full
        algebra); the one with the smallest residual is kept.
    """
    if nu.dim != pres.num_generators:
        raise DimMismatch(
            f"atoms in {nu.dim} image variables against {pres.num_generators} "
            f"constraints"
        )
    if inverse is not None and (
        inverse.num_generators != pres.num_generators
        or inverse.dim != pres.dim
    ):
        raise DimMismatch("inverse map shape does not match the presentation")

    pulled: list[tuple[tuple[float, ...], Scalar]] = []
    for point, weight in nu.atoms:
        if inverse is not None:
            candidates = [tuple(float(v) for v in inverse.evaluate(point))]
        else:
            candidates = _newton_preimages(pres, [float(v) for v in point], tol)
            if not candidates:
                raise NoPreimage(
                    f"no preimage found for atom {point} (Newton search failed)"
                )

        scored = []
        for x in candidates:
            values = pres.values_at(x)
            res = max(abs(float(v) - float(t)) for v, t in zip(values, point))
            scored.append((res, x))
        scored.sort(key=lambda rx: (rx[0], rx[1]))
        feasible = [
            (res, x) for res, x in scored
            if res <= tol and pres.contains(x, tol)
        ]
        if not feasible:
            best_res, best_x = scored[0]
            if best_res <= tol:
                violations = [
                    (j, float(v))
                    for j, v in enumerate(pres.values_at(best_x))
                    if float(v) < -tol
                ]
                raise MembershipViolation(
                    f"preimage {best_x} of atom {point} violates constraints "
                    f"{violations}"
                )
            raise NoPreimage(
                f"best candidate for atom {point} has residual {best_res:g} "
                f"above {tol:g}"
            )
        if len(feasible) > 1:
            warnings.warn(
                f"atom {point} has {len(feasible)} distinct feasible "
                f"preimages; keeping the smallest-residual one",
                AmbiguousPreimageWarning,
            )
        pulled.append((feasible[0][1], weight))

    merged: list[tuple[tuple[float, ...], Scalar]] = []
    for x, w in pulled:
        for i, (y, wy) in enumerate(merged):
            if max(abs(a - b) for a, b in zip(x, y)) <= tol:
                merged[i] = (y, wy + w)
                break
        else:
            merged.append((x, w))
    if len(merged) < len(pulled):
        warnings.warn(
            f"{len(pulled) - len(merged)} pulled-back atom(s) coincided and "
            f"were merged",
            AmbiguousPreimageWarning,
        )
    return AtomicMeasure(pres.dim, merged)
