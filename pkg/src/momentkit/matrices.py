"""Moment and localizing matrices on graded-lex monomial bases, plus
tolerance-based positive-semidefiniteness verdicts.

For a truncated moment sequence ``s`` the moment matrix at level ``n`` is
indexed by all monomials of degree <= ``n`` and holds ``s[alpha + beta]``;
the localizing matrix of a polynomial ``f`` holds
``sum_gamma f_gamma * s[alpha + beta + gamma]``.  Both are the Gram matrices
of the functional on products, so a representing nonnegative measure (on the
set where ``f >= 0``) forces them to be positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeOverflow, DimMismatch, EigenFailure, NotPsd
from .polynomials import (
    MomentSequence,
    MultiIndex,
    Polynomial,
    add_indices,
    monomials_up_to,
)

DEFAULT_PSD_TOL = 1e-8
DEFAULT_RANK_TOL = 1e-10


@dataclass
class SymmetricMatrixWithBasis:
    """A symmetric matrix together with the monomial basis labeling its rows
    and columns (graded-lex order)."""

    basis: list[MultiIndex]
    entries: np.ndarray

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        n = len(self.basis)
        if self.entries.shape != (n, n):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match basis of size {n}"
            )
        if n and np.all(np.isfinite(self.entries)):
            scale = float(np.max(np.abs(self.entries)))
            asym = float(np.max(np.abs(self.entries - self.entries.T)))
            if asym > 1e-14 * max(1.0, scale):
                raise ValueError(f"matrix is not symmetric (asymmetry {asym:g})")

    @property
    def size(self) -> int:
        return len(self.basis)


@dataclass
class PsdVerdict:
    """Outcome of a positive-semidefiniteness test."""

    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float


@dataclass
class HypothesesReport:
    """Joint verdict on the moment matrix and one localizing matrix per
    generator, all truncated at the same level."""

    level: int
    moment_verdict: PsdVerdict
    localizing_verdicts: list[PsdVerdict] = field(default_factory=list)
    passed: bool = False


def moment_matrix(s: MomentSequence, level: int) -> SymmetricMatrixWithBasis:
    """Moment matrix of ``s`` truncated at ``level``.

    Parameters
    ----------
    s : MomentSequence
        Needs entries up to degree ``2 * level``.
    level : int
        Truncation level (basis = all monomials of degree <= level).

    Returns
    -------
    SymmetricMatrixWithBasis
        Entry ``(alpha, beta)`` is ``s[alpha + beta]`` as a float.
    """
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if 2 * level > s.max_degree:
        raise DegreeOverflow(
            f"moment matrix at level {level} needs degree {2 * level} entries, "
            f"data stops at {s.max_degree}"
        )
    basis = monomials_up_to(s.dim, level)
    n = len(basis)
    m = np.empty((n, n), dtype=float)
    for i, a in enumerate(basis):
        for j in range(i, n):
            v = float(s.value(add_indices(a, basis[j])))
            m[i, j] = v
            m[j, i] = v
    return SymmetricMatrixWithBasis(basis, m)


def localizing_matrix(
    s: MomentSequence, f: Polynomial, level: int
) -> SymmetricMatrixWithBasis:
    """Localizing matrix of ``f`` for ``s`` truncated at ``level``.

    Parameters
    ----------
    s : MomentSequence
        Needs entries up to degree ``2 * level + deg(f)``.
    f : Polynomial
        The constraint polynomial; the zero polynomial yields a zero matrix.
    level : int
        Truncation level.

    Returns
    -------
    SymmetricMatrixWithBasis
        Entry ``(alpha, beta)`` is ``sum_gamma f_gamma * s[alpha+beta+gamma]``.
    """
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if f.dim != s.dim:
        raise DimMismatch(
            f"constraint in {f.dim} variables against {s.dim}-dimensional moments"
        )
    basis = monomials_up_to(s.dim, level)
    n = len(basis)
    terms = f.sorted_terms()
    if terms and 2 * level + int(f.degree) > s.max_degree:
        raise DegreeOverflow(
            f"localizing matrix at level {level} for a degree-{int(f.degree)} "
            f"constraint needs degree {2 * level + int(f.degree)} entries, "
            f"data stops at {s.max_degree}"
        )
    m = np.zeros((n, n), dtype=float)
    for i, a in enumerate(basis):
        for j in range(i, n):
            ab = add_indices(a, basis[j])
            total = 0.0
            for gamma, coeff in terms:
                total = total + coeff * s.value(add_indices(ab, gamma))
            m[i, j] = total
            m[j, i] = total
    return SymmetricMatrixWithBasis(basis, m)


def _as_array(matrix: SymmetricMatrixWithBasis | np.ndarray) -> np.ndarray:
    if isinstance(matrix, SymmetricMatrixWithBasis):
        return matrix.entries
    return np.asarray(matrix, dtype=float)


def psd_check(
    matrix: SymmetricMatrixWithBasis | np.ndarray, tol_rel: float = DEFAULT_PSD_TOL
) -> PsdVerdict:
    """Decide positive semidefiniteness up to a relative tolerance.

    The verdict is ``min_eigenvalue >= -tol_rel * max(1, ||M||_inf)`` with
    ``||.||_inf`` the maximum absolute row sum.  The matrix is rescaled by its
    largest absolute entry before the eigenvalue computation (semidefiniteness
    is invariant under positive scaling), which keeps the test reliable for
    entries far outside the comfortable floating-point range.
    """
    m = _as_array(matrix)
    if m.size == 0:
        return PsdVerdict(True, 0.0, tol_rel)
    if not np.all(np.isfinite(m)):
        raise EigenFailure("matrix has non-finite entries")
    m = (m + m.T) / 2.0
    norm_inf = float(np.max(np.sum(np.abs(m), axis=1)))
    tolerance = tol_rel * max(1.0, norm_inf)
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return PsdVerdict(True, 0.0, tolerance)
    try:
        eigenvalues = np.linalg.eigvalsh(m / scale)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy internal
        raise EigenFailure(f"eigenvalue computation failed: {exc}") from exc
    min_eig = float(eigenvalues[0]) * scale
    return PsdVerdict(min_eig >= -tolerance, min_eig, tolerance)


def numerical_rank(
    matrix: SymmetricMatrixWithBasis | np.ndarray, tol: float = DEFAULT_RANK_TOL
) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    m = _as_array(matrix)
    if m.size == 0:
        return 0
    if not np.all(np.isfinite(m)):
        raise EigenFailure("matrix has non-finite entries")
    sigma = np.linalg.svd(m, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > tol * sigma[0]))


def check_hypotheses(
    s: MomentSequence,
    generators: list[Polynomial],
    level: int,
    tol_rel: float = DEFAULT_PSD_TOL,
) -> HypothesesReport:
    """Check the moment matrix and every localizing matrix at one level.

    Parameters
    ----------
    s : MomentSequence
        Moment data; must extend far enough for every matrix at ``level``.
    generators : list of Polynomial
        Constraint polynomials cutting out the feasible set.
    level : int
        Common truncation level for all matrices.
    tol_rel : float
        Relative eigenvalue tolerance passed to :func:`psd_check`.

    Returns
    -------
    HypothesesReport
        ``passed`` is true iff the moment matrix and all localizing
        matrices are positive semidefinite within tolerance.  A failure
        here is definitive for the truncation: no nonnegative measure on
        the feasible set matches the data.  A pass certifies only the
        tested level.
    """
    moment_verdict = psd_check(moment_matrix(s, level), tol_rel)
    localizing_verdicts = [
        psd_check(localizing_matrix(s, f, level), tol_rel) for f in generators
    ]
    passed = moment_verdict.is_psd and all(v.is_psd for v in localizing_verdicts)
    return HypothesesReport(level, moment_verdict, localizing_verdicts, passed)


def require_psd(
    matrix: SymmetricMatrixWithBasis | np.ndarray,
    tol_rel: float = DEFAULT_PSD_TOL,
    label: str = "matrix",
) -> PsdVerdict:
    """Like :func:`psd_check` but raises :class:`NotPsd` on failure."""
    verdict = psd_check(matrix, tol_rel)
    if not verdict.is_psd:
        raise NotPsd(
            f"{label} is not positive semidefinite: min eigenvalue "
            f"{verdict.min_eigenvalue:g} below -{verdict.tolerance_used:g}"
        )
    return verdict
