"""Growth diagnostics for truncated moment data.

Determinacy-style sufficient conditions ask whether series such as

* ``sum_n  s[n e_j]^(-1/(2n))``              (Stieltjes-type condition) or
* ``sum_n  s[2n e_j]^(-1/(2n))``             (Carleman-type condition)

diverge.  A truncation can never prove divergence, so this module computes
the finite term lists and classifies their decay:

* ``divergence-consistent`` — the tail decays no faster than ``c / n``
  (power-law fit with exponent <= ``SLOPE_LIMIT`` and small residual), so the
  full series plausibly diverges;
* ``convergence-consistent`` — the tail ratios show geometric decay
  (median ratio <= ``RATIO_LIMIT``), so the full series plausibly converges;
* ``inconclusive`` — neither pattern fits.

The classification is a heuristic about the visible histogram of terms, not
a theorem about the underlying measure; the thresholds below are part of
this package's contract.  All term arithmetic runs on natural logarithms of
the moments, so entries far beyond IEEE double range stay usable as long as
their log values are supplied.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegreeOverflow,
    HypothesisFailure,
    NotNormalized,
    NotPositive,
    TrivialFunctional,
)
from .matrices import DEFAULT_PSD_TOL, psd_check
from .polynomials import MomentSequence

DIVERGENCE_CONSISTENT = "divergence-consistent"
CONVERGENCE_CONSISTENT = "convergence-consistent"
INCONCLUSIVE = "inconclusive"

#: Tail ratios with median at or below this value count as geometric decay.
RATIO_LIMIT = 0.95
#: ... provided no tail ratio exceeds this value.
RATIO_CEILING = 0.99
#: Largest power-law decay exponent still consistent with divergence.
SLOPE_LIMIT = 1.05
#: Largest RMS residual (in log-log coordinates) for a trusted power-law fit.
RESIDUAL_LIMIT = 0.1
#: Relative slack for the exact inequalities in subsequence bound checks.
INEQUALITY_SLACK = 1e-12


@dataclass
class DiagnosticReport:
    """Finite series diagnostic: terms, partial sums, and a decay verdict."""

    terms: list[float]
    partial_sums: list[float]
    classification: str
    fit_details: dict = field(default_factory=dict)
    degenerate: bool = False


@dataclass
class SubsequenceBoundsReport:
    """Finite checks of the root-growth inequalities behind stride-``m``
    subsampling of a Stieltjes-type series.

    For data whose plain and index-shifted moment matrices are positive
    semidefinite, the roots ``s_k^(1/k)`` are nondecreasing; consequently
    each term ``a(n) = s_n^(-1/(2n))`` is bounded by the term at the next
    multiple of the stride below it, and the full series is bounded by
    ``stride`` times its subsampled series.  ``passed`` requires all three
    finite inequalities to hold within :data:`INEQUALITY_SLACK`.
    """

    stride: int
    count: int
    hankel_level: int
    monotone_ok: bool
    monotone_margin: float
    termwise_ok: bool
    termwise_margin: float
    sum_ok: bool
    sum_lhs: float
    sum_rhs: float

    @property
    def passed(self) -> bool:
        return self.monotone_ok and self.termwise_ok and self.sum_ok


def normalize(s: MomentSequence) -> MomentSequence:
    """Rescale so the mass ``s_0`` equals 1.

    Raises
    ------
    NotPositive
        If ``s_0 < 0``.
    TrivialFunctional
        If ``s_0 = 0``: a functional that is nonnegative on squares and has
        zero mass vanishes identically, so there is nothing to normalize.
    """
    mass = s.mass
    if mass < 0:
        raise NotPositive(f"mass s_0 = {mass} is negative")
    if mass == 0:
        raise TrivialFunctional(
            "mass s_0 = 0: a positive functional with zero mass is identically "
            "zero (zero measure)"
        )
    values = {a: v / mass for a, v in s.values.items()}
    log_mass = math.log(float(mass))
    logs = {a: lv - log_mass for a, lv in s.log_values.items()}
    return MomentSequence(s.dim, s.max_degree, values, logs)


def _require_normalized(s: MomentSequence) -> None:
    if abs(float(s.mass) - 1.0) > 1e-9:
        raise NotNormalized(
            f"mass s_0 = {s.mass}; call normalize() before running diagnostics"
        )


def _term_from_log(log_moment: float, root_order: int) -> float:
    """``exp(-log_moment / (2 * root_order))`` with overflow-safe endpoints."""
    if log_moment == -math.inf:
        return math.inf
    try:
        return math.exp(-log_moment / (2.0 * root_order))
    except OverflowError:
        return math.inf


def _partial_sums(terms: list[float]) -> list[float]:
    sums: list[float] = []
    for i in range(len(terms)):
        sums.append(math.fsum(terms[: i + 1]))
    return sums


def _classify(terms: list[float]) -> tuple[str, dict]:
    half = len(terms) // 2
    tail = terms[half:]
    details: dict = {"tail_start": half + 1}
    if len(tail) < 2:
        details["rule"] = "insufficient-tail"
        return INCONCLUSIVE, details
    if any(t == 0.0 for t in tail):
        details["rule"] = "vanishing-terms"
        return CONVERGENCE_CONSISTENT, details
    ratios = [tail[i + 1] / tail[i] for i in range(len(tail) - 1)]
    median_ratio = statistics.median(ratios)
    max_ratio = max(ratios)
    details["median_ratio"] = median_ratio
    details["max_ratio"] = max_ratio
    if median_ratio <= RATIO_LIMIT and max_ratio <= RATIO_CEILING:
        details["rule"] = "geometric-ratio"
        return CONVERGENCE_CONSISTENT, details
    xs = [math.log(half + 1 + i) for i in range(len(tail))]
    ys = [math.log(t) for t in tail]
    x_mean = math.fsum(xs) / len(xs)
    y_mean = math.fsum(ys) / len(ys)
    var = math.fsum((x - x_mean) ** 2 for x in xs)
    cov = math.fsum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = cov / var if var else 0.0
    intercept = y_mean - slope * x_mean
    residual = math.sqrt(
        math.fsum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
        / len(xs)
    )
    decay_exponent = -slope
    details["decay_exponent"] = decay_exponent
    details["fit_residual"] = residual
    if decay_exponent <= SLOPE_LIMIT and residual <= RESIDUAL_LIMIT:
        details["rule"] = "power-law"
        return DIVERGENCE_CONSISTENT, details
    details["rule"] = "unclassified-decay"
    return INCONCLUSIVE, details


def _series_report(log_moments: list[float], root_orders: list[int]) -> DiagnosticReport:
    terms: list[float] = []
    degenerate = False
    for lm, order in zip(log_moments, root_orders):
        if lm == -math.inf:
            degenerate = True
        terms.append(_term_from_log(lm, order))
    sums = _partial_sums(terms)
    if degenerate:
        classification = DIVERGENCE_CONSISTENT
        details = {"rule": "degenerate-zero-moment"}
    else:
        classification, details = _classify(terms)
    return DiagnosticReport(terms, sums, classification, details, degenerate)


def stieltjes_terms(s: MomentSequence, axis: int = 0, count: int = 60) -> DiagnosticReport:
    """Terms ``s[n e_axis]^(-1/(2n))`` for ``n = 1..count`` with a decay verdict.

    Requires normalized data (``s_0 = 1``) and ``count <= max_degree``.
    A zero moment makes its term ``+inf`` and forces the classification
    ``divergence-consistent`` with the ``degenerate`` flag set.
    """
    _require_normalized(s)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count > s.max_degree:
        raise DegreeOverflow(
            f"need marginal moments up to order {count}, data stops at "
            f"{s.max_degree}"
        )
    logs = [s.log_marginal(axis, n) for n in range(1, count + 1)]
    return _series_report(logs, list(range(1, count + 1)))


def carleman_terms(s: MomentSequence, axis: int = 0, count: int = 60) -> DiagnosticReport:
    """Terms ``s[2n e_axis]^(-1/(2n))`` for ``n = 1..count`` with a decay verdict.

    Requires ``2 * count <= max_degree``.  This is the even-order variant of
    :func:`stieltjes_terms`; on data supported in ``[0, inf)`` its divergence
    is the stronger requirement.
    """
    _require_normalized(s)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if 2 * count > s.max_degree:
        raise DegreeOverflow(
            f"need marginal moments up to order {2 * count}, data stops at "
            f"{s.max_degree}"
        )
    logs = [s.log_marginal(axis, 2 * n) for n in range(1, count + 1)]
    return _series_report(logs, list(range(1, count + 1)))


def subsequence_terms(
    s: MomentSequence, axis: int = 0, stride: int = 2, count: int = 30
) -> DiagnosticReport:
    """Terms ``s[n*stride e_axis]^(-1/(2*n*stride))`` for ``n = 1..count``.

    The stride-1 case coincides with :func:`stieltjes_terms`.  Divergence of
    a strided subseries forces divergence of the full series, which is what
    makes subsampled data usable.
    """
    _require_normalized(s)
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if stride * count > s.max_degree:
        raise DegreeOverflow(
            f"need marginal moments up to order {stride * count}, data stops "
            f"at {s.max_degree}"
        )
    logs = [s.log_marginal(axis, n * stride) for n in range(1, count + 1)]
    return _series_report(logs, [n * stride for n in range(1, count + 1)])


def _finite_marginal_reach(s: MomentSequence, axis: int, upto: int) -> int:
    """Largest order <= upto with all marginals 0..order finite as floats."""
    reach = 0
    for n in range(1, upto + 1):
        v = s.marginal(axis, n)
        try:
            fv = float(v)
        except OverflowError:
            break
        if not math.isfinite(fv):
            break
        reach = n
    return reach


def _marginal_hankel(s: MomentSequence, axis: int, level: int, shift: int):
    m = np.empty((level + 1, level + 1), dtype=float)
    for i in range(level + 1):
        for j in range(i, level + 1):
            v = float(s.marginal(axis, i + j + shift))
            m[i, j] = v
            m[j, i] = v
    return m


def check_subsequence_bounds(
    s: MomentSequence,
    axis: int = 0,
    stride: int = 2,
    count: int = 60,
    tol_rel: float = DEFAULT_PSD_TOL,
) -> SubsequenceBoundsReport:
    """Verify the finite root-growth inequalities behind stride subsampling.

    Checks, on the marginal moments ``m_k = s[k e_axis]`` of normalized data:

    1. monotone roots: ``m_k^(1/k) <= m_{k+1}^(1/(k+1))``;
    2. termwise bound: ``a(q*stride + r) <= a(q*stride)`` for
       ``1 <= r < stride``, where ``a(k) = m_k^(-1/(2k))``;
    3. sum bound: ``sum_{n=stride}^{count} a(n) <=
       stride * sum_{q=1}^{floor(count/stride)+1} a(q*stride)``.

    All three hold exactly whenever the plain and index-shifted moment
    matrices of the marginal are positive semidefinite, so that is checked
    first (at the largest level whose entries are finite doubles) and a
    failure raises :class:`HypothesisFailure`.  The inequalities themselves
    are evaluated in the log domain with relative slack
    :data:`INEQUALITY_SLACK`; margins are reported so callers can see how
    much room was left.

    Requires marginals up to ``stride * (floor(count/stride) + 1)``.
    """
    _require_normalized(s)
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if count < stride:
        raise ValueError(f"count must be >= stride, got {count} < {stride}")
    high = stride * (count // stride + 1)
    if high > s.max_degree:
        raise DegreeOverflow(
            f"need marginal moments up to order {high}, data stops at "
            f"{s.max_degree}"
        )

    reach = _finite_marginal_reach(s, axis, high)
    plain_level = reach // 2
    shift_level = (reach - 1) // 2
    plain = psd_check(_marginal_hankel(s, axis, plain_level, 0), tol_rel)
    if not plain.is_psd:
        raise HypothesisFailure(
            f"marginal moment matrix at level {plain_level} is not positive "
            f"semidefinite (min eigenvalue {plain.min_eigenvalue:g})"
        )
    if shift_level >= 0:
        shifted = psd_check(_marginal_hankel(s, axis, shift_level, 1), tol_rel)
        if not shifted.is_psd:
            raise HypothesisFailure(
                f"index-shifted marginal moment matrix at level {shift_level} "
                f"is not positive semidefinite (min eigenvalue "
                f"{shifted.min_eigenvalue:g})"
            )

    # g_k = log(m_k) / k; roots are exp(g_k) and terms are exp(-g_k / 2).
    g = {k: s.log_marginal(axis, k) / k for k in range(1, high + 1)}

    def diff(a: float, b: float) -> float:
        # a - b with the convention that equal infinities cancel to zero.
        return 0.0 if a == b else a - b

    monotone_margin = min(diff(g[k + 1], g[k]) for k in range(1, high))
    monotone_ok = monotone_margin >= -INEQUALITY_SLACK

    termwise_margin = 0.0
    for q in range(1, count // stride + 1):
        base = q * stride
        for r in range(1, stride):
            idx = base + r
            if idx > count:
                break
            termwise_margin = max(termwise_margin, diff(g[base], g[idx]) / 2.0)
    termwise_ok = termwise_margin <= INEQUALITY_SLACK

    def term(k: int) -> float:
        return _term_from_log(g[k] * k, k)

    sum_lhs = math.fsum(term(n) for n in range(stride, count + 1))
    sum_rhs = stride * math.fsum(
        term(q * stride) for q in range(1, count // stride + 2)
    )
    if math.isinf(sum_lhs) and math.isinf(sum_rhs):
        sum_ok = True
    else:
        sum_ok = sum_lhs <= sum_rhs * (1.0 + INEQUALITY_SLACK)

    return SubsequenceBoundsReport(
        stride=stride,
        count=count,
        hankel_level=plain_level,
        monotone_ok=monotone_ok,
        monotone_margin=monotone_margin,
        termwise_ok=termwise_ok,
        termwise_margin=termwise_margin,
        sum_ok=sum_ok,
        sum_lhs=sum_lhs,
        sum_rhs=sum_rhs,
    )
