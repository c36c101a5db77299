"""Truncated multidimensional moment problems on the positive orthant and on
semi-algebraic sets: positivity and growth diagnostics, atomic measure
recovery, and reduction through constraint substitution."""

from .conditions import (
    CONVERGENCE_CONSISTENT,
    DIVERGENCE_CONSISTENT,
    INCONCLUSIVE,
    DiagnosticReport,
    SubsequenceBoundsReport,
    carleman_terms,
    check_subsequence_bounds,
    normalize,
    stieltjes_terms,
    subsequence_terms,
)
from .errors import (
    AmbiguousPreimageWarning,
    ClampedNodeWarning,
    CommutatorTooLarge,
    DegenerateSpectrum,
    DegreeOverflow,
    DimMismatch,
    EigenFailure,
    FileFormatError,
    HypothesisFailure,
    IllConditionedWeights,
    MembershipViolation,
    MomentError,
    NegativeMoment,
    NoPreimage,
    NotFlat,
    NotNormalized,
    NotPositive,
    NotPsd,
    RankCollapse,
    TrivialFunctional,
    ValidationFailure,
    ZeroMass,
)
from .fixtures import (
    PowerCurveFixture,
    moments_factorial,
    moments_lognormal,
    moments_of_atomic,
    power_curve_fixture,
    power_curve_inverse,
    power_curve_presentation,
)
from .matrices import (
    HypothesesReport,
    PsdVerdict,
    SymmetricMatrixWithBasis,
    check_hypotheses,
    localizing_matrix,
    moment_matrix,
    numerical_rank,
    psd_check,
)
from .multivariate import (
    FlatRankResult,
    extract_atoms,
    extract_atoms_auto,
    flat_rank,
    multiplication_operators,
)
from .polynomials import (
    AtomicMeasure,
    MomentSequence,
    MultiIndex,
    Polynomial,
    grlex_key,
    monomials_of_degree,
    monomials_up_to,
    total_degree,
)
from .reduction import (
    GenerationResult,
    InverseMap,
    SemiAlgebraicPresentation,
    check_generates,
    pull_back_atoms,
    pushforward_moments,
)
from .univariate import JacobiMatrix, Solve1DResult, solve_1d

__version__ = "0.1.0"

__all__ = [
    "AmbiguousPreimageWarning",
    "AtomicMeasure",
    "CONVERGENCE_CONSISTENT",
    "ClampedNodeWarning",
    "CommutatorTooLarge",
    "DIVERGENCE_CONSISTENT",
    "DegenerateSpectrum",
    "DegreeOverflow",
    "DiagnosticReport",
    "DimMismatch",
    "EigenFailure",
    "FileFormatError",
    "FlatRankResult",
    "GenerationResult",
    "HypothesesReport",
    "HypothesisFailure",
    "INCONCLUSIVE",
    "IllConditionedWeights",
    "InverseMap",
    "JacobiMatrix",
    "MembershipViolation",
    "MomentError",
    "MomentSequence",
    "MultiIndex",
    "NegativeMoment",
    "NoPreimage",
    "NotFlat",
    "NotNormalized",
    "NotPositive",
    "NotPsd",
    "Polynomial",
    "PowerCurveFixture",
    "PsdVerdict",
    "RankCollapse",
    "SemiAlgebraicPresentation",
    "Solve1DResult",
    "SubsequenceBoundsReport",
    "SymmetricMatrixWithBasis",
    "TrivialFunctional",
    "ValidationFailure",
    "ZeroMass",
    "carleman_terms",
    "check_generates",
    "check_hypotheses",
    "check_subsequence_bounds",
    "extract_atoms",
    "extract_atoms_auto",
    "flat_rank",
    "grlex_key",
    "localizing_matrix",
    "moment_matrix",
    "moments_factorial",
    "moments_lognormal",
    "moments_of_atomic",
    "monomials_of_degree",
    "monomials_up_to",
    "multiplication_operators",
    "normalize",
    "numerical_rank",
    "power_curve_fixture",
    "power_curve_inverse",
    "power_curve_presentation",
    "psd_check",
    "pull_back_atoms",
    "pushforward_moments",
    "solve_1d",
    "stieltjes_terms",
    "subsequence_terms",
    "total_degree",
]
