"""Numerical certification that trace functions t -> tr e^{tA+B} are
exponentially convex when A is rank one: canonical-form reduction,
Gram-kernel PSD checks, Lie product convergence, and atomic-measure
recovery of the bilateral Laplace representation."""

from .convexity import (
    DEFAULT_PSD_TOL,
    DichotomyReport,
    ECReport,
    EntrywiseECResult,
    GramMatrix,
    MidpointReport,
    ScalarFunction,
    TGrid,
    check_exponential_convexity,
    default_grid,
    dichotomy_check,
    ec_product,
    ec_scale,
    ec_sum,
    entrywise_ec_check,
    exp_function,
    gram,
    midpoint_inequality_check,
    psd_check,
    zero_function,
)
from .errors import (
    ConvergenceFailure,
    DichotomyViolated,
    DimensionMismatch,
    EvaluationFailure,
    ExpConvexError,
    HypothesisViolated,
    IllConditioned,
    MatrixFileError,
    NegativeScale,
    NonFinite,
    NotCommuting,
    NotHermitian,
    NotSquare,
    NotUnitary,
    Overflow,
    RankNotOne,
)
from .hermitian import (
    EigenDecomposition,
    EntrywiseReport,
    HermitianMatrix,
    LieApproximation,
    PerronShift,
    UnitaryMatrix,
    conjugate,
    eigh,
    exp_entrywise_nonneg_check,
    hermitian_from_diag,
    identity_matrix,
    lie_product_approx,
    matrix_exp_hermitian,
    max_abs,
    perron_shift,
    validate_hermitian,
    validate_unitary,
)
from .reduction import (
    RankOneCertificate,
    ReductionResult,
    ReductionTrace,
    assert_rank_one,
    corner_diagonalizer,
    phase_matrix,
    reduce,
    reduction_residuals,
)
from .transform import (
    AtomicMeasure,
    MeasureFit,
    SupportEstimate,
    TracePair,
    commuting_measure,
    fit_measure,
    growth_exponents,
    laplace_function,
    laplace_transform,
    lie_trace_function,
    sample_trace_f,
    trace_f,
    trace_function,
)
from .verify import (
    CaseRecord,
    VerificationReport,
    random_rank_one_pair,
    run_case,
    run_verification,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "CaseRecord",
    "ConvergenceFailure",
    "DEFAULT_PSD_TOL",
    "DichotomyReport",
    "DichotomyViolated",
    "DimensionMismatch",
    "ECReport",
    "EigenDecomposition",
    "EntrywiseECResult",
    "EntrywiseReport",
    "EvaluationFailure",
    "ExpConvexError",
    "GramMatrix",
    "HermitianMatrix",
    "HypothesisViolated",
    "IllConditioned",
    "LieApproximation",
    "MatrixFileError",
    "MeasureFit",
    "MidpointReport",
    "NegativeScale",
    "NonFinite",
    "NotCommuting",
    "NotHermitian",
    "NotSquare",
    "NotUnitary",
    "Overflow",
    "PerronShift",
    "RankNotOne",
    "RankOneCertificate",
    "ReductionResult",
    "ReductionTrace",
    "ScalarFunction",
    "SupportEstimate",
    "TGrid",
    "TracePair",
    "UnitaryMatrix",
    "VerificationReport",
    "assert_rank_one",
    "check_exponential_convexity",
    "commuting_measure",
    "conjugate",
    "corner_diagonalizer",
    "default_grid",
    "dichotomy_check",
    "ec_product",
    "ec_scale",
    "ec_sum",
    "eigh",
    "entrywise_ec_check",
    "exp_entrywise_nonneg_check",
    "exp_function",
    "fit_measure",
    "gram",
    "growth_exponents",
    "hermitian_from_diag",
    "identity_matrix",
    "laplace_function",
    "laplace_transform",
    "lie_product_approx",
    "lie_trace_function",
    "matrix_exp_hermitian",
    "max_abs",
    "midpoint_inequality_check",
    "perron_shift",
    "phase_matrix",
    "psd_check",
    "random_rank_one_pair",
    "reduce",
    "reduction_residuals",
    "run_case",
    "run_verification",
    "sample_trace_f",
    "trace_f",
    "trace_function",
    "validate_hermitian",
    "validate_unitary",
    "zero_function",
]
