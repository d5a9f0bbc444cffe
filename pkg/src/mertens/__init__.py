"""Multiple prime-reciprocal sums: exact evaluation, asymptotic polynomials,
extended-precision special values, and residual analysis.
"""

from .backend import HAVE_COMPILED, get_backend
from .errors import (
    AccuracyError,
    CacheCorruptionError,
    CacheFormatError,
    ConvergenceError,
    DomainError,
    MertensError,
    OutOfRangeError,
    ResourceLimitError,
    VerificationError,
)
from .polynomials import (
    CoeffSequence,
    GammaPolyTable,
    ShiftedPoly,
    coeff_from_recurrence,
    coeff_seq,
    eval_poly,
    gamma_poly_table,
    inv_gamma_taylor,
    prediction_poly,
    prediction_poly_recursive,
    shift_poly,
    to_plain_basis,
)
from .primes import (
    PrimeTable,
    build_sieve,
    load_cache,
    logp_over_p_sum,
    power_log_sum,
    reciprocal_sum,
    save_cache,
)
from .residuals import (
    ConvergenceReport,
    GridSpec,
    ResidualRow,
    convergence_report,
    implied_constant,
    residual_table,
)
from .specfun import (
    Constants,
    euler_gamma,
    log_power_integral_closed,
    log_power_integral_quad,
    mertens_constant,
    mertens_constant_error_bound,
    polylog_half,
    zeta_int,
)
from .sums import (
    DecompositionParts,
    Method,
    Predictor,
    SumSpec,
    SumValue,
    compute_sum,
    decomposition_check,
    log_ratio_power_sum,
    loglog,
    loglog_power_main,
    loglog_power_sum,
    sum_enumerate,
    sum_hyperbola,
    sum_multiset,
)
from .xfloat import XFloat

__version__ = "0.1.0"
