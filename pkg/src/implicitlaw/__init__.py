"""Law of a random variable X defined implicitly by f(X) = A.

Given a strictly monotone C1 function f and the law of A, the density of X
is ``f_A(f(t)) * |f'(t)|``; this package computes that density together with
the CDF, quantiles and exact samples, and verifies them numerically.
"""

from .distributions import Custom, Exponential, Normal, SourceDistribution, Uniform, from_spec
from .errors import (
    DomainError,
    EmptyInput,
    ImplicitLawError,
    MaxDepth,
    MaxIterations,
    NoBracket,
    NonFinite,
    NotMonotone,
    ParseError,
    SpecError,
    SupportMismatch,
)
from .expr import compile_expr, differentiate, evaluate, parse, simplify, to_text
from .numerics import Bracket, RngState, Tolerances, erf, integrate_adaptive, next_uniform, solve_monotone
from .transform import ImplicitDensity, MonotoneMap, build_monotone_map
from .verify import (
    VerificationReport,
    cdf_pdf_consistency,
    check_normalization,
    ks_distance,
    run_full_verification,
)

__version__ = "0.1.0"
