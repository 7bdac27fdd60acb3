"""Approximate Gaussian quadrature from moment sequences.

Quadrature rules are built from a finite moment sequence by finding a
monic polynomial nearly orthogonal to all monomials up to a given order;
its roots are the nodes.  The residual of that solve yields an a
posteriori certificate bounding the integration error for every
polynomial degree the rule covers.  The same machinery applied to
uniform samples of a function produces short exponential-sum
approximations.
"""

from .context import (DEFAULT_BUILD_DPS, DEFAULT_EVAL_DPS, PRECISION_ENV_VAR,
                      default_build_dps, working_dps)
from .errors import (AgquadError, ConstructionError, ContractViolation,
                     ConvergenceError, SampleFormatError)
from .estimators import ExpSumEstimator, QuadratureEstimator
from .expsum import (ExpSumApprox, build_expsum, dirichlet_kernel,
                     dirichlet_kernel_demo, eval_expsum, expsum_from_dict,
                     expsum_to_dict, load_expsum, residual_report, save_expsum)
from .measures import (KIND_POWER, KIND_TRIG, MomentSequence, SampleGrid,
                       chebyshev1, custom, lebesgue_01, lebesgue_pm1,
                       load_samples_csv, logweight_01, moments_from_samples,
                       save_samples_csv, trig_lebesgue_pm1)
from .quadrature import (ErrorCertificate, QuadratureRule, build_rule,
                         error_bound, error_bound_monomial,
                         find_quasiorthogonal, integrate, integrate_monomial,
                         load_rule, rule_from_dict, rule_to_dict, save_rule)
from .reference import (adaptive_integrate, gauss_chebyshev1, gauss_legendre,
                        legendre_monic, oracle_integral)

__version__ = "0.1.0"

__all__ = [
    "AgquadError", "ConstructionError", "ContractViolation",
    "ConvergenceError", "SampleFormatError",
    "DEFAULT_BUILD_DPS", "DEFAULT_EVAL_DPS", "PRECISION_ENV_VAR",
    "default_build_dps", "working_dps",
    "KIND_POWER", "KIND_TRIG", "MomentSequence", "SampleGrid",
    "chebyshev1", "custom", "lebesgue_01", "lebesgue_pm1", "logweight_01",
    "trig_lebesgue_pm1", "moments_from_samples",
    "load_samples_csv", "save_samples_csv",
    "ErrorCertificate", "QuadratureRule", "build_rule",
    "find_quasiorthogonal", "integrate", "integrate_monomial",
    "error_bound", "error_bound_monomial",
    "rule_to_dict", "rule_from_dict", "save_rule", "load_rule",
    "ExpSumApprox", "build_expsum", "eval_expsum", "residual_report",
    "dirichlet_kernel", "dirichlet_kernel_demo",
    "expsum_to_dict", "expsum_from_dict", "save_expsum", "load_expsum",
    "adaptive_integrate", "gauss_chebyshev1", "gauss_legendre",
    "legendre_monic", "oracle_integral",
    "QuadratureEstimator", "ExpSumEstimator",
]
