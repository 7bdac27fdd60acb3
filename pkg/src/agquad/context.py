"""Working-precision management.

All numerics in this package run on mpmath under an explicit decimal-digit
count.  Construction paths (quadrature rules, exponential sums) default to
DEFAULT_BUILD_DPS; evaluation-only paths default to the precision recorded
on the object being evaluated, falling back to DEFAULT_EVAL_DPS.
"""

import os

import mpmath as mp

DEFAULT_BUILD_DPS = 100
DEFAULT_EVAL_DPS = 30

PRECISION_ENV_VAR = "AGQ_PRECISION"


def working_dps(dps):
    """Context manager setting the mpmath decimal precision to `dps`."""
    if dps is None:
        raise ValueError("dps must be a positive integer, not None")
    if dps < 1:
        raise ValueError(f"dps must be positive, got {dps}")
    return mp.workdps(int(dps))


def default_build_dps():
    """Build-path precision, honoring the AGQ_PRECISION environment variable."""
    env = os.environ.get(PRECISION_ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_BUILD_DPS


def tolerance(dps, guard):
    """10**-(dps - guard) as an mpf at the current precision."""
    return mp.mpf(10) ** (-(dps - guard))
