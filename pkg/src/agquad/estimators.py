"""Scikit-learn style estimator wrappers around the functional core.

These exist for pipeline-friendly parameter handling (get_params /
set_params, clone) and a familiar fit/predict surface; all numerics live
in `agquad.quadrature` and `agquad.expsum`.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

import mpmath as mp

from . import expsum, quadrature
from .context import DEFAULT_BUILD_DPS, working_dps
from .measures import KIND_POWER, MomentSequence, SampleGrid


class QuadratureEstimator(BaseEstimator):
    """Builds a quadrature rule from a moment sequence.

    Parameters mirror `quadrature.build_rule`; exactly one of eps /
    num_nodes must be set.  fit accepts a MomentSequence or a plain
    sequence of moment values (interpreted with `kind`).
    """

    def __init__(self, order=50, eps=None, num_nodes=None, prune_tol=0,
                 kind=KIND_POWER, dps=DEFAULT_BUILD_DPS):
        self.order = order
        self.eps = eps
        self.num_nodes = num_nodes
        self.prune_tol = prune_tol
        self.kind = kind
        self.dps = dps

    def fit(self, X, y=None):
        if isinstance(X, MomentSequence):
            moments = X
        else:
            with working_dps(self.dps):
                moments = MomentSequence(
                    self.kind, tuple(mp.mpmathify(v) for v in X), "fit")
        self.rule_, self.certificate_ = quadrature.build_rule(
            moments, N=self.order, eps=self.eps, num_nodes=self.num_nodes,
            prune_tol=self.prune_tol, dps=self.dps)
        return self

    def integrate(self, f):
        """Quadrature value sum_n w_n f(x_n) of a callable."""
        check_is_fitted(self, "rule_")
        return quadrature.integrate(self.rule_, f)

    def error_bound(self, n):
        """Certified integration-error bound for the degree-n monomial."""
        check_is_fitted(self, "rule_")
        return quadrature.error_bound_monomial(self.certificate_, n)

    def predict(self, X):
        """Quadrature values for an iterable of callables, as floats."""
        check_is_fitted(self, "rule_")
        return np.array([complex(self.integrate(f)) for f in X])


class ExpSumEstimator(BaseEstimator):
    """Fits a short exponential sum to a uniformly sampled function.

    fit accepts a SampleGrid or an (a, b, samples) triple; predict
    evaluates the approximant at an array of points.
    """

    def __init__(self, eps=None, num_terms=None, d_max=None,
                 dps=DEFAULT_BUILD_DPS):
        self.eps = eps
        self.num_terms = num_terms
        self.d_max = d_max
        self.dps = dps

    def fit(self, X, y=None):
        if isinstance(X, SampleGrid):
            grid = X
        else:
            a, b, samples = X
            with working_dps(self.dps):
                grid = SampleGrid(
                    a=mp.mpf(a), b=mp.mpf(b), M=len(samples) - 1,
                    samples=tuple(mp.mpmathify(v) for v in samples))
        self.approx_ = expsum.build_expsum(
            grid, eps=self.eps, num_terms=self.num_terms,
            d_max=self.d_max, dps=self.dps)
        return self

    def predict(self, X):
        check_is_fitted(self, "approx_")
        return np.array([complex(expsum.eval_expsum(self.approx_, mp.mpf(str(x))))
                         for x in np.asarray(X).ravel()])

    def score(self, X, y):
        """Negative max absolute error against reference values y."""
        pred = self.predict(X)
        return -float(np.max(np.abs(pred - np.asarray(y, dtype=complex))))
