"""Classical quadratures and brute-force oracles for benchmarks and tests.

Nothing in the core construction path depends on this module; it exists to
provide independent ground truth: Gauss-Legendre and Gauss-Chebyshev rules,
closed-form integrals of every built-in measure, an adaptive integrator,
and sample generators for the demo functions.
"""

import mpmath as mp

from . import measures, quadrature, roots
from .context import DEFAULT_BUILD_DPS, working_dps
from .errors import ContractViolation
from .measures import KIND_POWER, SampleGrid
from .quadrature import QuadratureRule

KIND_GAUSS_LEGENDRE = "gauss_legendre"
KIND_GAUSS_CHEBYSHEV1 = "gauss_chebyshev1"


def legendre_monic(n, dps=DEFAULT_BUILD_DPS):
    """Ascending coefficients of the monic degree-n Legendre polynomial.

    Three-term recurrence for the Lebesgue measure on [-1, 1]:
    p_{k+1}(x) = x p_k(x) - b_k p_{k-1}(x) with b_k = k^2 / (4k^2 - 1).
    """
    if n < 0:
        raise ContractViolation("degree must be >= 0")
    with working_dps(dps):
        prev = [mp.mpf(1)]                     # p_0
        if n == 0:
            return tuple(prev)
        cur = [mp.mpf(0), mp.mpf(1)]           # p_1 = x
        for k in range(1, n):
            b_k = mp.mpf(k) ** 2 / (4 * mp.mpf(k) ** 2 - 1)
            nxt = [mp.mpf(0)] + cur
            for i, c in enumerate(prev):
                nxt[i] -= b_k * c
            prev, cur = cur, nxt
        return tuple(cur)


def _map_to_interval(nodes, weights, interval):
    a, b = (mp.mpf(interval[0]), mp.mpf(interval[1]))
    if not b > a:
        raise ContractViolation("need interval with b > a")
    half = (b - a) / 2
    mid = (b + a) / 2
    return ([mid + half * x for x in nodes], [half * w for w in weights])


def gauss_legendre(n, interval=(-1, 1), dps=DEFAULT_BUILD_DPS):
    """n-node Gauss-Legendre rule, exact for polynomial degree <= 2n-1."""
    if n < 1:
        raise ContractViolation("need n >= 1")
    with working_dps(dps):
        coeffs = legendre_monic(n, dps=dps)
        nodes = sorted((mp.re(z) for z in roots.roots_monic(coeffs)),
                       key=mp.mpf)
        moments = measures.lebesgue_pm1(n - 1, dps=dps)
        weights = [mp.re(w)
                   for w in quadrature.compute_weights(nodes, moments)]
        nodes, weights = _map_to_interval(nodes, weights, interval)
        return QuadratureRule(
            nodes=tuple(+x for x in nodes),
            weights=tuple(+w for w in weights),
            order=n, degree=n - 1, epsilon=mp.mpf(0), residual_2=mp.mpf(0),
            kind=KIND_GAUSS_LEGENDRE,
            descriptor=f"gauss_legendre(n={n}, interval={interval})",
            precision_dps=dps)


def gauss_chebyshev1(n, dps=DEFAULT_BUILD_DPS):
    """n-node Gauss-Chebyshev rule (weight 1/sqrt(1-x^2)), closed forms."""
    if n < 1:
        raise ContractViolation("need n >= 1")
    with working_dps(dps):
        nodes = [mp.cos((2 * k + 1) * mp.pi / (2 * n)) for k in range(n)]
        nodes.sort(key=mp.mpf)
        weights = [mp.pi / n] * n
        return QuadratureRule(
            nodes=tuple(+x for x in nodes),
            weights=tuple(+w for w in weights),
            order=n, degree=n - 1, epsilon=mp.mpf(0), residual_2=mp.mpf(0),
            kind=KIND_GAUSS_CHEBYSHEV1,
            descriptor=f"gauss_chebyshev1(n={n})",
            precision_dps=dps)


_MOMENT_PROVIDERS = {
    "lebesgue_pm1": measures.lebesgue_pm1,
    "lebesgue_01": measures.lebesgue_01,
    "chebyshev1": measures.chebyshev1,
    "logweight_01": measures.logweight_01,
    "trig_lebesgue_pm1": measures.trig_lebesgue_pm1,
}


def oracle_integral(descriptor, n, dps=DEFAULT_BUILD_DPS):
    """Closed-form moment n of a built-in measure, at full precision."""
    provider = _MOMENT_PROVIDERS.get(descriptor)
    if provider is None:
        raise ContractViolation(f"no oracle for measure {descriptor!r}")
    return provider(n, dps=dps)[n]


def moment_provider(descriptor):
    """The closed-form moment generator for a built-in measure name."""
    provider = _MOMENT_PROVIDERS.get(descriptor)
    if provider is None:
        raise ContractViolation(f"unknown measure {descriptor!r}; "
                                f"choose from {sorted(_MOMENT_PROVIDERS)}")
    return provider


def adaptive_integrate(f, a, b, tol, dps=DEFAULT_BUILD_DPS, _depth=0):
    """Integral of f on [a, b] to absolute tolerance tol, by bisection.

    Each panel is integrated by a high-degree Gauss-Legendre pair with an
    internal error estimate; panels whose estimate exceeds the local
    tolerance budget are split recursively.
    """
    if _depth > 50:
        raise ContractViolation("adaptive integration failed to converge")
    with working_dps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        # evaluate the panel with guard digits so the returned value is
        # comfortably more accurate than the error estimate it is judged by
        with working_dps(dps + 15):
            val, err = mp.quad(f, [a, b], error=True)
        val = +val
        if err <= tol:
            return val
        mid = (a + b) / 2
        return (adaptive_integrate(f, a, mid, tol / 2, dps, _depth + 1)
                + adaptive_integrate(f, mid, b, tol / 2, dps, _depth + 1))


def bessel_grid(nu, scale, a=0, b=1, m_count=800, dps=DEFAULT_BUILD_DPS):
    """Uniform samples of J_nu(scale * x) on [a, b] for the demo builds."""
    with working_dps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        samples = tuple(
            mp.besselj(nu, scale * (a + n * (b - a) / m_count))
            for n in range(m_count + 1))
        return SampleGrid(a=a, b=b, M=m_count, samples=samples)


def hankel_annihilation_residual(coeffs, dps=DEFAULT_BUILD_DPS):
    """max |H p| for the Lebesgue Hankel rows against an orthogonal poly.

    A degree-(k+1) monic polynomial orthogonal to x^0..x^k makes the
    (k+1)x(k+2) moment Hankel system H p = 0 hold exactly; this measures
    how far a coefficient vector is from that.
    """
    k = len(coeffs) - 2
    with working_dps(dps):
        moments = measures.lebesgue_pm1(2 * k + 2, dps=dps)
        rows = []
        for i in range(k + 1):
            rows.append(mp.fsum(moments[i + j] * c
                                for j, c in enumerate(coeffs)))
        return max(abs(r) for r in rows)
