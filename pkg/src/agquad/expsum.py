"""Short exponential-sum approximation of uniformly sampled functions.

A function sampled on a uniform grid is treated as a trigonometric moment
sequence; the quadrature machinery then yields nodes z_m and weights w_m
with sum_m w_m z_m^n close to every sample.  Writing z_m = exp(i xi_m)
turns that discrete identity into the continuous approximant

    f(x) ~ sum_m alpha_m exp(i beta_m x)

with beta_m = M xi_m / (b - a) and alpha_m = w_m exp(-i a beta_m), so the
approximant agrees with the discrete sum at every sample point x_n.
Off-grid accuracy is measured, not certified.
"""

import json
import warnings
from dataclasses import dataclass, field

import mpmath as mp

from . import quadrature
from .context import DEFAULT_BUILD_DPS, working_dps
from .errors import ConstructionError, ContractViolation
from .measures import SampleGrid, moments_from_samples

#: residual factor above which the builder suspects the grid undersamples f.
UNDERSAMPLING_FACTOR = 100


@dataclass(frozen=True)
class ExpSumApprox:
    """Exponential sum sum_m alpha_m exp(i beta_m x) on [a, b]."""

    terms: tuple          # ((alpha_m, beta_m), ...)
    a: mp.mpf
    b: mp.mpf
    M: int                # sample budget of the build grid
    order: int            # internal quadrature order N = M - d - 1
    degree: int           # d; raw term count is d+1
    epsilon: mp.mpf       # infinity-norm quasiorthogonality residual
    max_residual: mp.mpf  # max_n |f(x_n) - eval(x_n)| on the build grid
    precision_dps: int
    pruned: tuple = field(default=())

    def __post_init__(self):
        if not self.b > self.a:
            raise ContractViolation("need b > a")

    @property
    def num_terms(self):
        return len(self.terms)


def _terms_from_pairs(pairs, a, b, M):
    """Map quadrature (node, weight) pairs to (alpha, beta) exponential terms."""
    terms = []
    for z, w in pairs:
        if z == 0:
            raise ConstructionError(
                "node at z = 0 has no logarithm; the sampled function is "
                "not resolvable as an exponential sum at this degree")
        if mp.re(z) < 0 and abs(mp.im(z)) < abs(z) * mp.mpf(10) ** (-20):
            warnings.warn(
                "node on the negative real axis: principal log branch "
                "chosen arbitrarily", stacklevel=3)
        xi = mp.log(z) / 1j          # principal branch
        beta = M * xi / (b - a)
        alpha = w * mp.exp(-1j * a * beta)
        terms.append((alpha, beta))
    return tuple(terms)


def build_expsum(grid, eps=None, num_terms=None, d_start=0, d_max=None,
                 prune_tol=0, dps=DEFAULT_BUILD_DPS):
    """Build an exponential-sum approximation of a sampled function.

    Exactly one of eps (smallest term count reaching the residual) or
    num_terms (fixed term count) must drive the degree.  The internal
    quadrature order is N = M - d - 1 so that every moment index the
    solve touches stays inside the sample range.
    """
    if (eps is None) == (num_terms is None):
        raise ContractViolation("exactly one of eps / num_terms must be set")
    moments = moments_from_samples(grid)
    with working_dps(dps):
        if num_terms is not None:
            candidates = [num_terms - 1]
        else:
            cap = grid.M - 3 if d_max is None else min(d_max, grid.M - 3)
            candidates = range(d_start, cap + 1)
        history = {}
        rule = cert = None
        for d in candidates:
            if grid.M < d + 3:
                raise ContractViolation(
                    f"grid with M={grid.M} cannot support degree {d}")
            rule, cert = quadrature.build_rule(
                moments, N=grid.M - d - 1, num_nodes=d + 1,
                prune_tol=prune_tol, dps=dps)
            history[d] = rule.residual_2
            if eps is None or rule.residual_2 <= eps:
                break
        else:
            raise ConstructionError(
                f"no term count <= {len(candidates) + d_start} reaches "
                f"residual {mp.nstr(mp.mpf(eps), 5)}",
                residual_history=history)
        terms = _terms_from_pairs(
            zip(rule.nodes, rule.weights), grid.a, grid.b, grid.M)
        pruned = _terms_from_pairs(rule.pruned, grid.a, grid.b, grid.M)
        approx = ExpSumApprox(
            terms=tuple((+al, +be) for al, be in terms),
            a=+grid.a, b=+grid.b, M=grid.M,
            order=rule.order, degree=rule.degree, epsilon=rule.epsilon,
            max_residual=mp.mpf(0), precision_dps=dps, pruned=pruned)
        max_resid, _ = residual_report(approx, grid)
        approx = ExpSumApprox(
            terms=approx.terms, a=approx.a, b=approx.b, M=approx.M,
            order=approx.order, degree=approx.degree, epsilon=approx.epsilon,
            max_residual=+max_resid, precision_dps=dps, pruned=pruned)
        if eps is not None and max_resid > UNDERSAMPLING_FACTOR * mp.mpf(eps):
            warnings.warn(
                f"grid residual {mp.nstr(max_resid, 3)} far exceeds the "
                f"target {mp.nstr(mp.mpf(eps), 3)}; the grid may "
                "undersample the function", stacklevel=2)
        return approx


def eval_expsum(approx, x, dps=None):
    """sum_m alpha_m exp(i beta_m x); unvalidated outside [a, b]."""
    with working_dps(dps or approx.precision_dps):
        return mp.fsum(
            (al * mp.exp(1j * be * x) for al, be in approx.terms),
            absolute=False)


def _eval_on_uniform(approx, a, b, m_count, dps):
    """Approximant at a + n(b-a)/m_count for n = 0..m_count.

    Each term is geometric along a uniform grid, so successive points
    need one multiplication per term instead of one exponential.
    """
    with working_dps(dps):
        step = (mp.mpf(b) - mp.mpf(a)) / m_count
        vals = [al * mp.exp(1j * be * a) for al, be in approx.terms]
        ratios = [mp.exp(1j * be * step) for _, be in approx.terms]
        out = []
        for _ in range(m_count + 1):
            out.append(mp.fsum(vals, absolute=False))
            vals = [v * r for v, r in zip(vals, ratios)]
        return out


def residual_report(approx, grid, dps=None):
    """(max residual, per-sample |f(x_n) - eval(x_n)| list) over a grid."""
    dps = dps or approx.precision_dps
    with working_dps(dps):
        vals = _eval_on_uniform(approx, grid.a, grid.b, grid.M, dps)
        resid = [abs(f - v) for f, v in zip(grid.samples, vals)]
        return max(resid), resid


def dirichlet_kernel_demo(n_kernel=200, terms=80, m_samples=600,
                          dps=DEFAULT_BUILD_DPS):
    """Exponential sum for the Dirichlet kernel D_n on the half period [0, 1].

    D_n(x) = sin(pi(n+1/2)x) / sin(pi x/2) is built indirectly through its
    half-kernel G_n (a one-sided sinc comb with a digamma closed form) and
    the reflection identity D_n(x) = G_n(x) + G_n(2-x).  G_n is approximated
    by terms/2 exponentials on [0, 1] and again on [1, 2]; each interval
    keeps G_n's singular point x = 0 away from its interior, where no short
    exponential sum could track the 1/x tail from both sides.  D_n is even
    with period 2, so [0, 1] covers every kernel value.
    """
    if terms % 2:
        raise ContractViolation("terms must be even (reflection doubles them)")
    with working_dps(dps):
        near = build_expsum(_dirichlet_g_grid(n_kernel, 0, 1, m_samples, dps),
                            num_terms=terms // 2, dps=dps)
        far = build_expsum(_dirichlet_g_grid(n_kernel, 1, 2, m_samples, dps),
                           num_terms=terms // 2, dps=dps)
        # G(2 - x) = sum alpha exp(2 i beta) exp(-i beta x)
        mirrored = tuple((al * mp.exp(2j * be), -be) for al, be in far.terms)
        return ExpSumApprox(
            terms=tuple((+al, +be) for al, be in near.terms + mirrored),
            a=mp.mpf(0), b=mp.mpf(1), M=m_samples,
            order=near.order, degree=near.degree,
            epsilon=max(near.epsilon, far.epsilon),
            max_residual=max(near.max_residual, far.max_residual),
            precision_dps=dps)


def dirichlet_halfkernel(n_kernel, x):
    """G_n(x) = sum_{k>=0} sinc-comb value, via its digamma closed form."""
    a = mp.pi * (n_kernel + mp.mpf(1) / 2)
    if x == 0:
        return 2 * a / mp.pi
    y = (x + 2) / 4
    t = (mp.digamma(y + mp.mpf(1) / 2) - mp.digamma(y)) / 4
    return (2 * mp.sin(a * x) / mp.pi) * (1 / x - t)


def dirichlet_kernel(n_kernel, x):
    """D_n(x) = sin(pi(n+1/2)x)/sin(pi x/2); removable singularities filled."""
    x = mp.mpf(x)
    if x == 2 * mp.nint(x / 2):
        return mp.mpf(2 * n_kernel + 1)
    return mp.sin(mp.pi * (n_kernel + mp.mpf(1) / 2) * x) / mp.sin(mp.pi * x / 2)


def _dirichlet_g_grid(n_kernel, a, b, m_samples, dps):
    with working_dps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        samples = tuple(
            dirichlet_halfkernel(n_kernel, a + n * (b - a) / m_samples)
            for n in range(m_samples + 1))
        return SampleGrid(a=a, b=b, M=m_samples, samples=samples)


# ---------------------------------------------------------------------------
# JSON persistence, mirroring the quadrature-rule format
# ---------------------------------------------------------------------------

def expsum_to_dict(approx):
    dps = approx.precision_dps
    with working_dps(dps):
        def num(x):
            return mp.nstr(mp.mpf(x), dps + 8)

        def pair(z):
            return [num(mp.re(z)), num(mp.im(z))]

        return {
            "format": "agquad-expsum-v1",
            "a": num(approx.a),
            "b": num(approx.b),
            "M": approx.M,
            "N": approx.order,
            "d": approx.degree,
            "epsilon": num(approx.epsilon),
            "max_residual": num(approx.max_residual),
            "precision_digits": dps,
            "alpha": [pair(al) for al, _ in approx.terms],
            "beta": [pair(be) for _, be in approx.terms],
        }


def expsum_from_dict(doc):
    if doc.get("format") != "agquad-expsum-v1":
        raise ContractViolation(f"unknown format {doc.get('format')!r}")
    dps = int(doc["precision_digits"])
    with working_dps(dps):
        def cplx(p):
            return mp.mpc(mp.mpf(p[0]), mp.mpf(p[1]))

        terms = tuple(zip((cplx(p) for p in doc["alpha"]),
                          (cplx(p) for p in doc["beta"])))
        return ExpSumApprox(
            terms=terms, a=mp.mpf(doc["a"]), b=mp.mpf(doc["b"]),
            M=int(doc["M"]), order=int(doc["N"]), degree=int(doc["d"]),
            epsilon=mp.mpf(doc["epsilon"]),
            max_residual=mp.mpf(doc["max_residual"]), precision_dps=dps)


def save_expsum(path, approx):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(expsum_to_dict(approx), fh, indent=1)


def load_expsum(path):
    with open(path, encoding="utf-8") as fh:
        return expsum_from_dict(json.load(fh))
