"""Quadrature rules from moment sequences via quasiorthogonal polynomials.

Pipeline: Hankel least-squares search for a monic polynomial whose pairings
with the first N+1 monomials against the measure are all small, roots of
that polynomial as nodes, Lagrange-coefficient contractions with the moments
as weights, and a banded triangular Toeplitz solve for the a posteriori
error certificate.
"""

import json
from dataclasses import dataclass, field

import mpmath as mp

from . import linalg, roots
from .context import DEFAULT_BUILD_DPS, working_dps
from .errors import ConstructionError, ContractViolation
from .linalg import GrowingQR, RankDeficiencyDetected
from .measures import KIND_POWER, KIND_TRIG, MomentSequence


@dataclass(frozen=True)
class HankelSystem:
    """H[i][j] = moments[i+j] ((N+1)x(d+1)) and shifted tail h[i] = moments[d+1+i]."""

    H: mp.matrix
    h: tuple
    N: int
    d: int


@dataclass(frozen=True)
class QuasiPoly:
    """Monic polynomial of degree d+1 quasiorthogonal to x^0..x^N.

    coeffs are ascending and include the leading 1; residual_2/residual_inf
    are the norms of the Hankel residual H pbar + h.
    """

    coeffs: tuple
    order: int
    residual_2: mp.mpf
    residual_inf: mp.mpf

    def __post_init__(self):
        if self.coeffs[-1] != 1:
            raise ContractViolation("quasiorthogonal polynomial must be monic")
        if self.residual_inf > self.residual_2 * (1 + mp.mpf(10) ** (-10)):
            raise ContractViolation("residual_inf cannot exceed residual_2")

    @property
    def degree(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple
    order: int
    degree: int          # d; node count is degree+1 before pruning
    epsilon: mp.mpf      # infinity-norm quasiorthogonality residual
    residual_2: mp.mpf
    kind: str
    descriptor: str
    precision_dps: int
    pruned: tuple = field(default=())

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ContractViolation("node/weight count mismatch")


@dataclass(frozen=True)
class ErrorCertificate:
    """Data for the a posteriori bound ||Gamma2^-1 qbar||_1 * epsilon."""

    poly_coeffs: tuple   # ascending, monic, degree d+1
    epsilon: mp.mpf
    order: int
    degree: int

    def band(self):
        """First-row band of Gamma2: entry (j, k) is p_{d+1+j-k} for j<=k<=j+d+1."""
        return [mp.mpf(1)] + list(reversed(self.poly_coeffs[:-1]))


def build_hankel(moments, N, d):
    """The (N+1)x(d+1) Hankel matrix and length-(N+1) shift vector."""
    need = N + d + 2
    if len(moments) < need:
        raise ContractViolation(
            f"need N+d+2 = {need} moments, have {len(moments)}")
    if N < 0 or d < 0:
        raise ContractViolation("N and d must be nonnegative")
    H = mp.matrix(N + 1, d + 1)
    for i in range(N + 1):
        for j in range(d + 1):
            H[i, j] = moments[i + j]
    h = tuple(moments[d + 1 + i] for i in range(N + 1))
    return HankelSystem(H=H, h=h, N=N, d=d)


def numerical_rank(H, delta):
    """Count of singular values above delta * sigma_1."""
    if not 0 < delta < 1:
        raise ContractViolation("delta must lie in (0, 1)")
    svals = linalg.singular_values(H)
    s1 = svals[0]
    return sum(1 for s in svals if s > delta * s1)


def _hankel_column(moments, shift, rows):
    return [moments[shift + i] for i in range(rows)]


def _hankel_residual(moments, N, pbar):
    """Residual vector of the Hankel system: r_j = sum_k p_k mu_{k+j} + mu_{d+1+j}."""
    d = len(pbar) - 1
    out = []
    for j in range(N + 1):
        out.append(mp.fsum([pbar[k] * moments[k + j] for k in range(d + 1)]
                           + [moments[d + 1 + j]]))
    return out


def _vec_norms(r):
    two = mp.sqrt(mp.fsum(abs(x) ** 2 for x in r))
    inf = max(abs(x) for x in r)
    return two, inf


def _check_measure_nonzero(moments):
    if all(v == 0 for v in moments.values):
        raise ContractViolation("zero measure: every moment vanishes")


def _solve_degree(qr, moments, N, d):
    """Least-squares polynomial at fixed degree d+1, via the shared QR factor."""
    while qr.ncols < d + 1:
        qr.add_column(_hankel_column(moments, qr.ncols, N + 1))
    rhs = [-mp.mpmathify(v) for v in _hankel_column(moments, d + 1, N + 1)]
    try:
        pbar, _ = qr.solve_against(rhs)
    except RankDeficiencyDetected:
        system = build_hankel(moments, N, d)
        pbar = linalg._svd_min_norm(system.H, rhs)
    resid = _hankel_residual(moments, N, pbar)
    r2, rinf = _vec_norms(resid)
    return pbar, r2, rinf


def find_quasiorthogonal(moments, N, eps=None, d_fixed=None, d_start=0,
                         d_max=None, delta_seed=None, dps=DEFAULT_BUILD_DPS):
    """Minimal-degree monic polynomial with ||H(N,d) pbar + h||_2 <= eps.

    Degree increments by one per step, each step extending the previous QR
    factor by a single Hankel column.  Passing d_fixed skips the search and
    solves at that degree directly (used when a node count is prescribed).
    delta_seed, when given, initializes the degree from the numerical rank
    of the widest affordable Hankel block instead of d_start.
    """
    _check_measure_nonzero(moments)
    if d_max is None:
        d_max = N - 1
    d_cap = min(d_max, len(moments) - N - 2)
    if d_cap < 0:
        raise ContractViolation(
            f"moment list of length {len(moments)} cannot support order N={N}")
    with working_dps(dps):
        if d_fixed is not None:
            if d_fixed > len(moments) - N - 2:
                raise ContractViolation(
                    f"need N+d+2 = {N + d_fixed + 2} moments, have {len(moments)}")
            qr = GrowingQR(N + 1)
            pbar, r2, rinf = _solve_degree(qr, moments, N, d_fixed)
            return QuasiPoly(coeffs=tuple(pbar) + (mp.mpf(1),), order=N,
                             residual_2=r2, residual_inf=rinf)
        if eps is None or eps <= 0:
            raise ContractViolation("eps must be positive")
        if delta_seed is not None:
            probe = build_hankel(moments, N, d_cap)
            d_start = max(d_start, numerical_rank(probe.H, delta_seed) - 1)
        history = {}
        qr = GrowingQR(N + 1)
        d = d_start
        while d <= d_cap:
            pbar, r2, rinf = _solve_degree(qr, moments, N, d)
            history[d] = r2
            if r2 <= eps:
                return QuasiPoly(coeffs=tuple(pbar) + (mp.mpf(1),), order=N,
                                 residual_2=r2, residual_inf=rinf)
            d += 1
        limit = "degree cap" if d_cap == d_max else "moment supply"
        raise ConstructionError(
            f"no degree d <= {d_cap} reaches residual {mp.nstr(mp.mpf(eps), 5)} "
            f"({limit} exhausted); best residual "
            f"{mp.nstr(min(history.values()), 5)}",
            residual_history=history)


def quasiorthogonality_residual(poly, moments, N=None):
    """max_j |sum_k p_k mu_{k+j}| over j = 0..N, evaluated directly."""
    if N is None:
        N = poly.order
    coeffs = poly.coeffs if isinstance(poly, QuasiPoly) else tuple(poly)
    d1 = len(coeffs) - 1
    if len(moments) < N + d1 + 1:
        raise ContractViolation("not enough moments for the requested order")
    worst = mp.mpf(0)
    for j in range(N + 1):
        s = mp.fsum(coeffs[k] * moments[k + j] for k in range(d1 + 1))
        worst = max(worst, abs(s))
    return worst


def nodes_from_poly(poly):
    """Quadrature nodes: roots of the quasiorthogonal polynomial, sorted."""
    return roots.roots_monic(list(poly.coeffs))


def lagrange_coefficients(nodes):
    """Row n holds the ascending coefficients of the Lagrange basis poly l_n.

    Built by synthetic division of prod (x - x_m) by (x - x_n), scaled by
    1 / prod_{m != n} (x_n - x_m).
    """
    nodes = [mp.mpmathify(z) for z in nodes]
    n_count = len(nodes)
    if n_count == 0:
        raise ContractViolation("need at least one node")
    scale = max([mp.mpf(1)] + [abs(z) for z in nodes])
    septol = mp.mpf(10) ** (-max(mp.mp.dps - 20, 10)) * scale
    for i in range(n_count):
        for j in range(i):
            if abs(nodes[i] - nodes[j]) < septol:
                raise ContractViolation(
                    f"nodes {j} and {i} collide: "
                    f"{mp.nstr(nodes[j], 8)} vs {mp.nstr(nodes[i], 8)}")
    master = roots.monic_from_roots(nodes)  # degree n_count
    L = mp.matrix(n_count, n_count)
    for n in range(n_count):
        # synthetic division of master by (x - nodes[n])
        q = [mp.mpc(0)] * n_count
        carry = master[n_count]
        for i in range(n_count - 1, -1, -1):
            q[i] = carry
            carry = master[i] + carry * nodes[n]
        denom = mp.fsum(q[i] * nodes[n] ** i for i in range(n_count))
        if denom == 0:
            raise ContractViolation(f"node {n} repeated (zero denominator)")
        for i in range(n_count):
            L[n, i] = q[i] / denom
    return L


def compute_weights(nodes, moments):
    """w_n = sum_k [l_n]_k mu_k: the Lagrange basis integrated via moments."""
    L = lagrange_coefficients(nodes)
    k_count = L.cols
    if len(moments) < k_count:
        raise ContractViolation("not enough moments to integrate the basis")
    return [mp.fsum(L[n, k] * moments[k] for k in range(k_count))
            for n in range(L.rows)]


def build_rule(moments, N, eps=None, num_nodes=None, prune_tol=0,
               d_start=0, d_max=None, delta_seed=None,
               dps=DEFAULT_BUILD_DPS):
    """End-to-end construction: polynomial search, roots, weights, certificate.

    Exactly one of eps (residual-driven degree search) or num_nodes (fixed
    node count, i.e. fixed degree d = num_nodes-1) must drive the degree.
    prune_tol > 0 drops node/weight pairs with |w| < prune_tol * max|w|.
    """
    if (eps is None) == (num_nodes is None):
        raise ContractViolation("exactly one of eps / num_nodes must be set")
    if num_nodes is not None and num_nodes < 1:
        raise ContractViolation("num_nodes must be >= 1")
    with working_dps(dps):
        poly = find_quasiorthogonal(
            moments, N, eps=eps,
            d_fixed=None if num_nodes is None else num_nodes - 1,
            d_start=d_start, d_max=d_max, delta_seed=delta_seed, dps=dps)
        nodes = nodes_from_poly(poly)
        weights = compute_weights(nodes, moments)
        pruned = ()
        if prune_tol > 0:
            wmax = max(abs(w) for w in weights)
            keep = [i for i, w in enumerate(weights)
                    if abs(w) >= prune_tol * wmax]
            pruned = tuple((nodes[i], weights[i])
                           for i in range(len(nodes)) if i not in keep)
            nodes = [nodes[i] for i in keep]
            weights = [weights[i] for i in keep]
        # Strip any guard bits so the stored values live exactly at dps;
        # JSON round-trips then reproduce them bit for bit.
        nodes = tuple(+z for z in nodes)
        weights = tuple(+w for w in weights)
        pruned = tuple((+z, +w) for z, w in pruned)
        epsilon = +poly.residual_inf
        rule = QuadratureRule(
            nodes=nodes, weights=weights, order=N,
            degree=poly.degree - 1, epsilon=epsilon,
            residual_2=+poly.residual_2, kind=moments.kind,
            descriptor=moments.descriptor, precision_dps=dps, pruned=pruned)
        cert = ErrorCertificate(poly_coeffs=tuple(+c for c in poly.coeffs),
                                epsilon=epsilon,
                                order=N, degree=poly.degree - 1)
        return rule, cert


def integrate(rule, f, dps=None):
    """sum_n w_n f(x_n).  Trig-kind rules pass the node z_n itself to f."""
    with working_dps(dps or rule.precision_dps):
        return mp.fsum(w * f(x) for x, w in zip(rule.nodes, rule.weights))


def integrate_monomial(rule, n, dps=None):
    """Quadrature value of x^n (or z^n for trig rules) without callables."""
    with working_dps(dps or rule.precision_dps):
        return mp.fsum(w * x ** n for x, w in zip(rule.nodes, rule.weights))


def error_bound(cert, q_coeffs):
    """Certified bound on |integral - quadrature| for the polynomial q.

    q_coeffs are ascending, degree at most N+d.  Degree <= d is integrated
    exactly, so the bound is 0 there; otherwise the Gamma2 system is solved
    by banded back-substitution and the bound is ||r||_1 * epsilon.
    """
    deg = len(q_coeffs) - 1
    N, d = cert.order, cert.degree
    if deg > N + d:
        raise ContractViolation(
            f"degree {deg} is beyond certified order N+d = {N + d}")
    if deg <= d:
        return mp.mpf(0)
    qbar = [mp.mpmathify(q_coeffs[d + 1 + i]) if d + 1 + i <= deg else mp.mpf(0)
            for i in range(N)]
    r = linalg.solve_unit_upper_toeplitz(cert.band(), qbar)
    return mp.fsum(abs(x) for x in r) * cert.epsilon


def error_bound_monomial(cert, n):
    """error_bound specialized to q(x) = x^n."""
    if n > cert.order + cert.degree:
        raise ContractViolation(
            f"degree {n} is beyond certified order N+d = "
            f"{cert.order + cert.degree}")
    if n <= cert.degree:
        return mp.mpf(0)
    coeffs = [mp.mpf(0)] * n + [mp.mpf(1)]
    return error_bound(cert, coeffs)


# ---------------------------------------------------------------------------
# JSON persistence (decimal strings, lossless at the stored precision)
# ---------------------------------------------------------------------------

def _num_str(x, dps):
    return mp.nstr(mp.mpf(x), dps + 8)


def _pair(z, dps):
    z = mp.mpc(z)
    return [_num_str(z.real, dps), _num_str(z.imag, dps)]


def rule_to_dict(rule, cert):
    dps = rule.precision_dps
    with working_dps(dps):
        return _rule_dict_at_precision(rule, cert, dps)


_RULE_FORMAT = "agquad-rule-v1"


def _rule_dict_at_precision(rule, cert, dps):
    return {
        "format": _RULE_FORMAT,
        "descriptor": rule.descriptor,
        "kind": rule.kind,
        "N": rule.order,
        "d": rule.degree,
        "epsilon": _num_str(rule.epsilon, dps),
        "residual_2": _num_str(rule.residual_2, dps),
        "precision_digits": dps,
        "nodes": [_pair(z, dps) for z in rule.nodes],
        "weights": [_pair(w, dps) for w in rule.weights],
        "poly": [_pair(c, dps) for c in cert.poly_coeffs],
    }


def save_rule(path, rule, cert):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rule_to_dict(rule, cert), fh, indent=1)


def rule_from_dict(doc):
    if doc.get("format") != _RULE_FORMAT:
        raise ContractViolation(f"unknown format {doc.get('format')!r}")
    dps = int(doc["precision_digits"])
    with working_dps(dps):
        def num(s):
            return mp.mpf(s)

        def cplx(pair):
            z = mp.mpc(num(pair[0]), num(pair[1]))
            return z

        nodes = tuple(cplx(p) for p in doc["nodes"])
        weights = tuple(cplx(p) for p in doc["weights"])
        poly = tuple(cplx(p) for p in doc["poly"][:-1]) + (mp.mpf(1),)
        rule = QuadratureRule(
            nodes=nodes, weights=weights, order=int(doc["N"]),
            degree=int(doc["d"]), epsilon=num(doc["epsilon"]),
            residual_2=num(doc["residual_2"]), kind=doc["kind"],
            descriptor=doc["descriptor"], precision_dps=dps)
        cert = ErrorCertificate(poly_coeffs=poly, epsilon=rule.epsilon,
                                order=rule.order, degree=rule.degree)
    return rule, cert


def load_rule(path):
    with open(path, encoding="utf-8") as fh:
        return rule_from_dict(json.load(fh))
