"""Extended-precision dense linear algebra kernels.

Everything here is precision-context driven: computations run at the ambient
mpmath precision (callers wrap with `context.working_dps`).  Matrices are
mpmath matrices or nested lists; vectors are plain lists of mpf/mpc.

The singular-value kernel is a one-sided Jacobi iteration, chosen because the
Hankel matrices this package cares about have singular values spanning many
orders of magnitude and Jacobi keeps relative accuracy on the small ones.
Its inner loops run on gmpy2 floats (MPFR/MPC), which are roughly an order of
magnitude faster than mpmath scalars.
"""

import gmpy2
import mpmath as mp

from .errors import ContractViolation, ConvergenceError

_MAX_JACOBI_SWEEPS = 60


# ---------------------------------------------------------------------------
# small vector helpers (lists of mpf/mpc)
# ---------------------------------------------------------------------------

def _as_columns(A):
    """Matrix (mp.matrix or nested lists) -> (m, n, list of column lists)."""
    if isinstance(A, mp.matrix):
        m, n = A.rows, A.cols
        cols = [[A[i, j] for i in range(m)] for j in range(n)]
    else:
        m = len(A)
        if m == 0:
            raise ContractViolation("matrix must be nonempty")
        n = len(A[0])
        if any(len(row) != n for row in A):
            raise ContractViolation("ragged rows in matrix")
        cols = [[mp.mpmathify(A[i][j]) for i in range(m)] for j in range(n)]
    if m < 1 or n < 1:
        raise ContractViolation("matrix dimensions must be positive")
    for col in cols:
        for x in col:
            if not mp.isfinite(x):
                raise ContractViolation("matrix entries must be finite")
    return m, n, cols


def _conj(x):
    return mp.conj(x)


def _dotc(x, y):
    """Conjugate dot product  x^H y."""
    return mp.fsum(_conj(a) * b for a, b in zip(x, y))


def _norm2(x):
    s = mp.fsum((a.real * a.real + a.imag * a.imag) if isinstance(a, mp.mpc)
                else a * a for a in x)
    return mp.sqrt(s)


def residual_norm(A, x, b):
    """|| A x + b ||_2 computed directly (no factorization reuse)."""
    m, n, cols = _as_columns(A)
    if len(x) != n or len(b) != m:
        raise ContractViolation("dimension mismatch in residual computation")
    r = list(b)
    for j, xj in enumerate(x):
        col = cols[j]
        for i in range(m):
            r[i] += xj * col[i]
    return _norm2(r)


# ---------------------------------------------------------------------------
# Householder QR with incremental column growth
# ---------------------------------------------------------------------------

class RankDeficiencyDetected(Exception):
    """Internal signal: triangular factor has a negligible diagonal entry."""


class GrowingQR:
    """Householder QR factorization that accepts one column at a time.

    Designed for the degree-incrementing loop of the quasiorthogonal
    polynomial search: going from degree d to d+1 appends a single column,
    which costs one reflector instead of a full refactorization.
    """

    def __init__(self, m):
        if m < 1:
            raise ContractViolation("row count must be positive")
        self.m = m
        self._reflectors = []   # unit vectors, entry j lives at row offset j
        self._rcols = []        # column j of R: j+1 entries

    @property
    def ncols(self):
        return len(self._rcols)

    def add_column(self, col):
        if len(col) != self.m:
            raise ContractViolation(
                f"column has {len(col)} rows, expected {self.m}")
        j = self.ncols
        if j >= self.m:
            raise ContractViolation("cannot have more columns than rows")
        v = [mp.mpmathify(x) for x in col]
        self._apply_reflectors(v)
        alpha, refl = _make_reflector(v, j)
        self._rcols.append(v[:j] + [alpha])
        self._reflectors.append(refl)

    def _apply_reflectors(self, v):
        for start, refl in enumerate(self._reflectors):
            if refl is None:
                continue
            w = mp.fsum(_conj(refl[i]) * v[start + i]
                        for i in range(len(refl)))
            if w != 0:
                w2 = 2 * w
                for i in range(len(refl)):
                    v[start + i] -= w2 * refl[i]

    def transform_rhs(self, b):
        """Return Q^H b for a fresh right-hand side."""
        if len(b) != self.m:
            raise ContractViolation("rhs length mismatch")
        v = [mp.mpmathify(x) for x in b]
        self._apply_reflectors(v)
        return v

    def solve_against(self, b, rank_tol_factor=None):
        """Minimize ||A x - b||_2; returns (x, residual_from_factorization).

        Raises RankDeficiencyDetected when a diagonal of R falls below
        rank_tol_factor times the largest diagonal (caller should fall back
        to a minimal-norm SVD solve).
        """
        k = self.ncols
        if k == 0:
            raise ContractViolation("no columns added yet")
        c = self.transform_rhs(b)
        diag = [self._rcols[j][j] for j in range(k)]
        dmax = max(abs(d) for d in diag)
        if rank_tol_factor is None:
            rank_tol_factor = mp.mpf(10) ** (-(mp.mp.dps - 10))
        if dmax == 0 or min(abs(d) for d in diag) <= rank_tol_factor * dmax:
            raise RankDeficiencyDetected
        x = [mp.mpf(0)] * k
        for i in range(k - 1, -1, -1):
            s = c[i]
            for j in range(i + 1, k):
                s -= self._rcols[j][i] * x[j]
            x[i] = s / diag[i]
        resid = _norm2(c[k:])
        return x, resid


def _make_reflector(v, j):
    """Build the Householder reflector zeroing v[j+1:]; v is edited in place.

    Returns (alpha, unit_reflector_or_None) where alpha is the new diagonal.
    """
    tail = v[j:]
    nrm = _norm2(tail)
    if nrm == 0:
        return mp.mpf(0), None
    x0 = tail[0]
    phase = x0 / abs(x0) if x0 != 0 else mp.mpf(1)
    alpha = -phase * nrm
    tail[0] = x0 - alpha
    vnrm = _norm2(tail)
    if vnrm == 0:
        return alpha, None
    refl = [t / vnrm for t in tail]
    return alpha, refl


def lstsq_min_norm(A, b, rank_tol_factor=None):
    """Minimizer of ||A x + b||_2 (note the plus sign), minimal norm among ties.

    Returns (x, residual_norm2).  A must be m x k with m >= k >= 1.
    Dense QR path; falls back to a truncated-SVD minimal-norm solve when the
    triangular factor is numerically rank deficient at threshold
    10**-(P-10) relative to the largest diagonal entry.
    """
    m, n, cols = _as_columns(A)
    if len(b) != m:
        raise ContractViolation(f"rhs has {len(b)} rows, matrix has {m}")
    if m < n:
        raise ContractViolation(f"need m >= k, got {m} x {n}")
    negb = [-mp.mpmathify(x) for x in b]
    qr = GrowingQR(m)
    for col in cols:
        qr.add_column(col)
    try:
        x, _ = qr.solve_against(negb, rank_tol_factor=rank_tol_factor)
    except RankDeficiencyDetected:
        x = _svd_min_norm(A, negb, rank_tol_factor)
    return x, residual_norm(A, x, b)


def _svd_min_norm(A, b, rank_tol_factor=None):
    """Minimal-norm minimizer of ||A x - b||_2 via truncated SVD."""
    if not isinstance(A, mp.matrix):
        A = mp.matrix(A)
    complex_input = any(isinstance(A[i, j], mp.mpc)
                        for i in range(A.rows) for j in range(A.cols))
    if complex_input or any(isinstance(v, mp.mpc) for v in b):
        A = A.apply(mp.mpc)
        U, S, V = mp.svd_c(A, full_matrices=False, compute_uv=True)
    else:
        U, S, V = mp.svd_r(A, full_matrices=False, compute_uv=True)
    if rank_tol_factor is None:
        rank_tol_factor = mp.mpf(10) ** (-(mp.mp.dps - 10))
    smax = max(S[i] for i in range(S.rows)) if S.rows else mp.mpf(0)
    cutoff = rank_tol_factor * smax
    k = A.cols
    x = [mp.mpf(0)] * k
    for i in range(S.rows):
        if S[i] <= cutoff:
            continue
        ui_b = mp.fsum(_conj(U[r, i]) * b[r] for r in range(A.rows))
        coeff = ui_b / S[i]
        for j in range(k):
            # mpmath convention: A = U * diag(S) * V, rows of V are the
            # right singular vectors.
            x[j] += coeff * _conj(V[i, j])
    return x


# ---------------------------------------------------------------------------
# singular values by one-sided Jacobi (gmpy2-accelerated)
# ---------------------------------------------------------------------------

def _mpf_to_mpfr(x):
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return gmpy2.mpfr(0)
    r = gmpy2.mpfr(int(man)) * gmpy2.mpfr(2) ** exp
    return -r if sign else r


def _to_gmpy(x):
    if isinstance(x, mp.mpc):
        return gmpy2.mpc(_mpf_to_mpfr(x.real), _mpf_to_mpfr(x.imag))
    return _mpf_to_mpfr(mp.mpf(x))


def _mpfr_to_mpf(x):
    if x == 0:
        return mp.mpf(0)
    digits, exp, _ = x.digits(10, mp.mp.dps + 8)
    if digits.startswith("-"):
        return mp.mpf("-0." + digits[1:] + "e" + str(exp))
    return mp.mpf("0." + digits + "e" + str(exp))


def singular_values(A, max_sweeps=_MAX_JACOBI_SWEEPS):
    """Full descending singular spectrum of a dense matrix.

    One-sided Jacobi: columns are repeatedly pairwise-orthogonalized by plane
    rotations until every pair is orthogonal to working precision; the column
    norms are then the singular values.  Small singular values keep relative
    accuracy, which Golub-Kahan bidiagonalization would lose.
    """
    m, n, cols = _as_columns(A)
    transposed = False
    if n > m:
        cols = [[_conj(cols[j][i]) for j in range(n)] for i in range(m)]
        m, n = n, m
        transposed = True
    del transposed  # spectrum is conjugation/transpose invariant

    guard_bits = 30
    prec = mp.mp.prec + guard_bits
    complex_input = any(isinstance(x, mp.mpc) for col in cols for x in col)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        with mp.extraprec(guard_bits):
            gcols = [[_to_gmpy(x) for x in col] for col in cols]
        svals = _jacobi_kernel(gcols, m, n, prec, complex_input, max_sweeps)
        out = sorted((_mpfr_to_mpf(s) for s in svals), reverse=True)
    return [mp.mpf(s) for s in out]


def _jacobi_kernel(cols, m, n, prec, complex_input, max_sweeps):
    def colnorm2(col):
        if complex_input:
            return sum((x * x.conjugate()).real for x in col)
        return sum(x * x for x in col)

    sq = [colnorm2(col) for col in cols]
    eps = gmpy2.mpfr(2) ** (-(prec - 6))
    eps2 = eps * eps
    # Pairs where both columns sit at the input-noise floor carry no usable
    # spectral information; skipping them does not disturb larger columns.
    noise2 = max(sq) * gmpy2.mpfr(10) ** (-2 * (mp.mp.dps + 5)) if max(sq) else 0
    rng = range(m)
    order = list(range(n))
    for sweep in range(max_sweeps):
        # de Rijk pivoting: visiting columns in decreasing-norm order speeds
        # convergence markedly on heavily graded spectra.
        order.sort(key=lambda j: sq[j], reverse=True)
        rotated = 0
        for pi in range(n - 1):
            p = order[pi]
            cp = cols[p]
            for qi in range(pi + 1, n):
                q = order[qi]
                app, aqq = sq[p], sq[q]
                if app == 0 or aqq == 0:
                    continue
                if app <= noise2 and aqq <= noise2:
                    continue
                cq = cols[q]
                if complex_input:
                    apq = sum(cp[i].conjugate() * cq[i] for i in rng)
                    g2 = (apq * apq.conjugate()).real
                else:
                    apq = sum(cp[i] * cq[i] for i in rng)
                    g2 = apq * apq
                if g2 <= eps2 * app * aqq:
                    continue
                rotated += 1
                g = gmpy2.sqrt(g2)
                zeta = (aqq - app) / (2 * g)
                t = 1 / (abs(zeta) + gmpy2.sqrt(1 + zeta * zeta))
                if zeta < 0:
                    t = -t
                c = 1 / gmpy2.sqrt(1 + t * t)
                s = c * t
                if complex_input:
                    u = apq / g
                    su_c = s * u.conjugate()
                    su = s * u
                    for i in rng:
                        xp, xq = cp[i], cq[i]
                        cp[i] = c * xp - su_c * xq
                        cq[i] = su * xp + c * xq
                else:
                    su = s if apq > 0 else -s
                    for i in rng:
                        xp, xq = cp[i], cq[i]
                        cp[i] = c * xp - su * xq
                        cq[i] = su * xp + c * xq
                # exact norms: the analytic update app -+ t*g cancels badly
                # on graded matrices and stalls convergence
                sq[p] = colnorm2(cp)
                sq[q] = colnorm2(cq)
        if rotated == 0:
            break
    else:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {max_sweeps} sweeps "
            f"({rotated} rotations still active in last sweep)",
            iterations=max_sweeps)
    return [gmpy2.sqrt(colnorm2(col)) for col in cols]


# ---------------------------------------------------------------------------
# unit upper-triangular Toeplitz solves
# ---------------------------------------------------------------------------

def solve_unit_upper_toeplitz(band, rhs):
    """Solve T r = rhs for T unit-diagonal upper-triangular banded Toeplitz.

    `band` lists the leading entries of the first row: band[0] must be 1 and
    T[j, j+l] = band[l] for 0 <= l < len(band), zero beyond the band.
    Back-substitution in O(len(rhs) * len(band)).
    """
    if not band or band[0] != 1:
        raise ContractViolation("band[0] must be exactly 1 (unit diagonal)")
    nn = len(rhs)
    width = len(band)
    r = [mp.mpf(0)] * nn
    for j in range(nn - 1, -1, -1):
        s = mp.mpmathify(rhs[j])
        top = min(width - 1, nn - 1 - j)
        for l in range(1, top + 1):
            if band[l] != 0:
                s -= band[l] * r[j + l]
        r[j] = s
    return r


def solve_upper_triangular_toeplitz(T, rhs):
    """Dense-matrix wrapper around `solve_unit_upper_toeplitz`.

    Validates that T is upper triangular Toeplitz with unit diagonal, then
    extracts the band from the first row.
    """
    if not isinstance(T, mp.matrix):
        T = mp.matrix(T)
    if T.rows != T.cols:
        raise ContractViolation("matrix must be square")
    nn = T.rows
    if len(rhs) != nn:
        raise ContractViolation("rhs length mismatch")
    for i in range(nn):
        if T[i, i] != 1:
            raise ContractViolation("diagonal entries must all equal 1")
        for j in range(i):
            if T[i, j] != 0:
                raise ContractViolation("matrix must be upper triangular")
    for i in range(1, nn):
        for j in range(i, nn):
            if T[i, j] != T[i - 1, j - 1]:
                raise ContractViolation("matrix must be Toeplitz")
    band = [T[0, j] for j in range(nn)]
    while len(band) > 1 and band[-1] == 0:
        band.pop()
    return solve_unit_upper_toeplitz(band, rhs)
