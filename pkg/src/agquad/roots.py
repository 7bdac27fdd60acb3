"""Polynomial root finding for monic polynomials in extended precision.

Strategy: cheap double-precision seeds from the companion-matrix eigenvalues
(numpy), refined simultaneously by the Aberth-Ehrlich iteration at full
working precision.  Aberth keeps approximants apart, which matters for the
clustered complex node sets produced by quasiorthogonal polynomials.
"""

import numpy as np
import mpmath as mp

from .errors import ContractViolation, ConvergenceError

RESIDUAL_GUARD_DIGITS = 15
_MAX_ITERATIONS = 400


def polyval_monic(coeffs, z):
    """Evaluate a polynomial given ascending coefficients (last must be 1)."""
    acc = mp.mpmathify(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _polyval_and_deriv(coeffs, z):
    p = mp.mpmathify(coeffs[-1])
    dp = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _companion_seeds(coeffs, k):
    """Double-precision root estimates; falls back to a circle on overflow."""
    try:
        arr = np.array([complex(c) for c in reversed(coeffs)], dtype=complex)
        if np.all(np.isfinite(arr)):
            seeds = np.roots(arr)
            if len(seeds) == k and np.all(np.isfinite(seeds)):
                return [mp.mpc(z) for z in seeds]
    except (OverflowError, ValueError, np.linalg.LinAlgError):
        pass
    radius = 1 + max(abs(mp.mpmathify(c)) for c in coeffs)
    return [radius * mp.exp(mp.mpc(0, 2 * mp.pi * (j + mp.mpf(1) / 4) / k))
            for j in range(k)]


def _spread_collisions(seeds, scale):
    """Nudge coincident seeds apart; Aberth needs distinct approximants."""
    out = list(seeds)
    delta = mp.mpf(10) ** (-6) * scale
    for i in range(len(out)):
        for j in range(i):
            if abs(out[i] - out[j]) < delta:
                out[i] = out[i] + delta * mp.exp(mp.mpc(0, 2 * mp.pi * i / len(out)))
                break
    return out


def roots_monic(coeffs, max_iterations=_MAX_ITERATIONS):
    """All k roots (with multiplicity) of a monic degree-k polynomial.

    `coeffs` are ascending with coeffs[-1] == 1.  Succeeds when
    max_i |p(root_i)| <= 10**-(P - 15) * max|coeff|; otherwise raises
    ConvergenceError carrying the best residual reached.  Roots are returned
    sorted by (real, imag) so identical inputs give identical output.
    """
    if len(coeffs) < 2:
        raise ContractViolation("polynomial degree must be >= 1")
    if mp.mpmathify(coeffs[-1]) != 1:
        raise ContractViolation("leading coefficient must be exactly 1")
    coeffs = [mp.mpmathify(c) for c in coeffs]
    k = len(coeffs) - 1
    if k == 1:
        return [mp.mpc(-coeffs[0])]

    max_coeff = max(abs(c) for c in coeffs)
    target = mp.mpf(10) ** (-(mp.mp.dps - RESIDUAL_GUARD_DIGITS)) * max_coeff
    scale = max(mp.mpf(1), max(abs(c) for c in coeffs[:-1]) ** (mp.mpf(1) / k))

    with mp.extraprec(40):
        z = _spread_collisions(_companion_seeds(coeffs, k), scale)
        best = mp.inf
        for iteration in range(max_iterations):
            pvals = []
            steps = []
            for i in range(k):
                p, dp = _polyval_and_deriv(coeffs, z[i])
                pvals.append(p)
                if dp == 0:
                    # stationary point: kick sideways, retry next sweep
                    steps.append(scale * mp.mpf(10) ** (-mp.mp.dps // 2))
                    continue
                w = p / dp
                ssum = mp.mpc(0)
                for j in range(k):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff == 0:
                            diff = scale * mp.mpf(10) ** (-mp.mp.dps)
                        ssum += 1 / diff
                denom = 1 - w * ssum
                if denom == 0:
                    steps.append(w)
                else:
                    steps.append(w / denom)
            resid = max(abs(p) for p in pvals)
            best = min(best, resid)
            for i in range(k):
                z[i] = z[i] - steps[i]
            if resid <= target:
                # one more correction has already been applied, which
                # roughly squares the accuracy of the accepted iterate
                break
        else:
            raise ConvergenceError(
                f"Aberth refinement missed residual target {mp.nstr(target, 5)} "
                f"after {max_iterations} iterations",
                iterations=max_iterations, best_residual=best)
        out = [mp.mpc(r) for r in z]
    out = [+r for r in out]  # re-round from guard precision to the context
    return sorted(out, key=lambda r: (r.real, r.imag))


def monic_from_roots(rts):
    """Ascending coefficients of prod (x - r); the inverse of roots_monic."""
    coeffs = [mp.mpc(1)]
    for r in rts:
        coeffs = [mp.mpc(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    return coeffs
