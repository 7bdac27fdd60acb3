import mpmath as mp

from agquad import roots
from agquad.context import working_dps


def test_real_roots_recovered():
    with working_dps(40):
        # (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        coeffs = [mp.mpf(-6), mp.mpf(11), mp.mpf(-6), mp.mpf(1)]
        out = roots.roots_monic(coeffs)
        expected = [mp.mpf(1), mp.mpf(2), mp.mpf(3)]
        for r, e in zip(out, expected):
            assert abs(r - e) < mp.mpf(10) ** -25


def test_complex_conjugate_pair():
    with working_dps(40):
        # x^2 + 1
        out = roots.roots_monic([mp.mpf(1), mp.mpf(0), mp.mpf(1)])
        got = sorted(out, key=lambda z: mp.im(z))
        assert abs(got[0] + 1j) < mp.mpf(10) ** -25
        assert abs(got[1] - 1j) < mp.mpf(10) ** -25


def test_clustered_roots():
    with working_dps(60):
        rts = [mp.mpf(1), mp.mpf(1) + mp.mpf(10) ** -8, mp.mpf(-2)]
        coeffs = list(roots.monic_from_roots(rts))
        out = roots.roots_monic(coeffs)
        got = sorted(out, key=lambda z: mp.re(z))
        assert abs(got[0] + 2) < mp.mpf(10) ** -40
        pair = sorted((got[1], got[2]), key=lambda z: mp.re(z))
        assert abs(pair[0] - rts[0]) < mp.mpf(10) ** -20
        assert abs(pair[1] - rts[1]) < mp.mpf(10) ** -20


def test_round_trip_preserves_precision():
    with working_dps(50):
        coeffs = list(roots.monic_from_roots(
            [mp.mpf(k) / 7 for k in range(1, 9)]))
        out = roots.roots_monic(coeffs)
        back = roots.monic_from_roots(out)
        # degree-8 equispaced roots are mildly ill-conditioned; allow the
        # corresponding forward-error loss relative to the 50-digit build
        for a, b in zip(coeffs, back):
            assert abs(a - b) < mp.mpf(10) ** -30


def test_results_rounded_to_working_precision():
    with working_dps(30):
        out = roots.roots_monic([mp.mpf(-2), mp.mpf(0), mp.mpf(1)])
        for r in out:
            assert (+r) == r  # no guard bits survive


def test_polyval_monic_horner():
    with working_dps(30):
        coeffs = [mp.mpf(3), mp.mpf(-1), mp.mpf(1)]  # x^2 - x + 3
        v = roots.polyval_monic(coeffs, mp.mpf(2))
        assert v == 5
