import mpmath as mp
import pytest

from agquad import measures, quadrature, reference
from agquad.context import working_dps
from agquad.errors import ContractViolation


class TestLegendreMonic:
    def test_low_degrees(self):
        with working_dps(30):
            assert reference.legendre_monic(0, dps=30) == (mp.mpf(1),)
            p2 = reference.legendre_monic(2, dps=30)  # x^2 - 1/3
            assert abs(p2[0] + mp.mpf(1) / 3) < mp.mpf(10) ** -25
            assert p2[1] == 0 and p2[2] == 1
            p3 = reference.legendre_monic(3, dps=30)  # x^3 - 3x/5
            assert abs(p3[1] + mp.mpf(3) / 5) < mp.mpf(10) ** -25

    def test_orthogonality_via_hankel(self):
        with working_dps(40):
            for k in range(6):
                coeffs = reference.legendre_monic(k + 1, dps=40)
                resid = reference.hankel_annihilation_residual(coeffs, dps=40)
                assert resid < mp.mpf(10) ** -30


class TestGaussLegendre:
    def test_one_and_two_nodes(self):
        with working_dps(30):
            r1 = reference.gauss_legendre(1, dps=30)
            assert abs(r1.nodes[0]) < mp.mpf(10) ** -25
            assert abs(r1.weights[0] - 2) < mp.mpf(10) ** -25
            r2 = reference.gauss_legendre(2, dps=30)
            x = 1 / mp.sqrt(3)
            assert abs(r2.nodes[0] + x) < mp.mpf(10) ** -25
            assert abs(r2.nodes[1] - x) < mp.mpf(10) ** -25
            assert abs(r2.weights[0] - 1) < mp.mpf(10) ** -25

    def test_three_nodes_classical(self):
        with working_dps(30):
            r = reference.gauss_legendre(3, dps=30)
            x = mp.sqrt(mp.mpf(3) / 5)
            assert abs(r.nodes[0] + x) < mp.mpf(10) ** -25
            assert abs(r.weights[0] - mp.mpf(5) / 9) < mp.mpf(10) ** -25
            assert abs(r.weights[1] - mp.mpf(8) / 9) < mp.mpf(10) ** -25

    def test_interval_mapping(self):
        with working_dps(30):
            r = reference.gauss_legendre(4, interval=(0, 1), dps=30)
            total = mp.fsum(r.weights)
            assert abs(total - 1) < mp.mpf(10) ** -25
            assert all(0 < x < 1 for x in r.nodes)


class TestGaussChebyshev:
    def test_closed_forms(self):
        with working_dps(30):
            r1 = reference.gauss_chebyshev1(1, dps=30)
            assert abs(r1.nodes[0]) < mp.mpf(10) ** -25
            assert abs(r1.weights[0] - mp.pi) < mp.mpf(10) ** -25
            r2 = reference.gauss_chebyshev1(2, dps=30)
            assert abs(abs(r2.nodes[0]) - mp.cos(mp.pi / 4)) < mp.mpf(10) ** -25
            assert abs(r2.weights[0] - mp.pi / 2) < mp.mpf(10) ** -25

    def test_exactness_against_chebyshev_moments(self):
        dps = 30
        with working_dps(dps):
            r = reference.gauss_chebyshev1(5, dps=dps)
            mom = measures.chebyshev1(8, dps=dps)
            err = abs(quadrature.integrate_monomial(r, 8) - mom[8])
            assert err < mp.mpf(10) ** (-(dps - 15))


class TestOracles:
    def test_oracle_integral_values(self):
        with working_dps(30):
            assert abs(reference.oracle_integral("lebesgue_pm1", 700, dps=30)
                       - mp.mpf(2) / 701) < mp.mpf(10) ** -25
            assert abs(reference.oracle_integral("trig_lebesgue_pm1", 500,
                                                 dps=30)
                       - 2 * mp.sin(mp.mpf(500)) / 500) < mp.mpf(10) ** -25
            assert abs(reference.oracle_integral("logweight_01", 700, dps=30)
                       + mp.mpf(1) / 701 ** 2) < mp.mpf(10) ** -25

    def test_unknown_measure(self):
        with pytest.raises(ContractViolation):
            reference.oracle_integral("nope", 0)

    def test_adaptive_integrate_basics(self):
        dps = 30
        with working_dps(dps):
            tol = mp.mpf(10) ** -20
            assert abs(reference.adaptive_integrate(
                lambda x: mp.mpf(1), 0, 1, tol, dps=dps) - 1) <= tol
            assert abs(reference.adaptive_integrate(
                lambda x: x ** 2, -1, 1, tol, dps=dps)
                - mp.mpf(2) / 3) <= tol

    def test_adaptive_integrate_log_series(self):
        dps = 30
        with working_dps(dps):
            tol = mp.mpf(10) ** -20
            c = mp.mpf("1.05")
            got = reference.adaptive_integrate(
                lambda x: mp.log(1 - x / c), -1, 1, tol, dps=dps)
            # antiderivative of log(1 - x/c) is -(c - x)(log(1 - x/c) - 1)
            anti = lambda x: -(c - x) * (mp.log(1 - x / c) - 1)
            truth = anti(mp.mpf(1)) - anti(mp.mpf(-1))
            assert abs(got - truth) <= tol * 10


class TestBesselGrid:
    def test_matches_tabulated_j0(self):
        with working_dps(30):
            g = reference.bessel_grid(0, 1, 0, 1, 4, dps=30)
            # J_0(0.5) from the series definition
            truth = mp.nsum(lambda k: (-1) ** k * mp.mpf("0.25") ** (2 * k)
                            / mp.factorial(k) ** 2, [0, mp.inf])
            assert abs(g.samples[2] - truth) < mp.mpf(10) ** -25
