import json

import mpmath as mp
import pytest

from agquad import expsum
from agquad.context import working_dps
from agquad.errors import ContractViolation
from agquad.measures import SampleGrid


def constant_grid(value, M=10, dps=40):
    with working_dps(dps):
        return SampleGrid(a=mp.mpf(0), b=mp.mpf(1), M=M,
                          samples=tuple([mp.mpf(value)] * (M + 1)))


def single_exponential_grid(theta, a=0, b=2, M=16, dps=40):
    with working_dps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        return SampleGrid(a=a, b=b, M=M,
                          samples=tuple(mp.exp(1j * mp.mpf(theta) * n)
                                        for n in range(M + 1)))


class TestBuild:
    def test_constant_is_one_term(self):
        ap = expsum.build_expsum(constant_grid(3), num_terms=1, dps=40)
        assert ap.num_terms == 1
        alpha, beta = ap.terms[0]
        assert abs(alpha - 3) < mp.mpf(10) ** -30
        assert abs(beta) < mp.mpf(10) ** -30
        assert ap.max_residual < mp.mpf(10) ** -30

    def test_single_exponential_recovered(self):
        grid = single_exponential_grid("0.7")
        ap = expsum.build_expsum(grid, num_terms=1, dps=40)
        with working_dps(40):
            alpha, beta = ap.terms[0]
            assert abs(alpha - 1) < mp.mpf(10) ** -20
            assert abs(beta - mp.mpf("0.7") / grid.step) < mp.mpf(10) ** -20
            assert ap.max_residual < mp.mpf(10) ** -20

    def test_eps_mode_finds_minimal_terms(self):
        with working_dps(40):
            grid = SampleGrid(
                a=mp.mpf(0), b=mp.mpf(1), M=20,
                samples=tuple(2 + mp.exp(1j * mp.mpf("0.3") * n)
                              for n in range(21)))
            ap = expsum.build_expsum(grid, eps=mp.mpf(10) ** -25, dps=40)
            assert ap.num_terms == 2
            assert ap.max_residual < mp.mpf(10) ** -20

    def test_eps_xor_num_terms(self):
        grid = constant_grid(1)
        with pytest.raises(ContractViolation):
            expsum.build_expsum(grid)
        with pytest.raises(ContractViolation):
            expsum.build_expsum(grid, eps=mp.mpf(1), num_terms=1)

    def test_internal_order_bookkeeping(self):
        grid = constant_grid(1, M=12)
        ap = expsum.build_expsum(grid, num_terms=3, dps=30)
        assert ap.degree == 2
        assert ap.order == 12 - 2 - 1


class TestEval:
    def test_constant_everywhere(self):
        ap = expsum.build_expsum(constant_grid(5), num_terms=1, dps=40)
        with working_dps(40):
            for x in ("0.1", "0.377", "0.9"):
                assert abs(expsum.eval_expsum(ap, mp.mpf(x)) - 5) \
                    < mp.mpf(10) ** -30

    def test_off_grid_single_exponential(self):
        grid = single_exponential_grid("0.7")
        ap = expsum.build_expsum(grid, num_terms=1, dps=40)
        with working_dps(40):
            x = mp.mpf("1.23456")
            truth = mp.exp(1j * mp.mpf("0.7") * x / grid.step)
            assert abs(expsum.eval_expsum(ap, x) - truth) < mp.mpf(10) ** -20

    def test_continuous_form_matches_discrete_at_samples(self):
        with working_dps(40):
            grid = SampleGrid(
                a=mp.mpf(-1), b=mp.mpf(1), M=16,
                samples=tuple(mp.cos(mp.mpf(n) / 3) for n in range(17)))
            ap = expsum.build_expsum(grid, num_terms=2, dps=40)
            for n in (0, 5, 16):
                discrete = expsum.eval_expsum(ap, grid.point(n))
                assert abs(discrete - grid.samples[n]) < mp.mpf(10) ** -20


class TestResidualReport:
    def test_per_sample_list_matches_direct_eval(self):
        grid = single_exponential_grid("0.4", M=8)
        ap = expsum.build_expsum(grid, num_terms=1, dps=40)
        with working_dps(40):
            mx, per = expsum.residual_report(ap, grid)
            assert len(per) == 9
            assert mx == max(per)
            direct = abs(expsum.eval_expsum(ap, grid.point(3))
                         - grid.samples[3])
            assert abs(per[3] - direct) < mp.mpf(10) ** -30


class TestDirichlet:
    def test_kernel_values(self):
        with working_dps(30):
            assert expsum.dirichlet_kernel(200, mp.mpf(0)) == 401
            assert expsum.dirichlet_kernel(200, mp.mpf(2)) == 401
            x = mp.mpf("0.37")
            expected = mp.sin(mp.pi * mp.mpf("200.5") * x) \
                / mp.sin(mp.pi * x / 2)
            assert abs(expsum.dirichlet_kernel(200, x) - expected) \
                < mp.mpf(10) ** -25

    def test_halfkernel_reflection_identity(self):
        with working_dps(30):
            for x in (mp.mpf("0.37"), mp.mpf("-0.9"), mp.mpf("0.001")):
                composed = expsum.dirichlet_halfkernel(200, x) \
                    + expsum.dirichlet_halfkernel(200, 2 - x)
                assert abs(composed - expsum.dirichlet_kernel(200, x)) \
                    < mp.mpf(10) ** -24

    def test_demo_term_count_must_be_even(self):
        with pytest.raises(ContractViolation):
            expsum.dirichlet_kernel_demo(terms=81)


class TestSerialization:
    def test_round_trip_lossless(self, tmp_path):
        grid = single_exponential_grid("0.7")
        ap = expsum.build_expsum(grid, num_terms=1, dps=40)
        path = tmp_path / "e.json"
        expsum.save_expsum(path, ap)
        back = expsum.load_expsum(path)
        assert back.terms == ap.terms
        assert back.a == ap.a and back.b == ap.b and back.M == ap.M
        assert back.max_residual == ap.max_residual
        doc1 = json.dumps(expsum.expsum_to_dict(ap))
        doc2 = json.dumps(expsum.expsum_to_dict(back))
        assert doc1 == doc2

    def test_unknown_format_rejected(self):
        with pytest.raises(ContractViolation):
            expsum.expsum_from_dict({"format": "nope"})
