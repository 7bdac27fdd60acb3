import mpmath as mp
import pytest

from agquad import measures, reference
from agquad.context import working_dps
from agquad.errors import ContractViolation, SampleFormatError


class TestProviders:
    def test_lebesgue_pm1_values(self):
        with working_dps(30):
            m = measures.lebesgue_pm1(4, dps=30)
            assert m[0] == 2
            assert m[1] == 0
            assert abs(m[2] - mp.mpf(2) / 3) < mp.mpf(10) ** -25
            assert m.kind == measures.KIND_POWER

    def test_chebyshev_values(self):
        with working_dps(30):
            m = measures.chebyshev1(8, dps=30)
            assert abs(m[0] - mp.pi) < mp.mpf(10) ** -25
            assert abs(m[2] - mp.pi / 2) < mp.mpf(10) ** -25
            assert abs(m[8] - 35 * mp.pi / 128) < mp.mpf(10) ** -25

    def test_trig_values(self):
        with working_dps(30):
            m = measures.trig_lebesgue_pm1(3, dps=30)
            assert m[0] == 2
            assert abs(m[3] - 2 * mp.sin(mp.mpf(3)) / 3) < mp.mpf(10) ** -25

    @pytest.mark.parametrize("name", ["lebesgue_pm1", "lebesgue_01",
                                      "chebyshev1", "logweight_01"])
    def test_closed_forms_match_adaptive_oracle(self, name):
        dps = 30
        weights = {
            "lebesgue_pm1": (lambda x: mp.mpf(1), -1, 1),
            "lebesgue_01": (lambda x: mp.mpf(1), 0, 1),
            "chebyshev1": (lambda x: 1 / mp.sqrt(1 - x ** 2), -1, 1),
            "logweight_01": (lambda x: mp.log(x), 0, 1),
        }
        w, a, b = weights[name]
        with working_dps(dps):
            tol = mp.mpf(10) ** (-(dps - 10))
            m = measures.__dict__[name](7, dps=dps)
            for n in (0, 3, 7):
                oracle = reference.adaptive_integrate(
                    lambda x: w(x) * x ** n, a, b, tol, dps=dps)
                assert abs(m[n] - oracle) <= tol * 10

    def test_custom_provider(self):
        m = measures.custom(lambda n: mp.mpf(n + 1), 3, descriptor="lin")
        assert m[2] == 3
        assert m.descriptor == "lin"

    def test_nonfinite_moment_rejected(self):
        with pytest.raises(ContractViolation):
            measures.MomentSequence(measures.KIND_POWER,
                                    (mp.mpf(1), mp.inf), "bad")


class TestSampleGrid:
    def test_point_and_step(self):
        g = measures.SampleGrid(a=mp.mpf(0), b=mp.mpf(2), M=4,
                                samples=tuple(mp.mpf(k) for k in range(5)))
        assert g.step == mp.mpf("0.5")
        assert g.point(3) == mp.mpf("1.5")

    def test_sample_count_enforced(self):
        with pytest.raises(ContractViolation):
            measures.SampleGrid(a=mp.mpf(0), b=mp.mpf(1), M=4,
                                samples=(mp.mpf(1),))

    def test_moments_from_samples_identity(self):
        g = measures.SampleGrid(a=mp.mpf(0), b=mp.mpf(1), M=2,
                                samples=(mp.mpf(5), mp.mpf(6), mp.mpf(7)))
        m = measures.moments_from_samples(g)
        assert m.kind == measures.KIND_TRIG
        assert m.values == g.samples


class TestSampleCsv:
    def test_round_trip(self, tmp_path):
        with working_dps(30):
            g = measures.SampleGrid(
                a=mp.mpf("-0.5"), b=mp.mpf("1.5"), M=3,
                samples=(mp.mpf(1), mp.mpc(2, -1), mp.mpf("0.25"),
                         mp.mpc(0, 3)))
            path = tmp_path / "g.csv"
            measures.save_samples_csv(path, g, dps=30)
            back = measures.load_samples_csv(path, dps=30)
            assert back.a == g.a and back.b == g.b and back.M == g.M
            for x, y in zip(back.samples, g.samples):
                assert x == y

    def test_bad_header_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,0\nM,3\nb,1\n")
        with pytest.raises(SampleFormatError) as err:
            measures.load_samples_csv(path)
        assert err.value.line == 2

    def test_bad_number_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,0\nb,1\nM,1\n1.0\nnot-a-number\n")
        with pytest.raises(SampleFormatError) as err:
            measures.load_samples_csv(path)
        assert err.value.line == 5
