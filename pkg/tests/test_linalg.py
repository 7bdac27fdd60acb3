import mpmath as mp
import pytest

from agquad import linalg
from agquad.context import working_dps


def mat(rows):
    return mp.matrix(rows)


class TestGrowingQR:
    def test_incremental_matches_direct_lstsq(self):
        with working_dps(40):
            cols = [[mp.mpf(v) for v in c]
                    for c in ([1, 2, 3, 4], [0, 1, 1, 2], [5, 3, 2, 1])]
            b = [mp.mpf(v) for v in (1, -1, 2, 0)]
            qr = linalg.GrowingQR(4)
            for c in cols:
                qr.add_column(c)
            x, _ = qr.solve_against(b)  # minimizes ||Ax - b||
            A = mp.matrix(4, 3)
            for j, c in enumerate(cols):
                for i, v in enumerate(c):
                    A[i, j] = v
            y, _ = linalg.lstsq_min_norm(A, mp.matrix(b))  # min ||Ay + b||
            for xi, yi in zip(x, y):
                assert abs(xi + yi) < mp.mpf(10) ** -30

    def test_rank_deficiency_detected(self):
        with working_dps(30):
            qr = linalg.GrowingQR(3)
            qr.add_column([mp.mpf(1), mp.mpf(2), mp.mpf(3)])
            qr.add_column([mp.mpf(2), mp.mpf(4), mp.mpf(6)])
            with pytest.raises(linalg.RankDeficiencyDetected):
                qr.solve_against([mp.mpf(1), mp.mpf(0), mp.mpf(0)])


class TestLstsq:
    def test_minimizes_residual_of_ax_plus_b(self):
        with working_dps(40):
            A = mat([[1, 0], [0, 1], [1, 1]])
            b = mp.matrix([mp.mpf(1), mp.mpf(1), mp.mpf(1)])
            x, resid = linalg.lstsq_min_norm(A, b)
            # normal equations for min ||Ax + b||: x = (-2/3, -2/3)
            third = mp.mpf(1) / 3
            assert abs(x[0] + 2 * third) < mp.mpf(10) ** -35
            assert abs(x[1] + 2 * third) < mp.mpf(10) ** -35
            assert abs(resid - 1 / mp.sqrt(3)) < mp.mpf(10) ** -35

    def test_min_norm_on_rank_deficient(self):
        with working_dps(40):
            A = mat([[1, 1], [1, 1]])
            b = mp.matrix([mp.mpf(-2), mp.mpf(-2)])
            x, resid = linalg.lstsq_min_norm(A, b)
            assert resid < mp.mpf(10) ** -30
            # minimal-norm solution splits evenly
            assert abs(x[0] - 1) < mp.mpf(10) ** -25
            assert abs(x[1] - 1) < mp.mpf(10) ** -25


class TestSingularValues:
    def test_matches_mpmath_svd_small(self):
        with working_dps(30):
            A = mat([[2, 0, 1], [0, 3, -1], [1, 1, 1], [0, 0, 2]])
            ours = linalg.singular_values(A)
            theirs = sorted(mp.svd_r(mp.matrix(A), compute_uv=False),
                            reverse=True)
            assert len(ours) == 3
            for a, b in zip(ours, theirs):
                assert abs(a - b) < mp.mpf(10) ** -25

    def test_graded_hankel_tiny_sigma(self):
        # moment Hankels have singular values spanning many decades; the
        # one-sided Jacobi sweep must resolve the small ones accurately
        with working_dps(40):
            n = 12
            H = mp.matrix(n, n + 1)
            for i in range(n):
                for j in range(n + 1):
                    H[i, j] = (mp.mpf(2) / (i + j + 1)
                               if (i + j) % 2 == 0 else mp.mpf(0))
            ours = linalg.singular_values(H)
            theirs = sorted(mp.svd_r(mp.matrix(H), compute_uv=False),
                            reverse=True)
            for a, b in zip(ours, theirs):
                assert abs(a - b) <= abs(b) * mp.mpf(10) ** -20


class TestToeplitzSolve:
    def test_band_solve_matches_dense(self):
        with working_dps(30):
            band = [mp.mpf(1), mp.mpf("0.5"), mp.mpf(-2)]
            rhs = [mp.mpf(v) for v in (1, 2, 3, 4, 5)]
            x = linalg.solve_unit_upper_toeplitz(band, rhs)
            n = len(rhs)
            T = mp.matrix(n, n)
            for i in range(n):
                for k, bv in enumerate(band):
                    if i + k < n:
                        T[i, i + k] = bv
            y = linalg.solve_upper_triangular_toeplitz(T, rhs)
            for a, b in zip(x, y):
                assert abs(a - b) < mp.mpf(10) ** -25
            # verify it actually solves the system
            for i in range(n):
                s = mp.fsum(T[i, j] * x[j] for j in range(n))
                assert abs(s - rhs[i]) < mp.mpf(10) ** -25

    def test_unit_diagonal_required(self):
        with pytest.raises(Exception):
            linalg.solve_unit_upper_toeplitz(
                [mp.mpf(2), mp.mpf(1)], [mp.mpf(1), mp.mpf(1)])
