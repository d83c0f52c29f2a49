import numpy as np
import pytest

from tsnmf import ShapeError, SvdResult, ValidationError, matmul, pinv, split_sections, svd


def naive_matmul(a, b):
    """Triple-loop product oracle, independent of the library path."""
    out = np.zeros((a.shape[0], b.shape[1]))
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0.0
            for k in range(a.shape[1]):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


class TestMatmul:
    def test_identity(self):
        a = np.arange(9.0).reshape(3, 3) + 1
        assert np.array_equal(matmul(np.eye(3), a), a)

    def test_direct_arithmetic(self):
        got = matmul([[1.0, 2.0], [3.0, 4.0]], [[1.0], [1.0]])
        assert np.array_equal(got, [[3.0], [7.0]])

    def test_against_triple_loop_oracle(self):
        rng = np.random.default_rng(0)
        a = rng.random((7, 5))
        b = rng.random((5, 3))
        assert np.abs(matmul(a, b) - naive_matmul(a, b)).max() <= 1e-12

    def test_shape_error_names_both_operands(self):
        with pytest.raises(ShapeError, match=r"2x3.*4x2"):
            matmul(np.ones((2, 3)), np.ones((4, 2)))

    def test_associativity(self):
        rng = np.random.default_rng(1)
        a, b, c = rng.random((6, 4)), rng.random((4, 5)), rng.random((5, 3))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        assert np.abs(left - right).max() <= 1e-10 * np.abs(left).max()

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError, match="non-finite"):
            matmul([[np.nan, 1.0]], [[1.0], [1.0]])


class TestSvd:
    def test_identity_matrix(self):
        res = svd(np.eye(4))
        assert np.allclose(res.sigma, np.ones(4))

    def test_diagonal_matrix(self):
        res = svd(np.diag([3.0, 2.0]))
        assert np.allclose(res.sigma, [3.0, 2.0])
        # Columns of u and v are signed permutations of identity columns;
        # the sign convention makes them exactly the identity here.
        assert np.allclose(res.u, np.eye(2), atol=1e-12)
        assert np.allclose(res.v, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_reconstruction_oracle_100x32(self, seed):
        a = np.random.default_rng(seed).random((100, 32))
        res = svd(a)
        rel = np.linalg.norm(a - res.reconstruct()) / np.linalg.norm(a)
        assert rel <= 1e-8

    def test_orthonormality(self):
        a = np.random.default_rng(3).random((40, 12))
        res = svd(a)
        assert np.abs(res.u.T @ res.u - np.eye(12)).max() <= 1e-10
        assert np.abs(res.v.T @ res.v - np.eye(12)).max() <= 1e-10

    def test_sigma_sorted_nonnegative(self):
        res = svd(np.random.default_rng(4).random((10, 6)))
        assert np.all(res.sigma >= 0)
        assert np.all(np.diff(res.sigma) <= 0)

    def test_transpose_has_same_singular_values(self):
        a = np.random.default_rng(5).random((9, 13))
        s1 = svd(a).sigma
        s2 = svd(a.T).sigma
        assert np.abs(s1 - s2).max() <= 1e-10 * s1[0]

    def test_matches_numpy_singular_values(self):
        a = np.random.default_rng(6).random((25, 10)) - 0.3
        expected = np.linalg.svd(a, compute_uv=False)
        assert np.abs(svd(a).sigma - expected).max() <= 1e-10 * expected[0]

    def test_rank_deficient_stays_orthonormal(self):
        rng = np.random.default_rng(7)
        a = rng.random((6, 2)) @ rng.random((2, 4))
        res = svd(a)
        assert np.abs(res.u.T @ res.u - np.eye(4)).max() <= 1e-10
        assert res.sigma[2] <= 1e-10 * res.sigma[0]
        rel = np.linalg.norm(a - res.reconstruct()) / np.linalg.norm(a)
        assert rel <= 1e-8

    def test_deterministic(self):
        a = np.random.default_rng(8).random((12, 7))
        r1, r2 = svd(a), svd(a)
        assert np.array_equal(r1.u, r2.u)
        assert np.array_equal(r1.sigma, r2.sigma)
        assert np.array_equal(r1.v, r2.v)

    def test_wide_matrix(self):
        a = np.random.default_rng(9).random((4, 11))
        res = svd(a)
        assert res.u.shape == (4, 4)
        assert res.v.shape == (11, 4)
        assert np.linalg.norm(a - res.reconstruct()) <= 1e-10 * np.linalg.norm(a)

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            svd([[1.0, np.inf], [0.0, 1.0]])


def penrose_defects(a, p):
    return (
        np.abs(a @ p @ a - a).max(),
        np.abs(p @ a @ p - p).max(),
        np.abs(a @ p - (a @ p).T).max(),
        np.abs(p @ a - (p @ a).T).max(),
    )


class TestPinv:
    def test_diagonal_inverse(self):
        p = pinv(np.diag([2.0, 4.0]))
        assert np.allclose(p, np.diag([0.5, 0.25]), atol=1e-12)

    def test_zero_matrix(self):
        p = pinv(np.zeros((2, 3)))
        assert p.shape == (3, 2)
        assert np.all(p == 0.0)

    def test_penrose_conditions_rank_deficient(self):
        rng = np.random.default_rng(10)
        a = rng.random((6, 2)) @ rng.random((2, 4))
        p = pinv(a)
        assert max(penrose_defects(a, p)) <= 1e-8

    def test_double_pinv_full_rank(self):
        a = np.random.default_rng(11).random((8, 5)) + 0.1
        back = pinv(pinv(a))
        assert np.abs(back - a).max() <= 1e-8

    def test_rank_tol_must_be_positive(self):
        with pytest.raises(ValidationError):
            pinv(np.eye(2), rank_tol=0.0)


class TestSplitSections:
    def test_sign_split(self):
        pos, neg = split_sections([[1.0, -2.0]])
        assert np.array_equal(pos, [[1.0, 0.0]])
        assert np.array_equal(neg, [[0.0, 2.0]])

    def test_nonnegative_input(self):
        x = np.array([[0.5, 0.0], [2.0, 1.0]])
        pos, neg = split_sections(x)
        assert np.array_equal(pos, x)
        assert np.all(neg == 0.0)

    def test_reconstructs_exactly(self):
        x = np.random.default_rng(12).standard_normal((9, 9))
        pos, neg = split_sections(x)
        assert np.array_equal(pos - neg, x)
        assert np.all(pos >= 0) and np.all(neg >= 0)
        assert np.all(pos * neg == 0.0)

    def test_disjoint_support_norm_identity(self):
        x = np.random.default_rng(13).standard_normal((7, 5))
        pos, neg = split_sections(x)
        total = np.sum(x * x)
        assert abs(np.sum(pos * pos) + np.sum(neg * neg) - total) <= 1e-12 * total


def test_svd_result_is_read_only():
    res = svd(np.random.default_rng(14).random((5, 4)))
    assert isinstance(res, SvdResult)
    with pytest.raises(ValueError):
        res.u[0, 0] = 1.0
