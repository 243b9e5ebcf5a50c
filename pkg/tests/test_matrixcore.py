import numpy as np
import pytest

from fraudbench.errors import ContractError
from fraudbench.matrixcore import RandomSource, as_matrix, derive_child, svd


def reconstruction_error(m, result):
    rec = result.u @ np.diag(result.s) @ result.vt
    denom = np.linalg.norm(m)
    return np.linalg.norm(rec - m) / (denom if denom > 0 else 1.0)


def orthonormality_error(result):
    k = result.s.shape[0]
    eu = np.abs(result.u.T @ result.u - np.eye(k)).max()
    ev = np.abs(result.vt @ result.vt.T - np.eye(k)).max()
    return max(eu, ev)


class TestAsMatrix:
    def test_accepts_nested_lists(self):
        m = as_matrix([[1.0, 2.0], [3.0, 4.0]])
        assert m.shape == (2, 2) and m.dtype == np.float64

    def test_flat_values_with_shape(self):
        m = as_matrix([1, 2, 3, 4, 5, 6], rows=2, cols=3)
        assert m.shape == (2, 3)
        assert m[1, 0] == 4.0

    def test_rejects_length_mismatch(self):
        with pytest.raises(ContractError, match="2x3"):
            as_matrix([1, 2, 3, 4], rows=2, cols=3)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ContractError, match="non-finite"):
            as_matrix([[1.0, bad], [0.0, 2.0]])

    def test_rejects_non_numeric(self):
        with pytest.raises(ContractError):
            as_matrix([["a", "b"]])

    def test_rejects_empty(self):
        with pytest.raises(ContractError):
            as_matrix(np.zeros((0, 3)))


class TestSvd:
    def test_identity(self):
        result = svd(np.eye(3))
        np.testing.assert_allclose(result.s, [1.0, 1.0, 1.0])

    def test_diagonal_values_sorted(self):
        result = svd(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(result.s, [3.0, 2.0])
        # signed-permutation identity under the sign convention
        np.testing.assert_allclose(result.u, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(result.vt, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("shape", [(5, 3), (3, 5), (4, 4), (7, 2), (1, 4), (6, 1)])
    def test_reconstruction_and_orthonormality(self, shape):
        for seed in range(3):
            m = np.random.default_rng(seed).normal(size=shape)
            result = svd(m)
            assert reconstruction_error(m, result) <= 1e-8
            assert orthonormality_error(result) <= 1e-8
            assert (result.s >= 0).all()
            assert (np.diff(result.s) <= 1e-12).all()

    def test_matches_eigendecomposition_oracle(self):
        # singular values vs an independent eigen-solve of M^T M, up to 6x6
        for seed in range(10):
            gen = np.random.default_rng(100 + seed)
            rows = int(gen.integers(1, 7))
            cols = int(gen.integers(1, 7))
            m = gen.normal(size=(rows, cols)) * 3.0
            expected = np.sqrt(np.maximum(np.linalg.eigvalsh(m.T @ m)[::-1], 0.0))
            got = np.zeros(cols)
            got[: min(rows, cols)] = svd(m).s
            np.testing.assert_allclose(got, expected, atol=1e-6)

    def test_rank_deficient_still_orthonormal(self):
        col = np.arange(5.0)
        m = np.column_stack([col, col, col * 2.0])
        result = svd(m)
        assert result.s[1] <= 1e-10 and result.s[2] <= 1e-10
        assert orthonormality_error(result) <= 1e-8
        assert reconstruction_error(m, result) <= 1e-8

    def test_zero_matrix(self):
        result = svd(np.zeros((4, 3)))
        np.testing.assert_allclose(result.s, 0.0)
        assert orthonormality_error(result) <= 1e-8

    def test_sign_convention_largest_entry_positive(self):
        for seed in range(5):
            m = np.random.default_rng(seed).normal(size=(6, 4))
            result = svd(m)
            for row in result.vt:
                assert row[int(np.argmax(np.abs(row)))] > 0

    def test_deterministic(self):
        m = np.random.default_rng(5).normal(size=(8, 4))
        a, b = svd(m), svd(m)
        assert np.array_equal(a.u, b.u)
        assert np.array_equal(a.s, b.s)
        assert np.array_equal(a.vt, b.vt)

    def test_rejects_nan(self):
        with pytest.raises(ContractError):
            svd(np.array([[1.0, np.nan]]))


class TestRandomSource:
    def test_same_seed_label_same_stream(self):
        a = RandomSource(7).derive_child("fold-0").generator.random(100)
        b = RandomSource(7).derive_child("fold-0").generator.random(100)
        assert np.array_equal(a, b)

    def test_labels_independent(self):
        a = RandomSource(7).derive_child("fold-0").generator.random(100)
        b = RandomSource(7).derive_child("fold-1").generator.random(100)
        assert not np.array_equal(a, b)

    def test_seeds_independent(self):
        a = RandomSource(7).derive_child("x").generator.random(100)
        b = RandomSource(8).derive_child("x").generator.random(100)
        assert not np.array_equal(a, b)

    def test_child_unaffected_by_parent_consumption(self):
        parent = RandomSource(3)
        parent.generator.random(1000)
        consumed = parent.derive_child("c").generator.random(10)
        fresh = RandomSource(3).derive_child("c").generator.random(10)
        assert np.array_equal(consumed, fresh)

    def test_grandchildren_distinct(self):
        root = RandomSource(1)
        a = derive_child(derive_child(root, "a"), "b").generator.random(10)
        b = derive_child(derive_child(root, "b"), "a").generator.random(10)
        assert not np.array_equal(a, b)

    @pytest.mark.parametrize("bad", [-1, 2**64, 1.5, "7"])
    def test_rejects_bad_seeds(self, bad):
        with pytest.raises(ContractError):
            RandomSource(bad)
