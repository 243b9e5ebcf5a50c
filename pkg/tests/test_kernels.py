"""Backend agreement: the pure-numpy fallback vs the compiled kernels.

Split searches must be bit-identical (same expressions, same accumulation
order); the iterative kernels are allowed rounding-level divergence because
their dot products accumulate differently.
"""

import numpy as np
import pytest

from fraudbench._kernels import _pykernels

_ckernels = pytest.importorskip(
    "fraudbench._kernels._ckernels", reason="compiled kernels unavailable"
)


def _random_case(seed, m=120, d=4, quantized=False):
    gen = np.random.default_rng(seed)
    x = gen.normal(size=(m, d))
    if quantized:
        x = np.round(x * 2.0) / 2.0  # heavy value ties
    y = (gen.random(m) < 0.35).astype(np.int64)
    if y.sum() == 0:
        y[0] = 1
    return np.ascontiguousarray(x), y, gen


@pytest.mark.parametrize("quantized", [False, True])
@pytest.mark.parametrize("seed", range(6))
def test_gini_split_bit_identical_unweighted(seed, quantized):
    x, y, _ = _random_case(seed, quantized=quantized)
    assert _pykernels.best_split_gini(x, y, None) == _ckernels.best_split_gini(x, y, None)


@pytest.mark.parametrize("quantized", [False, True])
@pytest.mark.parametrize("seed", range(6))
def test_gini_split_bit_identical_weighted(seed, quantized):
    x, y, gen = _random_case(seed, quantized=quantized)
    w = gen.random(x.shape[0])
    w /= w.sum()
    assert _pykernels.best_split_gini(x, y, w) == _ckernels.best_split_gini(x, y, w)


@pytest.mark.parametrize("seed", range(6))
def test_sse_split_bit_identical(seed):
    x, _, gen = _random_case(seed)
    t = gen.normal(size=x.shape[0])
    assert _pykernels.best_split_sse(x, t) == _ckernels.best_split_sse(x, t)


def test_split_none_when_all_columns_constant():
    x = np.ones((10, 3))
    y = np.array([0, 1] * 5, dtype=np.int64)
    for impl in (_pykernels, _ckernels):
        feat, _, score = impl.best_split_gini(x, y, None)
        assert feat == -1 and score == np.inf


def _jacobi_run(impl, m):
    a = np.array(m, order="F", copy=True)
    v = np.asfortranarray(np.eye(m.shape[1]))
    sweeps, off = impl.jacobi_orthogonalize(a, v, 100, 1e-12)
    assert off <= 1e-12
    return np.sort(np.sqrt(np.sum(a * a, axis=0)))[::-1]


@pytest.mark.parametrize("shape", [(6, 3), (20, 5), (50, 8)])
def test_jacobi_backends_agree(shape):
    m = np.random.default_rng(0).normal(size=shape)
    s_py = _jacobi_run(_pykernels, m)
    s_cy = _jacobi_run(_ckernels, m)
    np.testing.assert_allclose(s_py, s_cy, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("variant", [0, 1, 2])
def test_linear_epoch_backends_agree(variant):
    gen = np.random.default_rng(9)
    xb = np.ascontiguousarray(gen.normal(size=(60, 5)))
    ys = np.where(gen.random(60) < 0.5, -1.0, 1.0)
    norms2 = np.sum(xb * xb, axis=1)
    orders = [gen.permutation(60).astype(np.int64) for _ in range(3)]

    results = []
    for impl in (_pykernels, _ckernels):
        w = np.zeros(5)
        t = 0
        for order in orders:
            t = impl.linear_epoch(xb, ys, norms2, w, order, variant, 0.01, t)
        results.append((w.copy(), t))
    np.testing.assert_allclose(results[0][0], results[1][0], rtol=1e-9, atol=1e-12)
    assert results[0][1] == results[1][1]
