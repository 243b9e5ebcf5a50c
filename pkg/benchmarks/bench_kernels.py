"""Compare the compiled kernels against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py [--repeats N]

Times the kernel entry points on workloads shaped like the harness's hot
paths and reports the speedup.  Also cross-checks that both backends agree
on results before timing anything.
"""

import argparse
import time

import numpy as np

from fraudbench._kernels import _pykernels

try:
    from fraudbench._kernels import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_jacobi(impl, a):
    def run():
        work = np.array(a, order="F", copy=True)
        v = np.asfortranarray(np.eye(a.shape[1]))
        impl.jacobi_orthogonalize(work, v, 100, 1e-12)
        return work

    return run


def bench_split(impl, x, y, w):
    return lambda: impl.best_split_gini(x, y, w)


def bench_sse(impl, x, t):
    return lambda: impl.best_split_sse(x, t)


def bench_linear(impl, xb, ys, norms2, orders):
    def run():
        w = np.zeros(xb.shape[1])
        t = 0
        for order in orders:
            t = impl.linear_epoch(xb, ys, norms2, w, order, 2, 0.01, t)
        return w

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels are not available; nothing to compare")
        return

    gen = np.random.default_rng(0)
    jacobi_input = gen.normal(size=(20000, 23))
    split_x = np.ascontiguousarray(gen.normal(size=(20000, 23)))
    split_y = (gen.random(20000) < 0.2).astype(np.int64)
    split_w = gen.random(20000)
    split_w /= split_w.sum()
    sse_t = gen.normal(size=20000)
    xb = np.ascontiguousarray(gen.normal(size=(20000, 24)))
    ys = np.where(gen.random(20000) < 0.5, -1.0, 1.0)
    norms2 = np.sum(xb * xb, axis=1)
    orders = [gen.permutation(20000).astype(np.int64) for _ in range(5)]

    small_x = np.ascontiguousarray(split_x[:400, :5])
    small_y = split_y[:400]

    cases = [
        ("jacobi 20000x23", bench_jacobi(_pykernels, jacobi_input),
         bench_jacobi(_ckernels, jacobi_input)),
        ("gini split 20000x23", bench_split(_pykernels, split_x, split_y, None),
         bench_split(_ckernels, split_x, split_y, None)),
        ("gini split 400x5", bench_split(_pykernels, small_x, small_y, None),
         bench_split(_ckernels, small_x, small_y, None)),
        ("gini split weighted", bench_split(_pykernels, split_x, split_y, split_w),
         bench_split(_ckernels, split_x, split_y, split_w)),
        ("sse split 20000x23", bench_sse(_pykernels, split_x, sse_t),
         bench_sse(_ckernels, split_x, sse_t)),
        ("hinge sgd 5 epochs", bench_linear(_pykernels, xb, ys, norms2, orders),
         bench_linear(_ckernels, xb, ys, norms2, orders)),
    ]

    # agreement checks before timing
    assert _pykernels.best_split_gini(split_x, split_y, None) == _ckernels.best_split_gini(
        split_x, split_y, None
    )
    assert _pykernels.best_split_sse(split_x, sse_t) == _ckernels.best_split_sse(split_x, sse_t)
    s_py = np.sort(bench_jacobi(_pykernels, jacobi_input)().var(axis=0))
    s_cy = np.sort(bench_jacobi(_ckernels, jacobi_input)().var(axis=0))
    assert np.allclose(s_py, s_cy, rtol=1e-9)

    print(f"{'kernel':24s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, py_fn, cy_fn in cases:
        t_py = timed(py_fn, args.repeats)
        t_cy = timed(cy_fn, args.repeats)
        print(f"{name:24s} {t_py * 1e3:9.1f}ms {t_cy * 1e3:9.1f}ms {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
