# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Mirrors fraudbench._kernels._pykernels function for function.  The split
searches use the exact same arithmetic expressions as the numpy fallback so
both backends return bit-identical (feature, threshold, score) triples; the
iterative kernels differ only in dot-product accumulation order.

Compiled with default IEEE semantics on purpose: no -ffast-math, results must
be reproducible.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt, INFINITY

cnp.import_array()


def jacobi_orthogonalize(double[::1, :] a, double[::1, :] v, int max_sweeps, double tol):
    """See _pykernels.jacobi_orthogonalize."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = a.shape[1]
    cdef Py_ssize_t i, p, q
    cdef int sweep
    cdef double alpha, beta, gamma, rel, zeta, t, c, s, off, api, aqi
    off = 0.0
    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(m - 1):
            for q in range(p + 1, m):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for i in range(n):
                    api = a[i, p]
                    aqi = a[i, q]
                    alpha += api * api
                    beta += aqi * aqi
                    gamma += api * aqi
                if alpha == 0.0 or beta == 0.0:
                    continue
                rel = fabs(gamma) / sqrt(alpha * beta)
                if rel > off:
                    off = rel
                if rel <= tol:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = c * t
                for i in range(n):
                    api = a[i, p]
                    aqi = a[i, q]
                    a[i, p] = c * api - s * aqi
                    a[i, q] = s * api + c * aqi
                for i in range(m):
                    api = v[i, p]
                    aqi = v[i, q]
                    v[i, p] = c * api - s * aqi
                    v[i, q] = s * api + c * aqi
        if off <= tol:
            return sweep, off
    return max_sweeps, off


cdef inline double _midpoint(double lo, double hi):
    cdef double thr = lo + 0.5 * (hi - lo)
    if thr >= hi:
        thr = lo
    return thr


def best_split_gini(double[:, ::1] x, cnp.int64_t[::1] y, w_obj):
    """See _pykernels.best_split_gini."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t nf = x.shape[1]
    cdef Py_ssize_t i, j, k
    cdef int best_feat = -1
    cdef double best_thr = 0.0
    cdef double best_score = INFINITY
    cdef double tot, tot1, wl, wl1, wl0, wr, wr1, wr0, score, wk
    cdef bint weighted = w_obj is not None
    cdef double[::1] w = np.empty(0, dtype=np.float64)
    if weighted:
        w = w_obj
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order
    cdef cnp.int64_t[::1] ov
    cdef double[::1] col = np.empty(m, dtype=np.float64)
    cdef cnp.int64_t[::1] yo = np.empty(m, dtype=np.int64)
    cdef double[::1] wo = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] colbuf = np.empty(m, dtype=np.float64)

    for j in range(nf):
        for i in range(m):
            colbuf[i] = x[i, j]
        order = np.argsort(colbuf, kind="stable")
        ov = order
        for i in range(m):
            k = ov[i]
            col[i] = x[k, j]
            yo[i] = y[k]
            if weighted:
                wo[i] = w[k]
        # totals via the same sequential accumulation as np.cumsum
        tot = 0.0
        tot1 = 0.0
        if weighted:
            for i in range(m):
                wk = wo[i]
                tot += wk
                tot1 += wk * yo[i]
        else:
            tot = <double> m
            k = 0
            for i in range(m):
                k += yo[i]
            tot1 = <double> k
        wl = 0.0
        wl1 = 0.0
        for i in range(m - 1):
            if weighted:
                wk = wo[i]
                wl += wk
                wl1 += wk * yo[i]
            else:
                wl = <double> (i + 1)
                wl1 += yo[i]
            if col[i] == col[i + 1]:
                continue
            wr = tot - wl
            wr1 = tot1 - wl1
            if weighted and (wl <= 0.0 or wr <= 0.0):
                continue
            wl0 = wl - wl1
            wr0 = wr - wr1
            score = (wl - (wl0 * wl0 + wl1 * wl1) / wl) + (wr - (wr0 * wr0 + wr1 * wr1) / wr)
            if score < best_score:
                best_score = score
                best_feat = <int> j
                best_thr = _midpoint(col[i], col[i + 1])
    return best_feat, best_thr, best_score


def best_split_sse(double[:, ::1] x, double[::1] t):
    """See _pykernels.best_split_sse."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t nf = x.shape[1]
    cdef Py_ssize_t i, j, k
    cdef int best_feat = -1
    cdef double best_thr = 0.0
    cdef double best_score = INFINITY
    cdef double s_tot, q_tot, sl, ql, sr, qr, nl, nr, score, tv
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order
    cdef cnp.int64_t[::1] ov
    cdef double[::1] col = np.empty(m, dtype=np.float64)
    cdef double[::1] to = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] colbuf = np.empty(m, dtype=np.float64)

    for j in range(nf):
        for i in range(m):
            colbuf[i] = x[i, j]
        order = np.argsort(colbuf, kind="stable")
        ov = order
        for i in range(m):
            k = ov[i]
            col[i] = x[k, j]
            to[i] = t[k]
        s_tot = 0.0
        q_tot = 0.0
        for i in range(m):
            tv = to[i]
            s_tot += tv
            q_tot += tv * tv
        sl = 0.0
        ql = 0.0
        for i in range(m - 1):
            tv = to[i]
            sl += tv
            ql += tv * tv
            if col[i] == col[i + 1]:
                continue
            nl = <double> (i + 1)
            nr = <double> m - nl
            sr = s_tot - sl
            qr = q_tot - ql
            score = (ql - sl * sl / nl) + (qr - sr * sr / nr)
            if score < best_score:
                best_score = score
                best_feat = <int> j
                best_thr = _midpoint(col[i], col[i + 1])
    return best_feat, best_thr, best_score


def linear_epoch(double[:, ::1] xb, double[::1] ys, double[::1] norms2,
                 double[::1] w, cnp.int64_t[::1] order, int variant,
                 double lr, long t):
    """See _pykernels.linear_epoch."""
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t d = xb.shape[1]
    cdef Py_ssize_t k, i, j
    cdef double margin, yi, loss, step
    for k in range(n):
        i = order[k]
        yi = ys[i]
        margin = 0.0
        for j in range(d):
            margin += xb[i, j] * w[j]
        margin *= yi
        if variant == 0:
            if margin <= 0.0:
                for j in range(d):
                    w[j] += yi * xb[i, j]
        elif variant == 1:
            loss = 1.0 - margin
            if loss > 0.0:
                step = loss / norms2[i]
                for j in range(d):
                    w[j] += step * yi * xb[i, j]
        else:
            t += 1
            if margin < 1.0:
                step = lr / sqrt(<double> t)
                for j in range(d):
                    w[j] += step * yi * xb[i, j]
    return t
