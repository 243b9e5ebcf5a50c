"""Pure-numpy implementations of the hot kernels.

Fallback used when the compiled extension (``_ckernels``) is unavailable or
when ``FRAUDBENCH_KERNELS=python`` is set.  Call signatures and semantics are
identical to the compiled module.  The split-search kernels are bit-identical
to the compiled ones (integer/sequential-cumsum arithmetic, same expressions);
the iterative kernels (Jacobi, online linear epochs) agree to rounding because
dot products are accumulated in a different order.
"""

import math

import numpy as np


def jacobi_orthogonalize(a, v, max_sweeps, tol):
    """One-sided Jacobi column orthogonalization, in place.

    Applies plane rotations to column pairs of ``a`` (n x m, Fortran order)
    until all pairs are relatively orthogonal within ``tol``, accumulating the
    same rotations into ``v`` (m x m, identity on entry).  On exit
    ``a_in @ v == a_out`` and the columns of ``a_out`` are orthogonal.

    Returns (sweeps_used, worst_offdiag) where worst_offdiag is the largest
    |a_p . a_q| / (|a_p| |a_q|) seen during the final sweep.
    """
    m = a.shape[1]
    off = 0.0
    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(m - 1):
            for q in range(p + 1, m):
                ap = a[:, p]
                aq = a[:, q]
                alpha = float(ap @ ap)
                beta = float(aq @ aq)
                gamma = float(ap @ aq)
                if alpha == 0.0 or beta == 0.0:
                    continue
                rel = abs(gamma) / math.sqrt(alpha * beta)
                if rel > off:
                    off = rel
                if rel <= tol:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                a[:, p] = new_p
                new_vp = c * v[:, p] - s * v[:, q]
                v[:, q] = s * v[:, p] + c * v[:, q]
                v[:, p] = new_vp
        if off <= tol:
            return sweep, off
    return max_sweeps, off


def best_split_gini(x, y, w):
    """Exhaustive best Gini split over the columns of ``x``.

    x : (m, f) float64, C-contiguous; y : (m,) int64 in {0, 1};
    w : (m,) float64 sample weights or None for unit weights.

    Candidate thresholds sit at midpoints between consecutive distinct sorted
    values; the score is the weight-weighted sum of child Gini impurities
    (scaled by total weight, constant per node, so comparisons are unchanged).
    Ties are broken by (feature index, threshold) ascending.  Returns
    (feature, threshold, score) with feature == -1 when no valid split exists.
    """
    m, nf = x.shape
    best_feat = -1
    best_thr = 0.0
    best_score = np.inf
    for j in range(nf):
        col = x[:, j]
        order = np.argsort(col, kind="stable")
        v = col[order]
        boundary = v[:-1] != v[1:]
        if not boundary.any():
            continue
        yo = y[order]
        if w is None:
            cum1 = np.cumsum(yo)
            tot = float(m)
            tot1 = float(cum1[-1])
            wl = np.arange(1, m, dtype=np.float64)
            wl1 = cum1[:-1].astype(np.float64)
            wr = tot - wl
            wr1 = tot1 - wl1
            valid = boundary
        else:
            wo = w[order]
            cumw = np.cumsum(wo)
            cumw1 = np.cumsum(wo * yo)
            tot = float(cumw[-1])
            tot1 = float(cumw1[-1])
            wl = cumw[:-1]
            wl1 = cumw1[:-1]
            wr = tot - wl
            wr1 = tot1 - wl1
            valid = boundary & (wl > 0.0) & (wr > 0.0)
        wl0 = wl - wl1
        wr0 = wr - wr1
        dl = np.where(wl > 0.0, wl, 1.0)
        dr = np.where(wr > 0.0, wr, 1.0)
        score = (wl - (wl0 * wl0 + wl1 * wl1) / dl) + (wr - (wr0 * wr0 + wr1 * wr1) / dr)
        score = np.where(valid, score, np.inf)
        i = int(np.argmin(score))
        if score[i] < best_score:
            best_score = float(score[i])
            best_feat = j
            best_thr = _midpoint(v[i], v[i + 1])
    return best_feat, best_thr, best_score


def best_split_sse(x, t):
    """Exhaustive best sum-of-squared-error split for regression targets.

    Same conventions as best_split_gini; score is SSE(left) + SSE(right).
    """
    m, nf = x.shape
    best_feat = -1
    best_thr = 0.0
    best_score = np.inf
    for j in range(nf):
        col = x[:, j]
        order = np.argsort(col, kind="stable")
        v = col[order]
        boundary = v[:-1] != v[1:]
        if not boundary.any():
            continue
        to = t[order]
        cs = np.cumsum(to)
        cq = np.cumsum(to * to)
        s_tot = float(cs[-1])
        q_tot = float(cq[-1])
        nl = np.arange(1, m, dtype=np.float64)
        nr = float(m) - nl
        sl = cs[:-1]
        ql = cq[:-1]
        sr = s_tot - sl
        qr = q_tot - ql
        score = (ql - sl * sl / nl) + (qr - sr * sr / nr)
        score = np.where(boundary, score, np.inf)
        i = int(np.argmin(score))
        if score[i] < best_score:
            best_score = float(score[i])
            best_feat = j
            best_thr = _midpoint(v[i], v[i + 1])
    return best_feat, best_thr, best_score


def _midpoint(lo, hi):
    # overflow-safe; clamp so that (x <= thr) keeps exactly the left block
    thr = lo + 0.5 * (hi - lo)
    if thr >= hi:
        thr = lo
    return float(thr)


def linear_epoch(xb, ys, norms2, w, order, variant, lr, t):
    """One pass of an online linear learner over ``order``.

    xb : (n, d) float64 with the bias column already appended; ys : (n,) +-1;
    norms2 : precomputed row squared norms (used by passive-aggressive);
    w : (d,) weights updated in place; variant : 0 perceptron, 1 passive-
    aggressive, 2 hinge SGD with step lr/sqrt(t); t : step counter carried
    across epochs (incremented per visited sample for variant 2).

    Returns the updated step counter.
    """
    for k in range(order.shape[0]):
        i = int(order[k])
        x = xb[i]
        yi = float(ys[i])
        margin = yi * float(x @ w)
        if variant == 0:
            if margin <= 0.0:
                w += yi * x
        elif variant == 1:
            loss = 1.0 - margin
            if loss > 0.0:
                w += (loss / float(norms2[i])) * yi * x
        else:
            t += 1
            if margin < 1.0:
                w += (lr / math.sqrt(t)) * yi * x
    return t
