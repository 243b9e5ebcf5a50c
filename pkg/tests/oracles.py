"""Independent brute-force oracles used to freeze expected values.

These deliberately avoid the library's own code paths: plain python loops,
exhaustive enumeration, and direct formula evaluation.  Where a documented
tie rule depends on float values (stump scores), the oracle evaluates the
same arithmetic expression the contract documents, but through its own
enumeration order and bookkeeping.
"""

import numpy as np


def brute_knn_predict(train_x, train_y, queries, k):
    """All-pairs scan: neighbours by (squared distance, row index), majority
    vote with ties to the normal class."""
    preds = []
    for q in queries:
        d2 = [(float(np.dot(q - x, q - x)), j) for j, x in enumerate(train_x)]
        d2.sort()
        votes = [int(train_y[j]) for _, j in d2[:k]]
        preds.append(1 if sum(votes) > k - sum(votes) else 0)
    return np.array(preds, dtype=np.int64)


def stump_score(n_left, c1_left, n_right, c1_right, w_left=None, w1_left=None,
                w_right=None, w1_right=None):
    """The documented split score: weight-scaled sum of child Gini impurities."""
    if w_left is None:
        wl, wl1, wr, wr1 = float(n_left), float(c1_left), float(n_right), float(c1_right)
    else:
        wl, wl1, wr, wr1 = w_left, w1_left, w_right, w1_right
    wl0 = wl - wl1
    wr0 = wr - wr1
    return (wl - (wl0 * wl0 + wl1 * wl1) / wl) + (wr - (wr0 * wr0 + wr1 * wr1) / wr)


def enumerate_best_stump(x, y, weights=None):
    """Exhaustive enumeration of every (feature, midpoint) candidate.

    Returns (feature, threshold, score) with the documented tie rule:
    strictly better scores win, scanned in (feature, threshold) ascending
    order.  Returns (-1, 0.0, inf) when no feature has two distinct values.
    """
    m, d = x.shape
    best = (-1, 0.0, float("inf"))
    for j in range(d):
        values = sorted(set(float(v) for v in x[:, j]))
        for lo, hi in zip(values, values[1:]):
            thr = lo + 0.5 * (hi - lo)
            if thr >= hi:
                thr = lo
            left = x[:, j] <= thr
            if weights is None:
                score = stump_score(
                    int(left.sum()), int(np.sum(y[left] == 1)),
                    int(m - left.sum()), int(np.sum(y[~left] == 1)),
                )
            else:
                wl = float(np.sum(weights[left]))
                wr = float(np.sum(weights[~left]))
                if wl <= 0.0 or wr <= 0.0:
                    continue
                score = stump_score(
                    None, None, None, None,
                    wl, float(np.sum(weights[left] * (y[left] == 1))),
                    wr, float(np.sum(weights[~left] * (y[~left] == 1))),
                )
            if score < best[2]:
                best = (j, thr, score)
    return best


def segment_residual(point, start, end):
    """Euclidean distance from a point to the segment [start, end]."""
    delta = end - start
    denom = float(np.dot(delta, delta))
    if denom == 0.0:
        return float(np.linalg.norm(point - start))
    t = float(np.dot(point - start, delta)) / denom
    t = min(max(t, 0.0), 1.0)
    return float(np.linalg.norm(point - (start + t * delta)))


def min_segment_residual(point, x_minority, neighbour_lists):
    """Smallest residual over every (minority point, one of its k neighbours)
    segment; SMOTE/ADASYN output must sit on one of these."""
    best = float("inf")
    for i, neighbours in enumerate(neighbour_lists):
        for j in neighbours:
            best = min(best, segment_residual(point, x_minority[i], x_minority[j]))
    return best


def minority_neighbour_lists(x_min, k):
    """k nearest neighbours within the minority class by (distance, index)."""
    lists = []
    for i, p in enumerate(x_min):
        d2 = [
            (float(np.dot(p - q, p - q)), j)
            for j, q in enumerate(x_min)
            if j != i
        ]
        d2.sort()
        lists.append([j for _, j in d2[:k]])
    return lists
