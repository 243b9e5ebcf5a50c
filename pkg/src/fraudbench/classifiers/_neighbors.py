"""k-nearest-neighbour classification with exact, documented tie-breaking.

Neighbours are ordered by (squared Euclidean distance, training-row index);
the squared distance is computed by the |a|^2 - 2ab + |b|^2 expansion so the
heavy part is a BLAS matmul.  Prediction is the majority of the k nearest,
ties toward the normal class.
"""

from __future__ import annotations

import numpy as np

from fraudbench.errors import ContractError


def train_knn(params, x, y, rng):
    k = int(params["k"])
    if k < 1:
        raise ContractError(f"knn needs k >= 1, got {k}")
    if x.shape[0] < k:
        raise ContractError(f"knn with k={k} needs at least k training rows, got {x.shape[0]}")
    return {"x": x, "y": y, "k": k, "norms": np.sum(x * x, axis=1)}


def score_knn(state, x):
    """Fraction of the k nearest training rows labeled fraud, per query row."""
    train = state["x"]
    y = state["y"]
    k = state["k"]
    n_train = train.shape[0]
    out = np.empty(x.shape[0])
    chunk = max(1, 4_194_304 // max(n_train, 1))
    for start in range(0, x.shape[0], chunk):
        q = x[start : start + chunk]
        d2 = np.sum(q * q, axis=1)[:, None] - 2.0 * (q @ train.T) + state["norms"][None, :]
        for i, row in enumerate(d2):
            out[start + i] = float(np.mean(y[_k_nearest(row, k)]))
    return out


def _k_nearest(d2_row, k):
    """Indices of the k nearest by (distance, index), exactly."""
    if d2_row.shape[0] == k:
        return np.arange(k)
    kth = np.partition(d2_row, k - 1)[k - 1]
    cand = np.flatnonzero(d2_row <= kth)  # all boundary ties included
    if cand.shape[0] > k:
        cand = cand[np.argsort(d2_row[cand], kind="stable")[:k]]
    return cand
