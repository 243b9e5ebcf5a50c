"""CART tree growing shared by decision_tree, forests, boosting, and stumps.

Splits come from the kernel backend's exhaustive search: Gini impurity for
class labels, SSE for regression targets, candidate thresholds at midpoints
of consecutive distinct sorted values, ties broken by (feature, threshold)
ascending.  Nodes are expanded depth-first (left child first); when a feature
subset is requested it is drawn from the tree's rng at each expanded node in
that order, which pins forest structure to the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fraudbench import _kernels


@dataclass
class Tree:
    """Array-encoded binary tree; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]


def grow_tree(
    x,
    y=None,
    *,
    target=None,
    weights=None,
    max_depth: int,
    n_sub_features: int | None = None,
    rng=None,
):
    """Grow a CART tree on labels ``y`` (Gini) or on ``target`` (SSE).

    Leaf values are the (weighted) fraud fraction for classification and the
    target mean for regression.  min-leaf is fixed at 1.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    m, d = x.shape
    classify = target is None
    if classify:
        y = np.ascontiguousarray(y, dtype=np.int64)
    else:
        target = np.ascontiguousarray(target, dtype=np.float64)
    if weights is not None:
        weights = np.ascontiguousarray(weights, dtype=np.float64)

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    def leaf_value(idx):
        if not classify:
            return float(np.mean(target[idx]))
        if weights is None:
            return float(np.mean(y[idx] == 1))
        wsum = float(np.sum(weights[idx]))
        if wsum <= 0.0:
            return float(np.mean(y[idx] == 1))
        return float(np.sum(weights[idx] * (y[idx] == 1))) / wsum

    root = new_node()
    stack = [(root, np.arange(m, dtype=np.int64), 0)]
    while stack:
        nid, idx, depth = stack.pop()
        value[nid] = leaf_value(idx)
        if depth >= max_depth or idx.size < 2:
            continue
        if classify:
            if y[idx][0] == y[idx][-1] and (y[idx] == y[idx][0]).all():
                continue
        elif (target[idx] == target[idx][0]).all():
            continue

        if n_sub_features is not None and n_sub_features < d:
            cols = np.sort(rng.generator.choice(d, size=n_sub_features, replace=False))
            xs = np.ascontiguousarray(x[np.ix_(idx, cols)])
        else:
            cols = None
            xs = np.ascontiguousarray(x[idx])
        if classify:
            w_node = None if weights is None else np.ascontiguousarray(weights[idx])
            feat, thr, _ = _kernels.best_split_gini(xs, np.ascontiguousarray(y[idx]), w_node)
        else:
            feat, thr, _ = _kernels.best_split_sse(xs, np.ascontiguousarray(target[idx]))
        if feat < 0:
            continue
        gfeat = int(feat) if cols is None else int(cols[feat])
        mask = x[idx, gfeat] <= thr
        lid = new_node()
        rid = new_node()
        feature[nid] = gfeat
        threshold[nid] = thr
        left[nid] = lid
        right[nid] = rid
        stack.append((rid, idx[~mask], depth + 1))
        stack.append((lid, idx[mask], depth + 1))

    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.float64),
    )


def apply_tree(tree: Tree, x) -> np.ndarray:
    """Leaf node id for every row of ``x`` (vectorized level-by-level walk)."""
    x = np.asarray(x, dtype=np.float64)
    node = np.zeros(x.shape[0], dtype=np.int64)
    while True:
        feat = tree.feature[node]
        active = feat >= 0
        if not active.any():
            return node
        rows = np.flatnonzero(active)
        go_left = x[rows, feat[rows]] <= tree.threshold[node[rows]]
        node[rows] = np.where(go_left, tree.left[node[rows]], tree.right[node[rows]])


def tree_values(tree: Tree, x) -> np.ndarray:
    return tree.value[apply_tree(tree, x)]
