"""Tree ensembles: bagged forest, discrete/real AdaBoost, gradient boosting.

Every ensemble derives a child random stream per tree, so per-tree work could
be parallelized without changing results; training here is sequential.
AdaBoost tracks its cumulative 0/1 training error per round (exposed in the
model state), which the acceptance suite uses for the monotonicity property.
"""

from __future__ import annotations

import math

import numpy as np

from fraudbench.classifiers._linear import _sigmoid
from fraudbench.classifiers._trees import grow_tree, apply_tree, tree_values

_ERR_CLAMP = 1e-16
_PROB_CLIP = 1e-12


def train_random_forest(params, x, y, rng):
    """Bagged CART trees on bootstrap samples, sqrt(d) feature subsets per split."""
    n_trees = int(params["n_trees"])
    max_depth = int(params["max_depth"])
    n, d = x.shape
    n_sub = max(1, int(math.sqrt(d)))
    trees = []
    for i in range(n_trees):
        child = rng.derive_child(f"tree-{i}")
        boot = child.generator.integers(0, n, size=n)
        trees.append(
            grow_tree(
                x[boot],
                y[boot],
                max_depth=max_depth,
                n_sub_features=n_sub,
                rng=child,
            )
        )
    return {"trees": trees}


def score_random_forest(state, x):
    """Fraction of trees voting fraud (hard majority vote)."""
    votes = np.zeros(x.shape[0])
    for tree in state["trees"]:
        votes += tree_values(tree, x) > 0.5
    return votes / len(state["trees"])


def _majority(y):
    frauds = int(np.sum(y == 1))
    return 1 if frauds > y.shape[0] - frauds else 0


def train_adaboost_discrete(params, x, y, rng):
    """SAMME with depth-1 stumps on reweighted data.

    Stops early on weighted error 0 (stump kept, error clamped for its alpha)
    or >= 0.5 (stump discarded).  If no stump is ever accepted the model
    degrades to the constant majority predictor.
    """
    rounds = int(params["rounds"])
    n = x.shape[0]
    w = np.full(n, 1.0 / n)
    agg = np.zeros(n)
    stumps, alphas, staged = [], [], []
    for _ in range(rounds):
        stump = grow_tree(x, y, weights=w, max_depth=1)
        h = (tree_values(stump, x) > 0.5).astype(np.int64)
        miss = h != y
        err = float(np.sum(w[miss]))
        if err >= 0.5:
            break
        alpha = math.log((1.0 - max(err, _ERR_CLAMP)) / max(err, _ERR_CLAMP))
        stumps.append(stump)
        alphas.append(alpha)
        agg += alpha * (2.0 * h - 1.0)
        staged.append(float(np.mean((agg > 0.0).astype(np.int64) != y)))
        if err == 0.0:
            break
        w = w * np.exp(alpha * miss)
        w = w / np.sum(w)
    if not stumps:
        return {"constant": _majority(y)}
    return {"stumps": stumps, "alphas": alphas, "staged_train_error": staged}


def score_adaboost_discrete(state, x):
    """Signed vote aggregate (margin)."""
    if "constant" in state:
        return np.full(x.shape[0], 1.0 if state["constant"] == 1 else -1.0)
    agg = np.zeros(x.shape[0])
    for stump, alpha in zip(state["stumps"], state["alphas"]):
        agg += alpha * (2.0 * (tree_values(stump, x) > 0.5) - 1.0)
    return agg


def train_adaboost_real(params, x, y, rng):
    """SAMME.R with class-probability stumps (binary form).

    Each stump contributes half the log-odds of its leaf fraud probability;
    weights update by exp(-y~ * h).  Early-stop rule mirrors the discrete
    variant, judged on the stump's hard predictions.
    """
    rounds = int(params["rounds"])
    n = x.shape[0]
    ys = 2.0 * y - 1.0
    w = np.full(n, 1.0 / n)
    agg = np.zeros(n)
    stumps, staged = [], []
    for _ in range(rounds):
        stump = grow_tree(x, y, weights=w, max_depth=1)
        p = np.clip(tree_values(stump, x), _PROB_CLIP, 1.0 - _PROB_CLIP)
        err = float(np.sum(w[(p > 0.5).astype(np.int64) != y]))
        if err >= 0.5:
            break
        stumps.append(stump)
        h = 0.5 * (np.log(p) - np.log1p(-p))
        agg += h
        staged.append(float(np.mean((agg > 0.0).astype(np.int64) != y)))
        if err == 0.0:
            break
        w = w * np.exp(-ys * h)
        w = w / np.sum(w)
    if not stumps:
        return {"constant": _majority(y)}
    return {"stumps": stumps, "staged_train_error": staged}


def score_adaboost_real(state, x):
    """sigmoid(2F): F aggregates half-log-odds, so one stump scores its own p."""
    if "constant" in state:
        return np.full(x.shape[0], 1.0 if state["constant"] == 1 else 0.0)
    agg = np.zeros(x.shape[0])
    for stump in state["stumps"]:
        p = np.clip(tree_values(stump, x), _PROB_CLIP, 1.0 - _PROB_CLIP)
        agg += 0.5 * (np.log(p) - np.log1p(-p))
    return _sigmoid(2.0 * agg)


def train_gradient_boosting(params, x, y, rng):
    """Friedman gradient boosting with logistic loss.

    Depth-limited SSE regression trees fit the residual y - p; leaf values
    are replaced by the Newton step sum(r)/sum(p(1-p)); the initial score is
    the log-odds of the training prior.
    """
    stages = int(params["stages"])
    depth = int(params["depth"])
    lr = float(params["learning_rate"])
    prior = float(np.mean(y))
    f0 = math.log(prior / (1.0 - prior))
    f = np.full(x.shape[0], f0)
    trees = []
    for _ in range(stages):
        p = _sigmoid(f)
        residual = y - p
        tree = grow_tree(x, target=residual, max_depth=depth)
        leaves = apply_tree(tree, x)
        num = np.zeros(tree.n_nodes)
        den = np.zeros(tree.n_nodes)
        np.add.at(num, leaves, residual)
        np.add.at(den, leaves, p * (1.0 - p))
        gamma = np.where(den > 1e-150, num / np.where(den > 1e-150, den, 1.0), 0.0)
        tree.value = gamma
        f = f + lr * gamma[leaves]
        trees.append(tree)
    return {"f0": f0, "lr": lr, "trees": trees}


def score_gradient_boosting(state, x):
    f = np.full(x.shape[0], state["f0"])
    for tree in state["trees"]:
        f += state["lr"] * tree_values(tree, x)
    return _sigmoid(f)
