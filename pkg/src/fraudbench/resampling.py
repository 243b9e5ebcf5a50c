"""Training-fold rebalancing: random under/over, SMOTE, ADASYN, instance hardness.

Every method preserves every original minority instance: undersampling only
removes majority rows (original order kept), oversampling only appends rows.
A request whose target ratio is already met returns the input unchanged.

SMOTE draws neighbours among the minority class only; ADASYN additionally
estimates local majority density over all classes to apportion the synthetic
budget (largest-remainder rounding, so totals are exact).  When every
minority neighbourhood is pure minority the ADASYN weights vanish and the
budget falls back to uniform apportionment rather than failing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from fraudbench.datasets import Dataset
from fraudbench.errors import ContractError
from fraudbench.matrixcore import RandomSource

METHODS = ("none", "random_under", "random_over", "smote", "adasyn", "instance_hardness")


@dataclass(frozen=True)
class SamplerSpec:
    """Declarative resampling choice.

    target_ratio is the desired minority/majority ratio after resampling;
    k_neighbors applies to SMOTE/ADASYN, estimator_folds to instance hardness.
    """

    method: str = "none"
    target_ratio: float = 1.0
    k_neighbors: int = 5
    estimator_folds: int = 5

    def __post_init__(self):
        if self.method not in METHODS:
            raise ContractError(f"unknown sampler {self.method!r}; valid: {', '.join(METHODS)}")
        if not 0.0 < self.target_ratio <= 1.0:
            raise ContractError(f"target_ratio must be in (0, 1], got {self.target_ratio}")
        if self.k_neighbors < 1:
            raise ContractError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.estimator_folds < 2:
            raise ContractError(f"estimator_folds must be >= 2, got {self.estimator_folds}")

    def render(self) -> str:
        if self.method == "none":
            return "none"
        inner = f"ratio={self.target_ratio:g}"
        if self.method in ("smote", "adasyn"):
            inner += f",k={self.k_neighbors}"
        if self.method == "instance_hardness":
            inner += f",cv={self.estimator_folds}"
        return f"{self.method}({inner})"


def resample(spec: SamplerSpec, train: Dataset, rng: RandomSource) -> Dataset:
    """Rebalance a training fold per ``spec``; pure given the rng."""
    if spec.method == "none":
        return train
    counts = np.bincount(train.labels, minlength=2)
    if counts[0] == 0 or counts[1] == 0:
        raise ContractError(
            f"resampling needs both classes in the training fold, got counts {tuple(counts)}"
        )
    minority = 1 if counts[1] <= counts[0] else 0
    n_min, n_maj = int(counts[minority]), int(counts[1 - minority])
    if n_min / n_maj >= spec.target_ratio:
        return train

    if spec.method == "random_under":
        return _under(train, minority, n_min, n_maj, spec.target_ratio, rng)
    if spec.method == "random_over":
        return _over(train, minority, n_min, n_maj, spec.target_ratio, rng)
    if spec.method == "smote":
        return _smote(train, minority, n_min, n_maj, spec, rng)
    if spec.method == "adasyn":
        return _adasyn(train, minority, n_min, n_maj, spec, rng)
    return _instance_hardness(train, minority, n_min, n_maj, spec, rng)


def _keep_count(n_min, target_ratio):
    return int(round(n_min / target_ratio))


def _under(train, minority, n_min, n_maj, ratio, rng):
    keep = _keep_count(n_min, ratio)
    maj_idx = np.flatnonzero(train.labels != minority)
    kept = rng.generator.choice(maj_idx, size=min(keep, n_maj), replace=False)
    retained = np.sort(np.concatenate([np.flatnonzero(train.labels == minority), kept]))
    return train.subset(retained)


def _synthetic_budget(n_min, n_maj, ratio):
    return int(round(ratio * n_maj)) - n_min


def _over(train, minority, n_min, n_maj, ratio, rng):
    extra = _synthetic_budget(n_min, n_maj, ratio)
    if extra <= 0:
        return train
    min_idx = np.flatnonzero(train.labels == minority)
    dup = rng.generator.choice(min_idx, size=extra, replace=True)
    return _append(train, train.features[dup], minority, extra)


def _append(train, new_rows, minority, count):
    feats = np.vstack([train.features, new_rows])
    labels = np.concatenate([train.labels, np.full(count, minority, dtype=np.int64)])
    return replace(train, features=feats, labels=labels)


def _minority_neighbours(x_min, k):
    """k nearest minority neighbours per minority row, by (distance, index), self excluded."""
    n = x_min.shape[0]
    d2 = (
        np.sum(x_min * x_min, axis=1)[:, None]
        - 2.0 * (x_min @ x_min.T)
        + np.sum(x_min * x_min, axis=1)[None, :]
    )
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    return order[:, :k]


def _require_neighbours(spec, n_min):
    if n_min < spec.k_neighbors + 1:
        raise ContractError(
            f"{spec.method} with k_neighbors={spec.k_neighbors} needs at least "
            f"{spec.k_neighbors + 1} minority instances, got {n_min}"
        )


def _interpolate(x_min, bases, nn, which, u):
    starts = x_min[bases]
    ends = x_min[nn[bases, which]]
    return starts + u[:, None] * (ends - starts)


def _smote(train, minority, n_min, n_maj, spec, rng):
    extra = _synthetic_budget(n_min, n_maj, spec.target_ratio)
    if extra <= 0:
        return train
    _require_neighbours(spec, n_min)
    min_idx = np.flatnonzero(train.labels == minority)
    x_min = train.features[min_idx]
    nn = _minority_neighbours(x_min, spec.k_neighbors)
    gen = rng.generator
    bases = gen.integers(0, n_min, size=extra)
    which = gen.integers(0, spec.k_neighbors, size=extra)
    u = gen.random(extra)
    return _append(train, _interpolate(x_min, bases, nn, which, u), minority, extra)


def adasyn_apportionment(train: Dataset, minority: int, k: int, budget: int) -> np.ndarray:
    """Synthetic count per minority point, proportional to local majority density.

    density_i = fraction of majority points among the k nearest all-classes
    neighbours of minority point i; counts are the largest-remainder rounding
    of budget * density_i / sum(density).  A point whose neighbourhood is pure
    minority gets weight 0.  If every neighbourhood is pure minority the
    budget is spread uniformly.
    """
    min_idx = np.flatnonzero(train.labels == minority)
    n_min = min_idx.size
    x_min = train.features[min_idx]
    x_all = train.features
    d2 = (
        np.sum(x_min * x_min, axis=1)[:, None]
        - 2.0 * (x_min @ x_all.T)
        + np.sum(x_all * x_all, axis=1)[None, :]
    )
    d2[np.arange(n_min), min_idx] = np.inf  # a point is not its own neighbour
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    is_majority = (train.labels != minority)[order]
    density = is_majority.sum(axis=1) / k
    total = float(density.sum())
    weights = density / total if total > 0.0 else np.full(n_min, 1.0 / n_min)
    return _largest_remainder_counts(weights * budget, budget)


def _adasyn(train, minority, n_min, n_maj, spec, rng):
    extra = _synthetic_budget(n_min, n_maj, spec.target_ratio)
    if extra <= 0:
        return train
    _require_neighbours(spec, n_min)
    min_idx = np.flatnonzero(train.labels == minority)
    x_min = train.features[min_idx]

    per_point = adasyn_apportionment(train, minority, spec.k_neighbors, extra)
    nn = _minority_neighbours(x_min, spec.k_neighbors)
    gen = rng.generator
    chunks = []
    for i in range(n_min):
        g = int(per_point[i])
        if g == 0:
            continue
        which = gen.integers(0, spec.k_neighbors, size=g)
        u = gen.random(g)
        chunks.append(_interpolate(x_min, np.full(g, i), nn, which, u))
    new_rows = np.vstack(chunks) if chunks else np.empty((0, train.dims))
    return _append(train, new_rows, minority, extra)


def _largest_remainder_counts(quotas, total):
    base = np.floor(quotas).astype(np.int64)
    leftover = total - int(base.sum())
    if leftover > 0:
        remainders = quotas - base
        order = np.argsort(-remainders, kind="stable")  # ties to the lower index
        base[order[:leftover]] += 1
    return base


def _instance_hardness(train, minority, n_min, n_maj, spec, rng):
    """Drop the majority rows hardest to classify, judged by out-of-fold
    random-forest probability of their own class (50 trees, fixed)."""
    from fraudbench.classifiers import ClassifierSpec, predict_scores, train as train_model

    keep = _keep_count(n_min, spec.target_ratio)
    if keep >= n_maj:
        return train

    own_prob = np.empty(train.n)
    folds = _stratified_fold_ids(train.labels, spec.estimator_folds, rng)
    rf = ClassifierSpec("random_forest", {"n_trees": 50})
    for f in range(spec.estimator_folds):
        held = np.flatnonzero(folds == f)
        fit_on = np.flatnonzero(folds != f)
        if held.size == 0:
            continue
        if fit_on.size == 0:  # degenerate tiny fold layout: no evidence either way
            own_prob[held] = 1.0
            continue
        model = train_model(rf, train.subset(fit_on), rng.derive_child(f"iht-fold-{f}"))
        p1 = predict_scores(model, train.features[held])
        own_prob[held] = np.where(train.labels[held] == 1, p1, 1.0 - p1)

    maj_idx = np.flatnonzero(train.labels != minority)
    hardness_order = maj_idx[np.argsort(own_prob[maj_idx], kind="stable")]
    removed = np.zeros(train.n, dtype=bool)
    removed[hardness_order[: n_maj - keep]] = True
    return train.subset(np.flatnonzero(~removed))


def _stratified_fold_ids(labels, n_folds, rng):
    """Deal each class's shuffled indices round-robin into folds."""
    gen = rng.derive_child("iht-folds").generator
    fold_of = np.empty(labels.shape[0], dtype=np.int64)
    for c in (0, 1):
        idx = np.flatnonzero(labels == c)
        perm = gen.permutation(idx)
        fold_of[perm] = np.arange(perm.size) % n_folds
    return fold_of
