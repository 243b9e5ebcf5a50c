"""Imbalance-appropriate scoring and stratified train/test splitting.

Fraud (label 1) is the positive class everywhere.  Metrics that are not
defined for a given confusion matrix (e.g. precision with no positive
predictions) are reported as None, never coerced to 0: report columns render
them as empty fields so degenerate models stay visible in the raw data.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor, sqrt

import numpy as np

from fraudbench.errors import ContractError
from fraudbench.matrixcore import RandomSource

METRIC_NAMES = ("accuracy", "precision", "recall", "specificity", "f1", "g_mean")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with fraud as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricReport:
    """Scores in [0, 1]; None marks an undefined metric."""

    accuracy: float
    precision: float | None
    recall: float | None
    specificity: float | None
    f1: float | None
    g_mean: float | None

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def confusion(y_true, y_pred) -> ConfusionMatrix:
    """Tally a confusion matrix from equal-length 0/1 label vectors."""
    yt = np.asarray(y_true)
    yp = np.asarray(y_pred)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise ContractError(f"label vectors must match: got shapes {yt.shape} and {yp.shape}")
    if yt.size < 1:
        raise ContractError("cannot score zero instances")
    tp = int(np.sum((yt == 1) & (yp == 1)))
    fp = int(np.sum((yt == 0) & (yp == 1)))
    tn = int(np.sum((yt == 0) & (yp == 0)))
    fn = int(np.sum((yt == 1) & (yp == 0)))
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def score(cm: ConfusionMatrix) -> MetricReport:
    """Accuracy, precision, recall, specificity, F1, g-mean from counts.

    f1 is undefined iff precision + recall == 0 or either is undefined;
    g_mean is the geometric mean of recall and specificity when both exist.
    """
    if cm.total <= 0:
        raise ContractError("confusion matrix is empty")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp > 0 else None
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else None
    specificity = cm.tn / (cm.tn + cm.fp) if cm.tn + cm.fp > 0 else None
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    if recall is None or specificity is None:
        g_mean = None
    else:
        g_mean = sqrt(recall * specificity)
    return MetricReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        specificity=specificity,
        f1=f1,
        g_mean=g_mean,
    )


@dataclass(frozen=True)
class SplitPlan:
    """Reproducible stratified train/test index pairs."""

    folds: tuple[tuple[np.ndarray, np.ndarray], ...]
    test_fraction: float
    seed: int


def stratified_shuffle_split(
    labels, test_fraction: float, n_folds: int, rng: RandomSource
) -> SplitPlan:
    """Repeated stratified random partitions.

    Per-class test counts are the largest-remainder apportionment of
    test_fraction (so each class's test share is within one instance of it);
    within-class assignment is uniformly random and independent across folds.
    A class that would miss either side is an error, not a silent degenerate
    split.
    """
    y = np.asarray(labels)
    if y.ndim != 1 or y.size < 2:
        raise ContractError("labels must be a vector with at least 2 entries")
    if not 0.0 < test_fraction < 1.0:
        raise ContractError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if n_folds < 1:
        raise ContractError(f"n_folds must be >= 1, got {n_folds}")
    classes = np.unique(y)
    counts = {int(c): int(np.sum(y == c)) for c in classes}
    for c, cnt in counts.items():
        if cnt < 2:
            raise ContractError(f"class {c} has {cnt} instance(s); need at least 2 to split")

    test_counts = _largest_remainder(
        {c: test_fraction * cnt for c, cnt in counts.items()},
        total=int(floor(test_fraction * y.size + 0.5)),
    )
    for c, cnt in counts.items():
        if test_counts[c] == 0:
            raise ContractError(
                f"class {c} would have no test instances at test_fraction={test_fraction}; "
                "increase the fraction or the class size"
            )
        if test_counts[c] == cnt:
            raise ContractError(
                f"class {c} would have no training instances at test_fraction={test_fraction}"
            )

    folds = []
    for i in range(n_folds):
        gen = rng.derive_child(f"fold-{i}").generator
        train_parts = []
        test_parts = []
        for c in sorted(counts):
            idx = np.flatnonzero(y == c)
            perm = gen.permutation(idx)
            test_parts.append(perm[: test_counts[c]])
            train_parts.append(perm[test_counts[c] :])
        folds.append(
            (
                np.sort(np.concatenate(train_parts)),
                np.sort(np.concatenate(test_parts)),
            )
        )
    return SplitPlan(folds=tuple(folds), test_fraction=test_fraction, seed=rng.seed)


def _largest_remainder(quotas: dict, total: int) -> dict:
    """Integer apportionment of ``total`` matching real-valued quotas.

    Each entry gets floor(quota); leftover units go to the largest fractional
    remainders, ties to the lowest key.
    """
    base = {c: int(floor(q)) for c, q in quotas.items()}
    leftover = total - sum(base.values())
    remainders = sorted(quotas, key=lambda c: (-(quotas[c] - base[c]), c))
    for c in remainders[: max(leftover, 0)]:
        base[c] += 1
    return base
