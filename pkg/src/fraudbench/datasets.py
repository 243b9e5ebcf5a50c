"""Labeled transaction datasets: loading, writing, synthesis, rebalancing.

A Dataset is an immutable (features, labels) pair with column names and a
provenance tag.  Labels are 0 = normal, 1 = fraud.  All operations are pure:
randomness comes in through an explicit RandomSource.

CSV schema: UTF-8, comma-separated, one header row, numeric feature cells,
label column of 0/1 integers (default name "Class").  The writer emits 17
significant digits, so write -> load round-trips are exact.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from fraudbench.errors import ContractError
from fraudbench.matrixcore import RandomSource, as_matrix

DEFAULT_LABEL_COLUMN = "Class"


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with binary labels; invariants enforced at construction."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    provenance: str = ""

    def __post_init__(self):
        feats = as_matrix(self.features)
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise ContractError(
                f"labels length {labels.shape} does not match {feats.shape[0]} feature rows"
            )
        if labels.size and not np.isin(labels, (0, 1)).all():
            bad = int(np.flatnonzero(~np.isin(labels, (0, 1)))[0])
            raise ContractError(f"label at row {bad} is {labels[bad]!r}, must be 0 or 1")
        labels = labels.astype(np.int64)
        names = tuple(str(n) for n in self.feature_names)
        if len(names) != feats.shape[1]:
            raise ContractError(
                f"{len(names)} feature names for {feats.shape[1]} feature columns"
            )
        feats.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dims(self) -> int:
        return self.features.shape[1]

    @property
    def fraud_rate(self) -> float:
        return float(self.labels.sum()) / self.n

    def class_counts(self) -> tuple[int, int]:
        """(#normal, #fraud)."""
        frauds = int(self.labels.sum())
        return self.n - frauds, frauds

    def subset(self, indices) -> "Dataset":
        """Row subset in the given index order."""
        idx = np.asarray(indices, dtype=np.int64)
        return replace(self, features=self.features[idx], labels=self.labels[idx])

    def with_features(self, features, feature_names=None) -> "Dataset":
        return replace(
            self,
            features=features,
            feature_names=self.feature_names if feature_names is None else tuple(feature_names),
        )


@dataclass(frozen=True)
class StandardizationParams:
    """Per-feature centering/scaling learned on a training fold."""

    means: np.ndarray
    stddevs: np.ndarray


def load_csv(path, label_column: str = DEFAULT_LABEL_COLUMN) -> Dataset:
    """Load a dataset from CSV, preserving row order.

    Diagnostics name the offending row (1-based file line) and column:
    missing file, missing/duplicate header, ragged row, non-numeric cell,
    label outside {0, 1}.
    """
    if not os.path.exists(path):
        raise ContractError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ContractError(f"{path}: file is empty, expected a header row") from None
        seen = set()
        for name in header:
            if name in seen:
                raise ContractError(f"{path}: duplicate header column {name!r}")
            seen.add(name)
        if label_column not in seen:
            raise ContractError(f"{path}: header has no label column {label_column!r}")
        label_idx = header.index(label_column)
        feature_names = tuple(n for i, n in enumerate(header) if i != label_idx)

        rows = []
        labels = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ContractError(
                    f"{path}: row at line {lineno} has {len(row)} cells, expected {len(header)}"
                )
            raw_label = row[label_idx]
            if raw_label not in ("0", "1"):
                raise ContractError(
                    f"{path}: label at line {lineno} is {raw_label!r}, must be 0 or 1"
                )
            labels.append(int(raw_label))
            values = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ContractError(
                        f"{path}: non-numeric cell {cell!r} at line {lineno}, "
                        f"column {header[i]!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise ContractError(f"{path}: no data rows after the header")
    return Dataset(
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        feature_names=feature_names,
        provenance=os.path.splitext(os.path.basename(path))[0],
    )


def write_csv(dataset: Dataset, path, label_column: str = DEFAULT_LABEL_COLUMN) -> None:
    """Write a dataset as CSV with 17-significant-digit floats (exact round-trip)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(dataset.feature_names) + [label_column])
        for row, label in zip(dataset.features, dataset.labels):
            writer.writerow([format(v, ".17g") for v in row] + [int(label)])


def adjust_fraud_rate(dataset: Dataset, target_rate: float, rng: RandomSource) -> Dataset:
    """Lower the fraud rate to at most ``target_rate`` by removing surplus frauds.

    All normals are kept; the retained frauds are a uniform without-replacement
    draw of floor(target_rate * n_normal / (1 - target_rate)), and row order is
    preserved.  Raising the rate is not supported: this operation only removes.
    """
    n_normal, n_fraud = dataset.class_counts()
    current = dataset.fraud_rate
    if not 0.0 < target_rate <= current:
        raise ContractError(
            f"target fraud rate {target_rate} not in (0, {current:.6g}] "
            "(this operation only removes frauds)"
        )
    keep = math.floor(target_rate * n_normal / (1.0 - target_rate))
    keep = min(keep, n_fraud)
    fraud_idx = np.flatnonzero(dataset.labels == 1)
    normal_idx = np.flatnonzero(dataset.labels == 0)
    kept_frauds = rng.generator.choice(fraud_idx, size=keep, replace=False)
    retained = np.sort(np.concatenate([normal_idx, kept_frauds]))
    out = dataset.subset(retained)
    return replace(out, provenance=f"{dataset.provenance}@{target_rate:g}")


def standardize(dataset: Dataset) -> tuple[Dataset, StandardizationParams]:
    """Center to mean 0 and scale to population stddev 1, per feature.

    Constant columns map to all-zeros with the stddev recorded as the
    sentinel 1, so PCA downstream sees them as zero-variance rather than
    dividing by zero.  Returns the params for reuse on test folds.
    """
    if dataset.n < 2:
        raise ContractError(f"standardize needs at least 2 rows, got {dataset.n}")
    means = dataset.features.mean(axis=0)
    stds = dataset.features.std(axis=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    out = dataset.with_features((dataset.features - means) / stds)
    return out, StandardizationParams(means=means, stddevs=stds)


def apply_standardization(params: StandardizationParams, dataset: Dataset) -> Dataset:
    if params.means.shape[0] != dataset.dims:
        raise ContractError(
            f"standardization params cover {params.means.shape[0]} features, "
            f"dataset has {dataset.dims}"
        )
    return dataset.with_features((dataset.features - params.means) / params.stddevs)


def invert_standardization(params: StandardizationParams, dataset: Dataset) -> Dataset:
    return dataset.with_features(dataset.features * params.stddevs + params.means)


def make_synthetic(
    n_normal: int,
    n_fraud: int,
    dims: int,
    separation: float,
    rng: RandomSource,
) -> Dataset:
    """Gaussian two-class stand-in for confidential transaction data.

    Normals are standard Gaussian at the origin; frauds are unit-covariance
    Gaussian centered at (separation, ..., separation)/sqrt(dims), so
    ``separation`` is the Euclidean distance between class means regardless
    of dimensionality.  Normal rows come first, then frauds.
    """
    if n_normal < 1 or n_fraud < 0 or dims < 1 or separation < 0:
        raise ContractError(
            f"invalid synthetic spec: n_normal={n_normal}, n_fraud={n_fraud}, "
            f"dims={dims}, separation={separation}"
        )
    gen = rng.generator
    normals = gen.standard_normal((n_normal, dims))
    frauds = gen.standard_normal((n_fraud, dims)) + separation / math.sqrt(dims)
    features = np.vstack([normals, frauds])
    labels = np.concatenate([np.zeros(n_normal, np.int64), np.ones(n_fraud, np.int64)])
    return Dataset(
        features=features,
        labels=labels,
        feature_names=tuple(f"X{i + 1}" for i in range(dims)),
        provenance=f"synthetic:{n_normal}+{n_fraud}x{dims}s{separation:g}",
    )
