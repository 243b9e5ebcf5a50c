"""PCA obfuscation: fit a principal-component basis, release only projections.

The model centers but never rescales; callers decide whether to standardize
first.  Components come from the exact SVD of the centered feature matrix and
inherit its sign convention, so fitted bases are identical across runs.
Transformed datasets carry feature names V1..Vk, mirroring how PCA-encoded
transaction data is published.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from fraudbench.datasets import Dataset
from fraudbench.errors import ContractError
from fraudbench.matrixcore import svd


@dataclass(frozen=True)
class PcaModel:
    """Fitted centering vector plus an ordered orthonormal component basis."""

    center: np.ndarray
    components: np.ndarray  # (k, d), rows orthonormal
    explained_variance: np.ndarray  # (k,), non-increasing
    k: int
    feature_names_in: tuple[str, ...] = ()

    @property
    def input_dims(self) -> int:
        return self.components.shape[1]


def fit_pca(dataset: Dataset, k: int) -> PcaModel:
    """Top-k principal components of the centered feature matrix.

    explained_variance[i] = s_i**2 / (n - 1), the sample variance of the data
    along component i.
    """
    n, d = dataset.n, dataset.dims
    if n < 2:
        raise ContractError(f"PCA needs at least 2 rows, got {n}")
    if not 1 <= k <= min(n - 1, d):
        raise ContractError(f"k={k} out of range [1, {min(n - 1, d)}] for a {n}x{d} dataset")
    center = dataset.features.mean(axis=0)
    _, s, vt = svd(dataset.features - center)
    return PcaModel(
        center=center,
        components=vt[:k],
        explained_variance=s[:k] ** 2 / (n - 1),
        k=k,
        feature_names_in=dataset.feature_names,
    )


def transform(model: PcaModel, dataset: Dataset) -> Dataset:
    """Project onto the component basis; labels pass through untouched."""
    if dataset.dims != model.input_dims:
        raise ContractError(
            f"dataset has {dataset.dims} features, PCA model expects {model.input_dims}"
        )
    projected = (dataset.features - model.center) @ model.components.T
    return dataset.with_features(
        projected, feature_names=tuple(f"V{i + 1}" for i in range(model.k))
    )


def inverse_transform(model: PcaModel, dataset: Dataset) -> Dataset:
    """Rotate projections back and re-add the center.

    Exact reconstruction only when the model kept all components (k = d);
    otherwise this is the best rank-k approximation.
    """
    if dataset.dims != model.k:
        raise ContractError(
            f"dataset has {dataset.dims} features, expected {model.k} projection columns"
        )
    restored = dataset.features @ model.components + model.center
    names = model.feature_names_in or tuple(f"X{i + 1}" for i in range(model.input_dims))
    return replace(dataset.with_features(restored, feature_names=names))
