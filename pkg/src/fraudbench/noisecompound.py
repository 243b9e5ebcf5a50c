"""Annotation-noise injection and model-vs-real error decomposition.

Human labeling error is modeled as independent per-label flips, with separate
rates per direction because fraud-to-normal flips (missed frauds) are the
high-impact direction on imbalanced data.  The decomposition scores the same
predictions twice: against the noisy labels an evaluator would actually hold
(model error) and against the retained clean truth (real error).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from fraudbench.errors import ContractError
from fraudbench.matrixcore import RandomSource
from fraudbench.metricsplits import MetricReport, confusion, score


@dataclass(frozen=True)
class NoiseSpec:
    """Independent flip probabilities, one per direction."""

    flip_fraud_to_normal: float = 0.0
    flip_normal_to_fraud: float = 0.0

    def __post_init__(self):
        for name in ("flip_fraud_to_normal", "flip_normal_to_fraud"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ContractError(f"{name} must be in [0, 1], got {rate}")

    @property
    def active(self) -> bool:
        return self.flip_fraud_to_normal > 0.0 or self.flip_normal_to_fraud > 0.0


class FlipCounts(NamedTuple):
    fraud_to_normal: int
    normal_to_fraud: int


@dataclass(frozen=True)
class ErrorDecomposition:
    """Scores of one prediction vector against noisy and true labels."""

    model_error: MetricReport
    real_error: MetricReport
    noise_rate_applied: tuple[float, float]  # realized (fraud->normal, normal->fraud)


def inject_noise(labels, spec: NoiseSpec, rng: RandomSource):
    """Flip each label independently at its class's rate.

    One uniform draw per label in index order, so results are deterministic
    given the rng.  Returns (noisy_labels, FlipCounts).
    """
    y = np.asarray(labels, dtype=np.int64)
    u = rng.generator.random(y.size)
    flip = np.where(y == 1, u < spec.flip_fraud_to_normal, u < spec.flip_normal_to_fraud)
    noisy = np.where(flip, 1 - y, y)
    return noisy, FlipCounts(
        fraud_to_normal=int(np.sum(flip & (y == 1))),
        normal_to_fraud=int(np.sum(flip & (y == 0))),
    )


def decompose_error(y_true, y_noisy, y_pred) -> ErrorDecomposition:
    """Score predictions against noisy annotations and against clean truth.

    With zero realized flips the two reports are identical field-for-field.
    """
    yt = np.asarray(y_true)
    yn = np.asarray(y_noisy)
    yp = np.asarray(y_pred)
    if not (yt.shape == yn.shape == yp.shape):
        raise ContractError(
            f"label vectors must share a length: {yt.shape}, {yn.shape}, {yp.shape}"
        )
    n_fraud = int(np.sum(yt == 1))
    n_normal = yt.size - n_fraud
    f2n = int(np.sum((yt == 1) & (yn == 0)))
    n2f = int(np.sum((yt == 0) & (yn == 1)))
    return ErrorDecomposition(
        model_error=score(confusion(yn, yp)),
        real_error=score(confusion(yt, yp)),
        noise_rate_applied=(
            f2n / n_fraud if n_fraud else 0.0,
            n2f / n_normal if n_normal else 0.0,
        ),
    )


def zero_one_error(report: MetricReport) -> float:
    """0/1 error view of a report (1 - accuracy); always defined."""
    return 1.0 - report.accuracy
