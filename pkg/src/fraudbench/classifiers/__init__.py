"""The classifier zoo behind one train/predict interface.

Fourteen kinds, each with documented hyperparameter defaults (see DEFAULTS).
``predict`` always thresholds ``predict_scores`` at the kind's documented
cut (0.5 for probability scores, 0.0 for margins, strictly greater-than), so
the two are consistent by construction; dummy_majority is the one kind with
no scores.  Training data containing a single class yields a constant
predictor of that class for every kind.

sgd_hinge doubles as the linear-SVC stand-in of the benchmarked zoo.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from fraudbench.classifiers import _bayes, _ensembles, _linear, _neighbors
from fraudbench.classifiers._trees import grow_tree, tree_values
from fraudbench.datasets import Dataset
from fraudbench.errors import CapabilityError, ContractError
from fraudbench.matrixcore import RandomSource, as_matrix

DEFAULTS: dict[str, dict[str, Any]] = {
    "dummy_majority": {},
    "logistic_regression": {"l2": 1e-4, "max_iter": 500, "tol": 1e-6},
    "ridge": {"l2": 1.0},
    "perceptron": {"epochs": 50},
    "passive_aggressive": {"epochs": 50},
    "sgd_hinge": {"epochs": 50, "step": 0.01},
    "gaussian_nb": {},
    "qda": {"reg": 1e-6},
    "knn": {"k": 5},
    "decision_tree": {"max_depth": 10},
    "random_forest": {"n_trees": 100, "max_depth": 10},
    "adaboost_discrete": {"rounds": 50},
    "adaboost_real": {"rounds": 50},
    "gradient_boosting": {"stages": 100, "depth": 3, "learning_rate": 0.1},
}

KINDS = tuple(DEFAULTS)

# score semantics per kind: probability in [0,1] cut at 0.5, or margin cut at 0
PROB_KINDS = frozenset(
    {
        "logistic_regression",
        "gaussian_nb",
        "qda",
        "knn",
        "decision_tree",
        "random_forest",
        "adaboost_real",
        "gradient_boosting",
    }
)
MARGIN_KINDS = frozenset(
    {"ridge", "perceptron", "passive_aggressive", "sgd_hinge", "adaboost_discrete"}
)


def _train_decision_tree(params, x, y, rng):
    return {"tree": grow_tree(x, y, max_depth=int(params["max_depth"]))}


def _score_decision_tree(state, x):
    return tree_values(state["tree"], x)


_TRAINERS = {
    "logistic_regression": (_linear.train_logistic, _linear.score_logistic),
    "ridge": (_linear.train_ridge, _linear.score_ridge),
    "perceptron": (_linear.train_online("perceptron"), _linear.score_margin),
    "passive_aggressive": (_linear.train_online("passive_aggressive"), _linear.score_margin),
    "sgd_hinge": (_linear.train_online("sgd_hinge"), _linear.score_margin),
    "gaussian_nb": (_bayes.train_gaussian_nb, _bayes.score_gaussian_nb),
    "qda": (_bayes.train_qda, _bayes.score_qda),
    "knn": (_neighbors.train_knn, _neighbors.score_knn),
    "decision_tree": (_train_decision_tree, _score_decision_tree),
    "random_forest": (_ensembles.train_random_forest, _ensembles.score_random_forest),
    "adaboost_discrete": (
        _ensembles.train_adaboost_discrete,
        _ensembles.score_adaboost_discrete,
    ),
    "adaboost_real": (_ensembles.train_adaboost_real, _ensembles.score_adaboost_real),
    "gradient_boosting": (
        _ensembles.train_gradient_boosting,
        _ensembles.score_gradient_boosting,
    ),
}


@dataclass(frozen=True)
class ClassifierSpec:
    """Declarative classifier choice; unknown kinds and keys are rejected."""

    kind: str
    hyperparameters: Mapping[str, Any] = field(default_factory=dict)
    seed_label: str = ""

    def __post_init__(self):
        if self.kind not in DEFAULTS:
            raise ContractError(
                f"unknown classifier kind {self.kind!r}; valid: {', '.join(KINDS)}"
            )
        unknown = set(self.hyperparameters) - set(DEFAULTS[self.kind])
        if unknown:
            raise ContractError(
                f"unknown hyperparameter(s) for {self.kind}: {', '.join(sorted(unknown))}"
            )

    def params(self) -> dict[str, Any]:
        merged = dict(DEFAULTS[self.kind])
        merged.update(self.hyperparameters)
        return merged

    def render(self) -> str:
        """Canonical report string: kind with every hyperparameter echoed."""
        merged = self.params()
        if not merged:
            return self.kind
        inner = ",".join(f"{k}={format(v, 'g') if isinstance(v, float) else v}"
                         for k, v in sorted(merged.items()))
        return f"{self.kind}({inner})"


@dataclass
class TrainedModel:
    """Opaque fitted state; predict/predict_scores are pure and deterministic."""

    spec: ClassifierSpec
    state: dict
    classes_seen: tuple[int, ...]
    dims: int


def train(spec: ClassifierSpec, data: Dataset, rng: RandomSource) -> TrainedModel:
    """Fit ``spec`` on ``data``; randomness comes only from ``rng``.

    The model's private stream is the child labeled by spec.seed_label
    (falling back to the kind name), so identical (spec, data, rng) always
    give an identical model.
    """
    x = data.features
    y = data.labels
    classes = tuple(int(c) for c in np.unique(y))
    if len(classes) == 1:
        return TrainedModel(spec, {"constant": classes[0]}, classes, data.dims)
    if spec.kind == "dummy_majority":
        frauds = int(y.sum())
        majority = 1 if frauds > data.n - frauds else 0
        return TrainedModel(spec, {"constant": majority}, classes, data.dims)
    trainer, _ = _TRAINERS[spec.kind]
    child = rng.derive_child(spec.seed_label or spec.kind)
    state = trainer(spec.params(), x, y, child)
    return TrainedModel(spec, state, classes, data.dims)


def _check_features(model: TrainedModel, features) -> np.ndarray:
    x = as_matrix(features)
    if x.shape[1] != model.dims:
        raise ContractError(
            f"{model.spec.kind} was trained on {model.dims} features, got {x.shape[1]}"
        )
    return x


def predict(model: TrainedModel, features) -> np.ndarray:
    """One 0/1 label per row."""
    x = _check_features(model, features)
    if "constant" in model.state:
        return np.full(x.shape[0], model.state["constant"], dtype=np.int64)
    scores = _raw_scores(model, x)
    cut = 0.5 if model.spec.kind in PROB_KINDS else 0.0
    return (scores > cut).astype(np.int64)


def predict_scores(model: TrainedModel, features) -> np.ndarray:
    """Confidence scores: P(fraud) for probability kinds, margin otherwise.

    Thresholding at the kind's cut (0.5 / 0.0, strict) reproduces predict
    exactly.  dummy_majority supports no scores.
    """
    x = _check_features(model, features)
    if model.spec.kind == "dummy_majority":
        raise CapabilityError("dummy_majority does not provide scores")
    if "constant" in model.state:
        label = model.state["constant"]
        if model.spec.kind in PROB_KINDS:
            return np.full(x.shape[0], 1.0 if label == 1 else 0.0)
        return np.full(x.shape[0], 1.0 if label == 1 else -1.0)
    return _raw_scores(model, x)


def _raw_scores(model: TrainedModel, x) -> np.ndarray:
    _, scorer = _TRAINERS[model.spec.kind]
    return scorer(model.state, x)
