"""Line-oriented experiment configuration.

Plain text, ``key = value`` lines under ``[section]`` headers, ``#`` comments.
Unknown sections and keys are errors (diagnostics carry line numbers), so a
typo cannot silently reconfigure an experiment.  See the README for the full
key reference; the shipped files under configs/ are working examples.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from fraudbench.classifiers import ClassifierSpec
from fraudbench.errors import ContractError
from fraudbench.noisecompound import NoiseSpec
from fraudbench.resampling import SamplerSpec

NOISE_SITES = ("none", "train", "test", "both")

_SECTION_KEYS = {
    "experiment": {"id", "seed", "output"},
    "data": {
        "source",
        "path",
        "label_column",
        "normals",
        "frauds",
        "dims",
        "separation",
        "standardize",
        "fraud_rates",
    },
    "split": {"test_fraction", "folds"},
    "representations": {"raw", "pca"},
    "samplers": None,  # keys are sampler method names
    "classifiers": None,  # keys are classifier kinds
    "noise": {"flip_fraud_to_normal", "flip_normal_to_fraud", "apply_to"},
}


@dataclass(frozen=True)
class CsvSource:
    path: str
    label_column: str = "Class"

    def tag(self) -> str:
        return os.path.splitext(os.path.basename(self.path))[0]


@dataclass(frozen=True)
class SyntheticSource:
    normals: int
    frauds: int
    dims: int
    separation: float

    def tag(self) -> str:
        return "synthetic"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment grid: one entry required per axis."""

    experiment_id: str
    base_seed: int
    source: object
    representations: tuple  # of ("raw", None) / ("pca", int | "all")
    classifiers: tuple[ClassifierSpec, ...]
    samplers: tuple[SamplerSpec, ...] = (SamplerSpec(),)
    fraud_rates: tuple = (None,)  # None = native rate
    standardize: bool = True
    test_fraction: float = 0.2
    n_folds: int = 5
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    noise_site: str = "none"
    output: str | None = None

    def __post_init__(self):
        if not self.representations:
            raise ContractError("config needs at least one representation")
        if not self.classifiers:
            raise ContractError("config needs at least one classifier")
        if not self.samplers:
            raise ContractError("config needs at least one sampler")
        if not self.fraud_rates:
            raise ContractError("config needs at least one fraud rate")
        if self.noise_site not in NOISE_SITES:
            raise ContractError(f"noise apply_to must be one of {NOISE_SITES}")
        if isinstance(self.source, CsvSource) and not os.path.exists(self.source.path):
            raise ContractError(f"dataset file not found: {self.source.path}")

    def with_noise(self, noise: NoiseSpec, site: str, suffix: str = "") -> "ExperimentConfig":
        return replace(
            self,
            noise=noise,
            noise_site=site,
            experiment_id=self.experiment_id + suffix,
        )


def parse_config(path) -> ExperimentConfig:
    """Parse and validate a config file into an ExperimentConfig."""
    if not os.path.exists(path):
        raise ContractError(f"config file not found: {path}")
    sections: dict[str, dict[str, tuple[int, str]]] = {}
    current = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                if current not in _SECTION_KEYS:
                    raise ContractError(
                        f"{path}:{lineno}: unknown section [{current}]; "
                        f"valid: {', '.join(sorted(_SECTION_KEYS))}"
                    )
                sections.setdefault(current, {})
                continue
            if "=" not in line:
                raise ContractError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            if current is None:
                raise ContractError(f"{path}:{lineno}: key outside any [section]")
            key, value = (part.strip() for part in line.split("=", 1))
            allowed = _SECTION_KEYS[current]
            if allowed is not None and key not in allowed:
                raise ContractError(
                    f"{path}:{lineno}: unknown key {key!r} in [{current}]; "
                    f"valid: {', '.join(sorted(allowed))}"
                )
            if key in sections[current]:
                raise ContractError(f"{path}:{lineno}: duplicate key {key!r} in [{current}]")
            sections[current][key] = (lineno, value)
    return _build(path, sections)


def _build(path, sections) -> ExperimentConfig:
    def get(section, key, default=None):
        entry = sections.get(section, {}).get(key)
        return default if entry is None else entry[1]

    def require(section, key):
        value = get(section, key)
        if value is None:
            raise ContractError(f"{path}: missing required key {key!r} in [{section}]")
        return value

    experiment_id = get("experiment", "id", os.path.splitext(os.path.basename(path))[0])
    base_seed = _int(path, "experiment.seed", require("experiment", "seed"))
    output = get("experiment", "output")

    source_kind = require("data", "source")
    if source_kind == "csv":
        csv_path = require("data", "path")
        if not os.path.isabs(csv_path):
            csv_path = os.path.normpath(os.path.join(os.path.dirname(path), csv_path))
        source = CsvSource(path=csv_path, label_column=get("data", "label_column", "Class"))
    elif source_kind == "synthetic":
        source = SyntheticSource(
            normals=_int(path, "data.normals", require("data", "normals")),
            frauds=_int(path, "data.frauds", require("data", "frauds")),
            dims=_int(path, "data.dims", require("data", "dims")),
            separation=_float(path, "data.separation", require("data", "separation")),
        )
    else:
        raise ContractError(f"{path}: data source must be 'csv' or 'synthetic', got {source_kind!r}")

    fraud_rates = []
    for token in _list(get("data", "fraud_rates", "native")):
        fraud_rates.append(None if token == "native" else _float(path, "data.fraud_rates", token))

    representations = []
    if _bool(path, "representations.raw", get("representations", "raw", "off")):
        representations.append(("raw", None))
    pca_spec = get("representations", "pca")
    if pca_spec is not None:
        for token in _list(pca_spec):
            representations.append(("pca", "all" if token == "all" else _int(path, "representations.pca", token)))

    samplers = []
    for method, (lineno, value) in sections.get("samplers", {}).items():
        samplers.append(_sampler(path, lineno, method, value))
    if not samplers:
        samplers.append(SamplerSpec())

    classifiers = []
    for kind, (lineno, value) in sections.get("classifiers", {}).items():
        classifiers.append(_classifier(path, lineno, kind, value))

    noise = NoiseSpec(
        flip_fraud_to_normal=_float(
            path, "noise.flip_fraud_to_normal", get("noise", "flip_fraud_to_normal", "0")
        ),
        flip_normal_to_fraud=_float(
            path, "noise.flip_normal_to_fraud", get("noise", "flip_normal_to_fraud", "0")
        ),
    )

    return ExperimentConfig(
        experiment_id=experiment_id,
        base_seed=base_seed,
        source=source,
        representations=tuple(representations),
        classifiers=tuple(classifiers),
        samplers=tuple(samplers),
        fraud_rates=tuple(fraud_rates),
        standardize=_bool(path, "data.standardize", get("data", "standardize", "true")),
        test_fraction=_float(path, "split.test_fraction", get("split", "test_fraction", "0.2")),
        n_folds=_int(path, "split.folds", get("split", "folds", "5")),
        noise=noise,
        noise_site=get("noise", "apply_to", "none"),
        output=output,
    )


def _sampler(path, lineno, method, value) -> SamplerSpec:
    kwargs = {}
    for k, v in _kv_pairs(path, lineno, value):
        if k == "ratio":
            kwargs["target_ratio"] = _float(path, f"samplers.{method}.ratio", v)
        elif k == "k":
            kwargs["k_neighbors"] = _int(path, f"samplers.{method}.k", v)
        elif k == "cv":
            kwargs["estimator_folds"] = _int(path, f"samplers.{method}.cv", v)
        else:
            raise ContractError(
                f"{path}:{lineno}: unknown sampler setting {k!r} (valid: ratio, k, cv)"
            )
    return SamplerSpec(method=method, **kwargs)


def _classifier(path, lineno, kind, value) -> ClassifierSpec:
    from fraudbench.classifiers import DEFAULTS

    if kind not in DEFAULTS:
        raise ContractError(f"{path}:{lineno}: unknown classifier kind {kind!r}")
    params = {}
    for k, v in _kv_pairs(path, lineno, value):
        if k not in DEFAULTS[kind]:
            raise ContractError(
                f"{path}:{lineno}: unknown hyperparameter {k!r} for {kind} "
                f"(valid: {', '.join(sorted(DEFAULTS[kind])) or 'none'})"
            )
        default = DEFAULTS[kind][k]
        params[k] = (
            _int(path, f"classifiers.{kind}.{k}", v)
            if isinstance(default, int)
            else _float(path, f"classifiers.{kind}.{k}", v)
        )
    return ClassifierSpec(kind=kind, hyperparameters=params)


def _kv_pairs(path, lineno, value):
    value = value.strip()
    if value in ("", "on"):
        return []
    pairs = []
    for part in value.split(","):
        if "=" not in part:
            raise ContractError(
                f"{path}:{lineno}: expected 'on' or comma-separated key=value, got {part.strip()!r}"
            )
        k, v = (s.strip() for s in part.split("=", 1))
        pairs.append((k, v))
    return pairs


def _list(value):
    return [token.strip() for token in str(value).split(",") if token.strip()]


def _int(path, what, value):
    try:
        return int(str(value).strip())
    except ValueError:
        raise ContractError(f"{path}: {what} must be an integer, got {value!r}") from None


def _float(path, what, value):
    try:
        return float(str(value).strip())
    except ValueError:
        raise ContractError(f"{path}: {what} must be a number, got {value!r}") from None


def _bool(path, what, value):
    v = str(value).strip().lower()
    if v in ("true", "on", "yes", "1"):
        return True
    if v in ("false", "off", "no", "0"):
        return False
    raise ContractError(f"{path}: {what} must be a boolean (true/false), got {value!r}")
