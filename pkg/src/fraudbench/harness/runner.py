"""Experiment orchestration over (condition x sampler x classifier x fold) grids.

Folds are outermost: every grid cell inside a fold shares the same
train/test indices, so representation effects are isolated from split noise.
Standardization and PCA are fit on the training fold only; resampling sees
training rows only; clean test truth is retained next to any noisy copy.

Randomness is a tree of labeled PCG64 streams rooted at the base seed:

    root = seed
      synth                              (synthetic data generation)
      adjust:<rate>                      (fraud-rate adjustment)
      rate:<rate>/split/fold-<i>         (stratified splitting)
      rate:<rate>/sample:<rep>/<sampler>/fold:<i>
      rate:<rate>/cell:<rep>/<sampler>/<classifier>/fold:<i>
        train, noise-train, noise-test   (children of the cell stream)

so any cell can be reproduced in isolation, in any execution order.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, replace

import numpy as np

from fraudbench.classifiers import predict, train
from fraudbench.datasets import (
    Dataset,
    adjust_fraud_rate,
    apply_standardization,
    load_csv,
    make_synthetic,
    standardize,
    write_csv,
)
from fraudbench.errors import ContractError, FraudBenchError
from fraudbench.harness.config import CsvSource, ExperimentConfig
from fraudbench.matrixcore import RandomSource
from fraudbench.metricsplits import MetricReport, confusion, score, stratified_shuffle_split
from fraudbench.noisecompound import decompose_error, inject_noise
from fraudbench.pca import fit_pca, transform
from fraudbench.resampling import resample

REPORT_COLUMNS = (
    "experiment_id",
    "dataset",
    "fraud_rate",
    "representation",
    "sampler",
    "classifier",
    "seed",
    "fold",
    "accuracy",
    "precision",
    "recall",
    "specificity",
    "f1",
    "g_mean",
    "noise_flips_pos",
    "noise_flips_neg",
    "train_ms",
    "predict_ms",
)

WALL_TIME_COLUMNS = ("train_ms", "predict_ms")


@dataclass(frozen=True)
class EvalRecord:
    """One scored grid cell; self-describing, no external state needed."""

    experiment_id: str
    dataset: str
    fraud_rate: float
    representation: str
    sampler: str
    classifier: str
    seed: int
    fold: int
    metrics: MetricReport
    noise_flips_pos: int
    noise_flips_neg: int
    train_ms: float
    predict_ms: float

    def sort_key(self):
        return (
            self.experiment_id,
            self.dataset,
            self.fraud_rate,
            self.representation,
            self.sampler,
            self.classifier,
            self.fold,
        )


def load_base_dataset(cfg: ExperimentConfig, root: RandomSource) -> Dataset:
    if isinstance(cfg.source, CsvSource):
        return load_csv(cfg.source.path, cfg.source.label_column)
    s = cfg.source
    return make_synthetic(s.normals, s.frauds, s.dims, s.separation, root.derive_child("synth"))


def run_benchmark(cfg: ExperimentConfig) -> list[EvalRecord]:
    """Run the full grid; deterministic per (base_seed, cell, fold)."""
    root = RandomSource(cfg.base_seed)
    base = load_base_dataset(cfg, root)
    base_tag = cfg.source.tag() + ("[std]" if cfg.standardize else "")
    records = []
    for rate in cfg.fraud_rates:
        records.extend(_run_rate(cfg, root, base, base_tag, rate))
    records.sort(key=EvalRecord.sort_key)
    return records


def _run_rate(cfg, root, base, base_tag, rate):
    rate_tag = "native" if rate is None else format(rate, "g")
    variant = (
        base
        if rate is None
        else adjust_fraud_rate(base, rate, root.derive_child(f"adjust:{rate_tag}"))
    )
    rate_rng = root.derive_child(f"rate:{rate_tag}")
    plan = stratified_shuffle_split(
        variant.labels, cfg.test_fraction, cfg.n_folds, rate_rng.derive_child("split")
    )
    records = []
    for fold_i, (train_idx, test_idx) in enumerate(plan.folds):
        records.extend(
            _run_fold(cfg, rate_rng, variant, base_tag, fold_i, train_idx, test_idx)
        )
    return records


def _run_fold(cfg, rate_rng, variant, base_tag, fold_i, train_idx, test_idx):
    train_fold = variant.subset(train_idx)
    test_fold = variant.subset(test_idx)
    if cfg.standardize:
        train_fold, params = standardize(train_fold)
        test_fold = apply_standardization(params, test_fold)

    records = []
    for rep in cfg.representations:
        rep_tag, rep_train, rep_test = _represent(rep, train_fold, test_fold)
        for sampler in cfg.samplers:
            sampler_tag = sampler.render()
            sampled = resample(
                sampler,
                rep_train,
                rate_rng.derive_child(f"sample:{rep_tag}/{sampler_tag}/fold:{fold_i}"),
            )
            for clf in cfg.classifiers:
                clf_tag = clf.render()
                cell_rng = rate_rng.derive_child(
                    f"cell:{rep_tag}/{sampler_tag}/{clf_tag}/fold:{fold_i}"
                )
                try:
                    records.extend(
                        _run_cell(
                            cfg, cell_rng, sampled, rep_test, base_tag,
                            variant.fraud_rate, rep_tag, sampler_tag, clf, fold_i,
                        )
                    )
                except FraudBenchError as exc:
                    raise type(exc)(
                        f"{exc} [cell: dataset={base_tag}, rate={variant.fraud_rate:g}, "
                        f"representation={rep_tag}, sampler={sampler_tag}, "
                        f"classifier={clf_tag}, fold={fold_i}]"
                    ) from exc
    return records


def _represent(rep, train_fold, test_fold):
    kind, k = rep
    if kind == "raw":
        return "raw", train_fold, test_fold
    k_eff = train_fold.dims if k == "all" else int(k)
    model = fit_pca(train_fold, k_eff)
    return f"pca({k_eff})", transform(model, train_fold), transform(model, test_fold)


def _run_cell(cfg, cell_rng, sampled, rep_test, base_tag, fraud_rate,
              rep_tag, sampler_tag, spec, fold_i):
    clf_tag = spec.render()
    noise_on = cfg.noise.active and cfg.noise_site != "none"
    flips_pos = flips_neg = 0

    fit_data = sampled
    if noise_on and cfg.noise_site in ("train", "both"):
        noisy_train, fc = inject_noise(
            sampled.labels, cfg.noise, cell_rng.derive_child("noise-train")
        )
        fit_data = replace(sampled, labels=noisy_train)
        flips_pos += fc.fraud_to_normal
        flips_neg += fc.normal_to_fraud

    t0 = time.perf_counter()
    model = train(spec, fit_data, cell_rng.derive_child("train"))
    train_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    preds = predict(model, rep_test.features)
    predict_ms = (time.perf_counter() - t0) * 1000.0

    y_true = rep_test.labels

    def record(tag_suffix, report):
        return EvalRecord(
            experiment_id=cfg.experiment_id,
            dataset=base_tag + tag_suffix,
            fraud_rate=fraud_rate,
            representation=rep_tag,
            sampler=sampler_tag,
            classifier=clf_tag,
            seed=cfg.base_seed,
            fold=fold_i,
            metrics=report,
            noise_flips_pos=flips_pos,
            noise_flips_neg=flips_neg,
            train_ms=train_ms,
            predict_ms=predict_ms,
        )

    if noise_on and cfg.noise_site in ("test", "both"):
        y_noisy, fc = inject_noise(y_true, cfg.noise, cell_rng.derive_child("noise-test"))
        flips_pos += fc.fraud_to_normal
        flips_neg += fc.normal_to_fraud
        decomposition = decompose_error(y_true, y_noisy, preds)
        return [
            record("#model-error", decomposition.model_error),
            record("#real-error", decomposition.real_error),
        ]
    return [record("", score(confusion(y_true, preds)))]


def sweep_dimensions(cfg: ExperimentConfig, k_min: int, k_max: int):
    """One benchmark per component count k in [k_min, k_max].

    The component basis is nested, so PCA is fit once per fold at k_max and
    sliced per k.  Returns (records, evr_rows) where evr_rows are
    (fold, k, explained-variance ratio) for the training fold.
    """
    if k_min < 1 or k_min > k_max:
        raise ContractError(f"need 1 <= k_min <= k_max, got {k_min}..{k_max}")
    root = RandomSource(cfg.base_seed)
    base = load_base_dataset(cfg, root)
    if k_max > base.dims:
        raise ContractError(f"k_max={k_max} exceeds {base.dims} dataset features")
    base_tag = cfg.source.tag() + ("[std]" if cfg.standardize else "")

    records = []
    evr_rows = []
    for rate in cfg.fraud_rates:
        rate_tag = "native" if rate is None else format(rate, "g")
        variant = (
            base
            if rate is None
            else adjust_fraud_rate(base, rate, root.derive_child(f"adjust:{rate_tag}"))
        )
        rate_rng = root.derive_child(f"rate:{rate_tag}")
        plan = stratified_shuffle_split(
            variant.labels, cfg.test_fraction, cfg.n_folds, rate_rng.derive_child("split")
        )
        for fold_i, (train_idx, test_idx) in enumerate(plan.folds):
            train_fold = variant.subset(train_idx)
            test_fold = variant.subset(test_idx)
            if cfg.standardize:
                train_fold, params = standardize(train_fold)
                test_fold = apply_standardization(params, test_fold)
            model = fit_pca(train_fold, k_max)
            full_train = transform(model, train_fold)
            full_test = transform(model, test_fold)
            total_var = float(np.sum(np.var(train_fold.features, axis=0, ddof=1)))
            cum = np.cumsum(model.explained_variance)
            for k in range(k_min, k_max + 1):
                evr_rows.append((fold_i, k, float(cum[k - 1]) / total_var))
                rep_tag = f"pca({k})"
                names = tuple(f"V{i + 1}" for i in range(k))
                k_train = full_train.with_features(full_train.features[:, :k], names)
                k_test = full_test.with_features(full_test.features[:, :k], names)
                for sampler in cfg.samplers:
                    sampler_tag = sampler.render()
                    sampled = resample(
                        sampler,
                        k_train,
                        rate_rng.derive_child(f"sample:{rep_tag}/{sampler_tag}/fold:{fold_i}"),
                    )
                    for clf in cfg.classifiers:
                        clf_tag = clf.render()
                        cell_rng = rate_rng.derive_child(
                            f"cell:{rep_tag}/{sampler_tag}/{clf_tag}/fold:{fold_i}"
                        )
                        try:
                            records.extend(
                                _run_cell(
                                    cfg, cell_rng, sampled, k_test, base_tag,
                                    variant.fraud_rate, rep_tag, sampler_tag,
                                    clf, fold_i,
                                )
                            )
                        except FraudBenchError as exc:
                            raise type(exc)(
                                f"{exc} [cell: dataset={base_tag}, "
                                f"rate={variant.fraud_rate:g}, representation={rep_tag}, "
                                f"sampler={sampler_tag}, classifier={clf_tag}, "
                                f"fold={fold_i}]"
                            ) from exc
    records.sort(key=EvalRecord.sort_key)
    return records, evr_rows


def top_f1_curve(records, top_n: int = 3):
    """Plot-ready (classifier, k, mean F1) rows for the best classifiers.

    Ranking is by mean defined F1 across all sweep records; rows with
    undefined F1 are excluded here (and only here), mirroring how degenerate
    models are dropped from figures but kept in raw reports.
    """
    by_clf = {}
    for r in records:
        if r.metrics.f1 is not None:
            by_clf.setdefault(r.classifier, []).append(r)
    ranked = sorted(
        by_clf, key=lambda c: (-float(np.mean([r.metrics.f1 for r in by_clf[c]])), c)
    )
    curve = []
    for clf in ranked[:top_n]:
        per_k = {}
        for r in by_clf[clf]:
            k = int(r.representation[4:-1])  # "pca(k)"
            per_k.setdefault(k, []).append(r.metrics.f1)
        for k in sorted(per_k):
            curve.append((clf, k, float(np.mean(per_k[k]))))
    return curve


def noise_study(cfg: ExperimentConfig, flip_rates):
    """Benchmark once per symmetric flip rate; see README for the summary format.

    Test-site noise produces paired #model-error / #real-error records; the
    summary marks, per rate, the classifier minimizing mean 0/1 model error
    and the one minimizing mean 0/1 real error.
    """
    from fraudbench.noisecompound import NoiseSpec

    site = cfg.noise_site if cfg.noise_site != "none" else "test"
    all_records = []
    summary = []
    for eps in flip_rates:
        run_cfg = cfg.with_noise(NoiseSpec(eps, eps), site if eps > 0 else "none",
                                 suffix=f"#eps={eps:g}")
        records = run_benchmark(run_cfg)
        all_records.extend(records)
        summary.append(_argmin_summary(run_cfg.experiment_id, eps, records))
    return all_records, summary


def _argmin_summary(experiment_id, eps, records):
    def mean_err(rows):
        return float(np.mean([1.0 - r.metrics.accuracy for r in rows]))

    model_rows = {}
    real_rows = {}
    for r in records:
        if r.dataset.endswith("#model-error"):
            model_rows.setdefault(r.classifier, []).append(r)
        elif r.dataset.endswith("#real-error"):
            real_rows.setdefault(r.classifier, []).append(r)
        else:  # no test noise: the same record serves both roles
            model_rows.setdefault(r.classifier, []).append(r)
            real_rows.setdefault(r.classifier, []).append(r)
    best_model = min(model_rows, key=lambda c: (mean_err(model_rows[c]), c))
    best_real = min(real_rows, key=lambda c: (mean_err(real_rows[c]), c))
    return (
        f"{experiment_id}: eps={eps:g} "
        f"argmin-model-error={best_model} ({mean_err(model_rows[best_model]):.4f}) "
        f"argmin-real-error={best_real} ({mean_err(real_rows[best_real]):.4f})"
    )


def emit_projection(dataset: Dataset, n_components: int, out_path) -> None:
    """Write the first n principal coordinates plus label, for external plotting."""
    if n_components > dataset.dims:
        raise ContractError(
            f"n_components={n_components} exceeds {dataset.dims} dataset features"
        )
    model = fit_pca(dataset, n_components)
    write_csv(transform(model, dataset), out_path)


def _format_metric(value) -> str:
    return "" if value is None else format(value, ".9g")


def render_record(record: EvalRecord) -> list[str]:
    m = record.metrics
    return [
        record.experiment_id,
        record.dataset,
        format(record.fraud_rate, ".6g"),
        record.representation,
        record.sampler,
        record.classifier,
        str(record.seed),
        str(record.fold),
        _format_metric(m.accuracy),
        _format_metric(m.precision),
        _format_metric(m.recall),
        _format_metric(m.specificity),
        _format_metric(m.f1),
        _format_metric(m.g_mean),
        str(record.noise_flips_pos),
        str(record.noise_flips_neg),
        format(record.train_ms, ".3f"),
        format(record.predict_ms, ".3f"),
    ]


def write_report(records, path) -> None:
    """Fixed-order CSV; records sorted by cell coordinates; None -> empty field."""
    ordered = sorted(records, key=EvalRecord.sort_key)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for record in ordered:
            writer.writerow(render_record(record))


def write_evr(evr_rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fold", "k", "explained_variance_ratio"])
        for fold, k, ratio in evr_rows:
            writer.writerow([fold, k, format(ratio, ".12g")])


def write_curve(curve_rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["classifier", "k", "mean_f1"])
        for clf, k, mean_f1 in curve_rows:
            writer.writerow([clf, k, format(mean_f1, ".9g")])
