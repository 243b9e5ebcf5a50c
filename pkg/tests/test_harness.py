import numpy as np
import pytest

import fraudbench.harness.runner as runner_module
from fraudbench.classifiers import ClassifierSpec
from fraudbench.datasets import load_csv, make_synthetic
from fraudbench.errors import ContractError
from fraudbench.harness.config import (
    CsvSource,
    ExperimentConfig,
    SyntheticSource,
    parse_config,
)
from fraudbench.harness.runner import (
    REPORT_COLUMNS,
    emit_projection,
    noise_study,
    run_benchmark,
    sweep_dimensions,
    top_f1_curve,
    write_report,
)
from fraudbench.matrixcore import RandomSource
from fraudbench.noisecompound import NoiseSpec
from fraudbench.pca import fit_pca, transform
from fraudbench.resampling import SamplerSpec


def small_config(**overrides):
    base = dict(
        experiment_id="test",
        base_seed=7,
        source=SyntheticSource(normals=200, frauds=50, dims=4, separation=2.5),
        representations=(("raw", None),),
        classifiers=(ClassifierSpec("gaussian_nb"), ClassifierSpec("decision_tree")),
        n_folds=2,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def strip_times(csv_text):
    lines = csv_text.strip().splitlines()
    return [",".join(line.split(",")[:-2]) for line in lines]


class TestRunBenchmark:
    def test_grid_cardinality(self):
        cfg = small_config(
            representations=(("raw", None), ("pca", 2)),
            n_folds=5,
        )
        records = run_benchmark(cfg)
        assert len(records) == 2 * 2 * 5  # reps x classifiers x folds
        keys = {(r.representation, r.sampler, r.classifier, r.fold) for r in records}
        assert len(keys) == len(records)  # unique cell coordinates

    def test_records_self_describing(self):
        records = run_benchmark(small_config())
        r = records[0]
        assert r.experiment_id == "test"
        assert r.dataset == "synthetic[std]"
        assert 0.0 < r.fraud_rate < 1.0
        assert r.seed == 7
        assert r.metrics.accuracy is not None

    def test_knn_identical_between_raw_and_full_pca(self):
        cfg = small_config(
            representations=(("raw", None), ("pca", "all")),
            classifiers=(ClassifierSpec("knn"),),
            n_folds=3,
        )
        records = run_benchmark(cfg)
        raw = {r.fold: r.metrics for r in records if r.representation == "raw"}
        pca = {r.fold: r.metrics for r in records if r.representation == "pca(4)"}
        assert raw and raw.keys() == pca.keys()
        assert all(raw[f] == pca[f] for f in raw)

    def test_deterministic_across_runs(self):
        cfg = small_config(samplers=(SamplerSpec("smote", k_neighbors=3),))
        a = run_benchmark(cfg)
        b = run_benchmark(cfg)
        for ra, rb in zip(a, b):
            assert ra.metrics == rb.metrics
            assert ra.sort_key() == rb.sort_key()

    def test_report_byte_identical_modulo_wall_times(self, tmp_path):
        cfg = small_config()
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_report(run_benchmark(cfg), p1)
        write_report(run_benchmark(cfg), p2)
        assert strip_times(p1.read_text()) == strip_times(p2.read_text())

    def test_fraud_rate_axis(self):
        cfg = small_config(fraud_rates=(None, 0.1))
        records = run_benchmark(cfg)
        rates = sorted({r.fraud_rate for r in records})
        assert len(rates) == 2
        # adjusted variant: floor semantics keep the realized rate at or
        # just under the 0.1 target (here 22 frauds / 222 rows)
        assert rates[0] == pytest.approx(22 / 222)
        assert rates[1] == 0.2

    def test_resampling_sees_training_rows_only(self, monkeypatch):
        calls = []
        real_resample = runner_module.resample

        def spy(spec, data, rng):
            calls.append(data.n)
            return real_resample(spec, data, rng)

        monkeypatch.setattr(runner_module, "resample", spy)
        cfg = small_config(samplers=(SamplerSpec("random_under"),), n_folds=2)
        run_benchmark(cfg)
        # one call per (rate, fold, representation, sampler); each sees the
        # 80% training portion of the 250 rows, never the test fold
        assert calls == [200, 200]

    def test_error_carries_cell_coordinates(self):
        cfg = small_config(classifiers=(ClassifierSpec("knn", {"k": 1000}),))
        with pytest.raises(ContractError, match="classifier=knn"):
            run_benchmark(cfg)


class TestNoise:
    def test_test_site_noise_emits_model_and_real_records(self):
        cfg = small_config(noise=NoiseSpec(0.3, 0.3), noise_site="test")
        records = run_benchmark(cfg)
        model_rows = [r for r in records if r.dataset.endswith("#model-error")]
        real_rows = [r for r in records if r.dataset.endswith("#real-error")]
        assert len(model_rows) == len(real_rows) == len(records) // 2
        assert any(r.noise_flips_pos + r.noise_flips_neg > 0 for r in records)

    def test_real_error_rows_match_clean_run(self):
        # test-site noise cannot leak into training or truth: the #real-error
        # records must equal the no-noise run bit for bit
        clean = run_benchmark(small_config())
        noisy = run_benchmark(small_config(noise=NoiseSpec(0.3, 0.3), noise_site="test"))
        real_rows = [r for r in noisy if r.dataset.endswith("#real-error")]
        assert len(real_rows) == len(clean)
        for rc, rn in zip(clean, real_rows):
            assert rc.metrics == rn.metrics

    def test_train_site_noise_changes_fit_but_keeps_single_records(self):
        records = run_benchmark(small_config(noise=NoiseSpec(0.4, 0.4), noise_site="train"))
        assert all("#" not in r.dataset for r in records)
        assert any(r.noise_flips_pos + r.noise_flips_neg > 0 for r in records)

    def test_noise_study_rates_and_summary(self):
        cfg = small_config(classifiers=(ClassifierSpec("gaussian_nb"),))
        records, summary = noise_study(cfg, [0.0, 0.2])
        ids = {r.experiment_id for r in records}
        assert ids == {"test#eps=0", "test#eps=0.2"}
        plain = [r for r in records if r.experiment_id == "test#eps=0"]
        assert all("#" not in r.dataset for r in plain)
        assert len(summary) == 2
        assert "argmin-model-error" in summary[0]


class TestSweep:
    def test_sweep_cardinality_and_tags(self):
        cfg = small_config(classifiers=(ClassifierSpec("gaussian_nb"),), n_folds=2)
        records, evr_rows = sweep_dimensions(cfg, 2, 4)
        assert {r.representation for r in records} == {"pca(2)", "pca(3)", "pca(4)"}
        assert len(records) == 3 * 2
        assert len(evr_rows) == 3 * 2

    def test_evr_monotone_and_complete(self):
        cfg = small_config(n_folds=2)
        _, evr_rows = sweep_dimensions(cfg, 1, 4)
        by_fold = {}
        for fold, k, ratio in evr_rows:
            by_fold.setdefault(fold, []).append((k, ratio))
        for rows in by_fold.values():
            ratios = [r for _, r in sorted(rows)]
            assert all(b >= a - 1e-12 for a, b in zip(ratios, ratios[1:]))
            assert abs(ratios[-1] - 1.0) <= 1e-8

    def test_sweep_k_range_validation(self):
        cfg = small_config()
        with pytest.raises(ContractError):
            sweep_dimensions(cfg, 2, 40)
        with pytest.raises(ContractError):
            sweep_dimensions(cfg, 0, 3)

    def test_top_f1_curve_selects_best_and_drops_undefined(self):
        cfg = small_config(
            classifiers=(
                ClassifierSpec("gaussian_nb"),
                ClassifierSpec("knn"),
                ClassifierSpec("decision_tree"),
                ClassifierSpec("dummy_majority"),  # always-undefined F1
            ),
            n_folds=2,
        )
        records, _ = sweep_dimensions(cfg, 2, 3)
        curve = top_f1_curve(records, top_n=3)
        names = {c for c, _, _ in curve}
        assert len(names) == 3
        assert "dummy_majority" not in names
        assert {k for _, k, _ in curve} == {2, 3}


class TestProjection:
    def test_projection_shape(self, tmp_path):
        d = make_synthetic(50, 10, 5, 2.0, RandomSource(3))
        out = tmp_path / "proj.csv"
        emit_projection(d, 3, out)
        loaded = load_csv(out)
        assert loaded.n == 60
        assert loaded.feature_names == ("V1", "V2", "V3")

    def test_projection_of_pca_invariant_dataset_is_identity(self, tmp_path):
        base = make_synthetic(80, 20, 5, 2.0, RandomSource(4))
        aligned = transform(fit_pca(base, 5), base)  # principal-axis aligned
        out = tmp_path / "proj.csv"
        emit_projection(aligned, 3, out)
        loaded = load_csv(out)
        np.testing.assert_allclose(loaded.features, aligned.features[:, :3], atol=1e-8)

    def test_component_bound(self, tmp_path):
        d = make_synthetic(20, 5, 2, 1.0, RandomSource(0))
        with pytest.raises(ContractError):
            emit_projection(d, 3, tmp_path / "x.csv")


class TestConfigParsing:
    def test_full_config_round_trip(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "# comment\n"
            "[experiment]\n"
            "id = demo\n"
            "seed = 99\n"
            "[data]\n"
            "source = synthetic\n"
            "normals = 100\n"
            "frauds = 25\n"
            "dims = 3\n"
            "separation = 2.0\n"
            "standardize = false\n"
            "fraud_rates = native, 0.1\n"
            "[split]\n"
            "test_fraction = 0.25\n"
            "folds = 3\n"
            "[representations]\n"
            "raw = on\n"
            "pca = 2, all\n"
            "[samplers]\n"
            "none = on\n"
            "smote = ratio=0.8,k=3\n"
            "[classifiers]\n"
            "knn = k=3\n"
            "gaussian_nb = on\n"
            "[noise]\n"
            "flip_fraud_to_normal = 0.1\n"
            "apply_to = test\n"
        )
        cfg = parse_config(path)
        assert cfg.experiment_id == "demo"
        assert cfg.base_seed == 99
        assert cfg.source == SyntheticSource(100, 25, 3, 2.0)
        assert cfg.standardize is False
        assert cfg.fraud_rates == (None, 0.1)
        assert cfg.test_fraction == 0.25 and cfg.n_folds == 3
        assert cfg.representations == (("raw", None), ("pca", 2), ("pca", "all"))
        assert cfg.samplers == (
            SamplerSpec(), SamplerSpec("smote", target_ratio=0.8, k_neighbors=3),
        )
        assert cfg.classifiers == (
            ClassifierSpec("knn", {"k": 3}), ClassifierSpec("gaussian_nb"),
        )
        assert cfg.noise == NoiseSpec(0.1, 0.0)
        assert cfg.noise_site == "test"

    def test_unknown_section_rejected_with_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[experiment]\nseed = 1\n[nonsense]\nx = 1\n")
        with pytest.raises(ContractError, match="bad.cfg:3"):
            parse_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[experiment]\nseed = 1\nspeed = fast\n")
        with pytest.raises(ContractError, match="unknown key 'speed'"):
            parse_config(path)

    def test_unknown_classifier_hyperparameter_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text(
            "[experiment]\nseed = 1\n[data]\nsource = synthetic\nnormals = 10\n"
            "frauds = 5\ndims = 2\nseparation = 1\n[representations]\nraw = on\n"
            "[classifiers]\nknn = neighbors=3\n"
        )
        with pytest.raises(ContractError, match="unknown hyperparameter 'neighbors'"):
            parse_config(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[experiment]\nseed = 1\nseed = 2\n")
        with pytest.raises(ContractError, match="duplicate"):
            parse_config(path)

    def test_missing_csv_rejected_at_validation(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text(
            "[experiment]\nseed = 1\n[data]\nsource = csv\npath = missing.csv\n"
            "[representations]\nraw = on\n[classifiers]\nknn = on\n"
        )
        with pytest.raises(ContractError, match="not found"):
            parse_config(path)

    def test_relative_csv_path_resolved_against_config(self, tmp_path):
        from fraudbench.datasets import write_csv

        write_csv(make_synthetic(10, 5, 2, 1.0, RandomSource(0)), tmp_path / "d.csv")
        path = tmp_path / "ok.cfg"
        path.write_text(
            "[experiment]\nseed = 1\n[data]\nsource = csv\npath = d.csv\n"
            "[representations]\nraw = on\n[classifiers]\nknn = on\n"
        )
        cfg = parse_config(path)
        assert isinstance(cfg.source, CsvSource)
        assert cfg.source.path == str(tmp_path / "d.csv")

    @pytest.mark.parametrize(
        "name",
        [
            "accuracy_pathology",
            "pca_preservation",
            "raw_vs_pca",
            "zoo_imbalance",
            "dim_sweep",
            "noise_study",
        ],
    )
    def test_shipped_configs_parse(self, name):
        import os

        cfg = parse_config(os.path.join(os.path.dirname(__file__), "..", "configs", f"{name}.cfg"))
        assert cfg.test_fraction == 0.2


def test_report_columns_fixed_order():
    assert REPORT_COLUMNS == (
        "experiment_id", "dataset", "fraud_rate", "representation", "sampler",
        "classifier", "seed", "fold", "accuracy", "precision", "recall",
        "specificity", "f1", "g_mean", "noise_flips_pos", "noise_flips_neg",
        "train_ms", "predict_ms",
    )
