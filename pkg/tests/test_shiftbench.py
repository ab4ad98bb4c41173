import json

import numpy as np
import pytest
import scipy.stats

from rbashift import (
    Dataset,
    NumericalFailure,
    SCENARIOS,
    bias_sample,
    run_experiment,
    synth_scenario,
)
from rbashift.shiftbench import (
    BiasPlan,
    UniformModel,
    gaussian_log_weights,
    standardize,
    weighted_sample_indices,
    write_report_files,
)

from conftest import make_gaussian_dataset

FAST_TRAIN = {
    "cv": {"max_iters": 60, "grad_tol": 1e-3},
    "final": {"max_iters": 150, "grad_tol": 1e-4},
    "ratio": {"max_iters": 200, "grad_tol": 1e-4},
}


def _pool_dataset(seed=0, n=1000, d=4):
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, d))
    y = (X[:, 0] + X[:, 1] > 0).astype(int)
    return Dataset(X, y, 2)


class TestVariableSplit:
    def test_sizes_and_sides(self):
        data = _pool_dataset()
        plan = BiasPlan(kind="variable_split", n_src=200, n_trg=200, seed=3)
        src, trg = bias_sample(data, plan)
        assert src.n == 200 and trg.n == 200
        thr = data.features[:, 0].mean()
        assert np.all(src.features[:, 0] <= thr)
        assert np.all(trg.features[:, 0] > thr)

    def test_seeded_identical(self):
        data = _pool_dataset()
        plan = BiasPlan(kind="variable_split", n_src=150, n_trg=150, seed=11)
        s1, t1 = bias_sample(data, plan)
        s2, t2 = bias_sample(data, plan)
        np.testing.assert_array_equal(s1.features, s2.features)
        np.testing.assert_array_equal(t1.features, t2.features)

    def test_too_few_points(self):
        data = _pool_dataset(n=100)
        plan = BiasPlan(kind="variable_split", n_src=90, n_trg=90, seed=0)
        with pytest.raises(ValueError):
            bias_sample(data, plan)

    def test_pca_path_high_dimensional(self):
        g = np.random.default_rng(5)
        X = g.normal(size=(600, 15))
        data = Dataset(X, (X[:, 0] > 0).astype(int), 2)
        plan = BiasPlan(kind="variable_split", n_src=100, n_trg=100, seed=0)
        src, trg = bias_sample(data, plan)
        assert src.n == 100 and trg.n == 100

    def test_constant_column_ridge(self):
        # Singular covariance gets a diagonal ridge instead of failing.
        g = np.random.default_rng(9)
        X = g.normal(size=(500, 3))
        X[:, 2] = 1.5
        data = Dataset(X, (X[:, 0] > 0).astype(int), 2)
        plan = BiasPlan(kind="variable_split", n_src=80, n_trg=80, seed=0)
        src, _ = bias_sample(data, plan)
        assert src.n == 80


class TestWeightedSampling:
    def test_uniform_fallback_is_unweighted(self):
        # All-degenerate weights: per-index selection counts over 50 seeds
        # should look uniform (chi-square GOF non-significant at alpha 0.01).
        n_pool, k, seeds = 25, 10, 50
        counts = np.zeros(n_pool)
        logw = np.full(n_pool, -np.inf)
        for s in range(seeds):
            idx = weighted_sample_indices(np.random.default_rng(s), logw, k)
            counts[idx] += 1
        expected = np.full(n_pool, seeds * k / n_pool)
        stat, p = scipy.stats.chisquare(counts, expected)
        assert p > 0.01

    def test_rank_correlation_with_density(self):
        # Dense rows should be picked more often across seeds.
        g = np.random.default_rng(17)
        coords = g.normal(size=(400, 3))
        logw = gaussian_log_weights(coords, shrink=5.0)
        counts = np.zeros(400)
        for s in range(20):
            idx = weighted_sample_indices(np.random.default_rng(s), logw, 200)
            counts[idx] += 1
        rho, _ = scipy.stats.spearmanr(counts, logw)
        assert rho > 0

    def test_draw_too_many(self):
        with pytest.raises(ValueError):
            weighted_sample_indices(np.random.default_rng(0), np.zeros(4), 5)


class TestOtherSamplers:
    def test_gaussian_subsample_disjoint(self):
        data = _pool_dataset(seed=2, n=600)
        plan = BiasPlan(kind="gaussian_subsample", n_src=150, n_trg=150, seed=4)
        src, trg = bias_sample(data, plan)
        assert src.n == 150 and trg.n == 150
        # Disjointness: no source row equals a target row (distinct by draw).
        joined = np.vstack([src.features, trg.features])
        assert len(np.unique(joined, axis=0)) == 300

    def test_additive_noise_moments(self):
        X = np.zeros((5000, 3))
        data = Dataset(X, np.tile([0, 1], 2500), 2)
        plan = BiasPlan(kind="additive_noise", n_src=1000, n_trg=4000, seed=6)
        src, trg = bias_sample(data, plan)
        np.testing.assert_array_equal(src.features, 0.0)
        noise = trg.features.ravel()
        assert np.mean(noise) == pytest.approx(0.2, abs=0.02)
        assert np.std(noise) == pytest.approx(0.5, abs=0.02)


class TestBiasPlan:
    def test_validation(self):
        with pytest.raises(ValueError):
            BiasPlan(kind="bootstrap")
        with pytest.raises(ValueError):
            BiasPlan(kind="variable_split", n_src=0)
        with pytest.raises(ValueError):
            BiasPlan(kind="additive_noise", noise_sd=0.0)
        with pytest.raises(ValueError):
            BiasPlan(kind="synthetic_2d", label_noise=1.0)
        with pytest.raises(ValueError):
            BiasPlan(kind="synthetic_2d")  # missing cloud parameters

    def test_round_trip_all_kinds(self):
        plans = [
            BiasPlan(kind="variable_split", n_src=50, n_trg=60, seed=1, split_variable=2),
            BiasPlan(kind="gaussian_subsample", n_src=40, n_trg=40, seed=2, shrink=3.0),
            BiasPlan(kind="additive_noise", n_src=30, n_trg=30, noise_mean=0.1),
            BiasPlan(
                kind="synthetic_2d",
                src_mean=(0.0, 0.0),
                src_cov=((1.0, 0.0), (0.0, 1.0)),
                trg_mean=(1.0, 1.0),
                trg_cov=((1.0, 0.0), (0.0, 1.0)),
                boundary_w=(1.0, -1.0),
                label_noise=0.1,
            ),
        ]
        for plan in plans:
            assert BiasPlan.from_dict(plan.to_dict()) == plan


class TestScenarios:
    def test_known_names(self):
        assert set(SCENARIOS) == {"fig1", "fig2", "fig3", "fig5"}
        with pytest.raises(ValueError):
            synth_scenario("fig9", seed=0)

    def test_seeded_identical(self):
        s1, t1, b1 = synth_scenario("fig2", seed=21)
        s2, t2, b2 = synth_scenario("fig2", seed=21)
        np.testing.assert_array_equal(s1.features, s2.features)
        np.testing.assert_array_equal(t1.features, t2.features)
        np.testing.assert_array_equal(s1.labels, s2.labels)

    @pytest.mark.parametrize("name,rate", [("fig3", 0.20), ("fig5", 0.25)])
    def test_label_noise_rate(self, name, rate):
        src, _, (w, b) = synth_scenario(name, seed=33, n_src=100000, n_trg=2)
        clean = (src.features @ w + b > 0).astype(int)
        flipped = np.mean(clean != src.labels)
        assert flipped == pytest.approx(rate, abs=0.01)

    def test_sizes(self):
        src, trg, _ = synth_scenario("fig1", seed=0, n_src=120, n_trg=80)
        assert src.n == 120 and trg.n == 80


class TestStandardize:
    def test_source_statistics(self, rng):
        src = rng.normal(loc=3.0, scale=2.0, size=(300, 4))
        trg = rng.normal(loc=1.0, scale=1.0, size=(200, 4))
        s, t, (mu, sd) = standardize(src, trg)
        np.testing.assert_allclose(s.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(s.std(axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(t, (trg - mu) / sd)

    def test_constant_column_guard(self):
        src = np.ones((50, 2))
        src[:, 0] = np.arange(50)
        s, t, _ = standardize(src, src.copy())
        assert np.all(np.isfinite(s)) and np.all(np.isfinite(t))


def _tiny_config(**overrides):
    cfg = {
        "scenario": {"name": "fig2", "n_src": 60, "n_trg": 60},
        "methods": ["uniform", "lr"],
        "selection": {"folds": 3, "grid": [2.0**-8, 2.0**-4]},
        "repeats": 2,
        "seed": 100,
        "train": FAST_TRAIN,
    }
    cfg.update(overrides)
    return cfg


class TestRunner:
    def test_smoke_report_shape(self):
        report = run_experiment(_tiny_config())
        assert len(report.rows) == 4  # 2 methods x 2 repeats
        assert set(report.aggregate) == {"uniform", "lr"}
        assert report.seeds == [100, 101]
        assert "uniform_vs_lr" in report.pairwise_logloss

    def test_uniform_method_exact_logloss(self):
        report = run_experiment(_tiny_config(methods=["uniform"], repeats=1))
        (row,) = report.rows
        assert row["logloss_bits"] == 1.0  # log2 of K=2
        assert row["entropy_bits"] == 1.0

    def test_aggregate_matches_rows(self):
        report = run_experiment(_tiny_config())
        for method, agg in report.aggregate.items():
            rows = [r["logloss_bits"] for r in report.rows if r["method"] == method]
            assert agg["logloss_mean"] == pytest.approx(np.mean(rows), abs=1e-12)

    def test_deterministic_modulo_timestamp(self):
        cfg = _tiny_config(methods=["uniform", "lr"], repeats=1)
        d1 = run_experiment(cfg).to_dict()
        d2 = run_experiment(cfg).to_dict()
        d1.pop("timestamp")
        d2.pop("timestamp")
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)

    def test_all_repeats_failing_raises(self):
        # More folds than source rows: every method of every repeat fails.
        cfg = _tiny_config(selection={"folds": 100, "grid": [0.5]}, methods=["lr"])
        with pytest.raises(NumericalFailure):
            run_experiment(cfg)

    def test_partial_failure_still_reports(self):
        cfg = _tiny_config(methods=["uniform", "kernel_lr"], repeats=1)
        cfg["kernel"] = {"kind": "polynomial", "degree": 2}
        cfg["selection"] = {"folds": 100, "grid": [0.5]}  # kernel_lr will fail
        report = run_experiment(cfg)
        assert {r["method"] for r in report.rows} == {"uniform"}
        assert any(f["stage"] == "method:kernel_lr" for f in report.failures)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            run_experiment({"methods": ["lr"]})  # neither scenario nor dataset
        with pytest.raises(ValueError):
            run_experiment(_tiny_config(methods=["boost"]))
        with pytest.raises(ValueError):
            run_experiment(_tiny_config(methods=["kernel_lr"]))  # no kernel
        with pytest.raises(ValueError):
            run_experiment(_tiny_config(repeats=0))

    def test_dataset_path_round_trip(self, tmp_path):
        import pandas as pd

        data = _pool_dataset(seed=8, n=500, d=3)
        frame = pd.DataFrame(data.features, columns=["a", "b", "c"])
        frame["label"] = data.labels
        csv_path = tmp_path / "pool.csv"
        frame.to_csv(csv_path, index=False)
        cfg = {
            "dataset": {
                "path": str(csv_path),
                "label_column": "label",
                "bias_plan": {"kind": "variable_split", "n_src": 80, "n_trg": 80},
            },
            "methods": ["uniform", "lr"],
            "selection": {"folds": 3, "grid": [2.0**-4]},
            "repeats": 1,
            "seed": 7,
            "train": FAST_TRAIN,
        }
        report = run_experiment(cfg)
        assert len(report.rows) == 2

    def test_output_files(self, tmp_path):
        out = tmp_path / "exp"
        report = run_experiment(_tiny_config(repeats=1), output_dir=out)
        for name in ("report.json", "scores.csv", "ratios.csv", "curves.csv", "selection.csv"):
            assert (out / name).exists(), name
        blob = json.loads((out / "report.json").read_text())
        assert blob["standardized"] is True
        assert blob["ratio_clip"] == [1e-3, 1e3]
        assert "timestamp" in blob
        import pandas as pd

        scores = pd.read_csv(out / "scores.csv")
        assert len(scores) == len(report.rows)
        ratios = pd.read_csv(out / "ratios.csv")
        assert len(ratios) == 60  # repeat-0 source sample


class TestUniformModel:
    def test_constant_rows(self):
        model = UniformModel(class_count=4)
        P = model.predict_proba(np.zeros((7, 2)))
        np.testing.assert_array_equal(P, 0.25)
