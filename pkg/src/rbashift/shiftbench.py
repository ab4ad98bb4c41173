"""Bias-inducing samplers, pinned synthetic scenarios, and the experiment runner.

The samplers manufacture covariate shift from an ordinary dataset (split on a
variable's mean, Gaussian-tilted subsampling, additive feature noise) or
generate 2-D two-Gaussian scenarios outright.  The runner chains
bias-sample -> ratio fit -> per-method selection -> fit -> target metrics for
a configured repeat count and writes a deterministic report.
"""

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .baselines import iw_fit, kiw_fit, klr_fit, lr_fit
from .core import (
    Dataset,
    MetricReport,
    NumericalFailure,
    evaluate,
    load_csv,
)
from .density_ratio import (
    DEFAULT_CLIP,
    fit_ratio_cv,
    ratio_many,
    save_ratios_csv,
)
from .kernel_rba import krba_fit
from .kernels import KernelSpec
from .model_select import DEFAULT_GRID, SelectionPlan, select
from .optim import TrainConfig
from .rba import rba_fit
from .stats import paired_t_test

PCA_DIM_THRESHOLD = 10
PCA_COMPONENTS = 5
RIDGE = 1e-6

METHOD_IDS = ("rba", "kernel_rba", "lr", "iw", "kernel_lr", "kernel_iw", "uniform")
_KERNEL_METHODS = ("kernel_rba", "kernel_lr", "kernel_iw")
# Plain CV for the unweighted estimators; importance-weighted CV for the rest.
_CV_METHODS = ("lr", "kernel_lr")

# Tiered optimizer budgets: selection folds only need to rank lambdas, the
# final fit and the ratio discriminator run tighter.
CV_TRAIN = TrainConfig(max_iters=300, grad_tol=1e-4)
FINAL_TRAIN = TrainConfig(max_iters=2000, grad_tol=1e-5)
RATIO_TRAIN = TrainConfig(max_iters=1500, grad_tol=1e-6)


# ---------------------------------------------------------------------------
# Bias plans and samplers


@dataclass(frozen=True)
class BiasPlan:
    """How to carve a source/target pair out of data (or generate one)."""

    kind: str
    n_src: int = 200
    n_trg: int = 200
    seed: int = 0
    # variable_split / gaussian_subsample
    split_variable: int = 0
    shrink: float = 5.0
    # additive_noise
    noise_mean: float = 0.2
    noise_sd: float = 0.5
    # synthetic_2d
    src_mean: tuple | None = None
    src_cov: tuple | None = None
    trg_mean: tuple | None = None
    trg_cov: tuple | None = None
    boundary_w: tuple | None = None
    boundary_b: float = 0.0
    label_noise: float = 0.0
    # optional faint secondary source component: (weight, mean, cov)
    src_mix: tuple | None = None

    def __post_init__(self):
        kinds = ("variable_split", "gaussian_subsample", "additive_noise", "synthetic_2d")
        if self.kind not in kinds:
            raise ValueError(f"unknown bias plan kind {self.kind!r}")
        if self.n_src < 1 or self.n_trg < 1:
            raise ValueError("n_src and n_trg must be >= 1")
        if self.noise_sd <= 0:
            raise ValueError("noise_sd must be positive")
        if not 0.0 <= self.label_noise < 1.0:
            raise ValueError("label_noise must lie in [0, 1)")
        if self.shrink <= 0:
            raise ValueError("shrink must be positive")
        if self.kind == "synthetic_2d":
            for name in ("src_mean", "src_cov", "trg_mean", "trg_cov", "boundary_w"):
                if getattr(self, name) is None:
                    raise ValueError(f"synthetic_2d plan needs {name}")
            if self.src_mix is not None:
                weight = self.src_mix[0]
                if not 0.0 < weight < 1.0 or len(self.src_mix) != 3:
                    raise ValueError("src_mix must be (weight in (0,1), mean, cov)")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n_src": self.n_src, "n_trg": self.n_trg, "seed": self.seed}
        if self.kind in ("variable_split", "gaussian_subsample"):
            d["split_variable"] = self.split_variable
            d["shrink"] = self.shrink
        if self.kind == "additive_noise":
            d["noise_mean"] = self.noise_mean
            d["noise_sd"] = self.noise_sd
        if self.kind == "synthetic_2d":
            d.update(
                src_mean=list(self.src_mean),
                src_cov=[list(row) for row in self.src_cov],
                trg_mean=list(self.trg_mean),
                trg_cov=[list(row) for row in self.trg_cov],
                boundary_w=list(self.boundary_w),
                boundary_b=self.boundary_b,
                label_noise=self.label_noise,
            )
            if self.src_mix is not None:
                weight, mean, cov = self.src_mix
                d["src_mix"] = {
                    "weight": weight,
                    "mean": list(mean),
                    "cov": [list(row) for row in cov],
                }
        return d

    @staticmethod
    def from_dict(d: dict) -> "BiasPlan":
        kw = dict(d)
        for name in ("src_mean", "trg_mean", "boundary_w"):
            if kw.get(name) is not None:
                kw[name] = tuple(kw[name])
        for name in ("src_cov", "trg_cov"):
            if kw.get(name) is not None:
                kw[name] = tuple(tuple(row) for row in kw[name])
        mix = kw.get("src_mix")
        if isinstance(mix, dict):
            kw["src_mix"] = (
                mix["weight"],
                tuple(mix["mean"]),
                tuple(tuple(row) for row in mix["cov"]),
            )
        return BiasPlan(**kw)


def _pca_coords(X: np.ndarray) -> np.ndarray:
    """Project onto the first PCA_COMPONENTS principal axes when d is large."""
    if X.shape[1] <= PCA_DIM_THRESHOLD:
        return X
    centered = X - X.mean(axis=0)
    # Right singular vectors of the centered matrix are the principal axes.
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    return centered @ vt[:PCA_COMPONENTS].T


def gaussian_log_weights(coords: np.ndarray, shrink: float) -> np.ndarray:
    """Log of the N(mu/shrink, Sigma/shrink) density at each row (up to a
    constant); a singular covariance gets a 1e-6 diagonal ridge."""
    mu = coords.mean(axis=0)
    if coords.shape[0] < 2:
        raise ValueError("need at least two rows to estimate a covariance")
    C = np.atleast_2d(np.cov(coords, rowvar=False))
    C_shrunk = C / shrink
    try:
        np.linalg.cholesky(C_shrunk)
    except np.linalg.LinAlgError:
        C_shrunk = C_shrunk + RIDGE * np.eye(C_shrunk.shape[0])
    z = coords - mu / shrink
    solved = np.linalg.solve(C_shrunk, z.T).T
    return -0.5 * np.sum(z * solved, axis=1)


def weighted_sample_indices(rng, log_weights: np.ndarray, k: int) -> np.ndarray:
    """k draws without replacement, each in proportion to remaining weights.

    Implemented as Gumbel-top-k on log weights, which has exactly the
    sequential-draw distribution and never underflows.  All-degenerate
    weights fall back to uniform.
    """
    logw = np.asarray(log_weights, dtype=float).copy()
    if k > logw.shape[0]:
        raise ValueError("cannot draw more indices than rows")
    bad = ~np.isfinite(logw)
    if bad.all():
        logw[:] = 0.0
    keys = logw + rng.gumbel(size=logw.shape[0])
    order = np.argsort(-keys, kind="stable")
    return np.sort(order[:k])


def _variable_split(data: Dataset, plan: BiasPlan, rng) -> tuple[Dataset, Dataset]:
    if not 0 <= plan.split_variable < data.dim:
        raise ValueError("split_variable outside the feature dimension")
    v = data.features[:, plan.split_variable]
    thr = v.mean()
    src_side = np.flatnonzero(v <= thr)
    trg_side = np.flatnonzero(v > thr)
    if src_side.size < plan.n_src:
        raise ValueError("too few points in the source portion")
    if trg_side.size < plan.n_trg:
        raise ValueError("too few points in the target portion")
    coords = _pca_coords(data.features[src_side])
    logw = gaussian_log_weights(coords, plan.shrink)
    src_idx = src_side[weighted_sample_indices(rng, logw, plan.n_src)]
    trg_idx = np.sort(rng.choice(trg_side, size=plan.n_trg, replace=False))
    return data.subset(src_idx), data.subset(trg_idx)


def _gaussian_subsample(data: Dataset, plan: BiasPlan, rng) -> tuple[Dataset, Dataset]:
    if plan.n_src + plan.n_trg > data.n:
        raise ValueError("too few points for disjoint source/target draws")
    coords = _pca_coords(data.features)
    logw = gaussian_log_weights(coords, plan.shrink)
    src_idx = weighted_sample_indices(rng, logw, plan.n_src)
    rest = np.setdiff1d(np.arange(data.n), src_idx)
    trg_idx = np.sort(rng.choice(rest, size=plan.n_trg, replace=False))
    return data.subset(src_idx), data.subset(trg_idx)


def _additive_noise(data: Dataset, plan: BiasPlan, rng) -> tuple[Dataset, Dataset]:
    if plan.n_src + plan.n_trg > data.n:
        raise ValueError("too few points for disjoint source/target draws")
    perm = rng.permutation(data.n)
    src_idx = np.sort(perm[: plan.n_src])
    trg_idx = np.sort(perm[plan.n_src : plan.n_src + plan.n_trg])
    src = data.subset(src_idx)
    trg = data.subset(trg_idx)
    noised = trg.features + rng.normal(plan.noise_mean, plan.noise_sd, trg.features.shape)
    return src, Dataset(noised, trg.labels, trg.class_count)


def _synthetic_2d(plan: BiasPlan, rng) -> tuple[Dataset, Dataset, tuple]:
    w = np.asarray(plan.boundary_w, dtype=float)
    b = float(plan.boundary_b)

    def draw_X(mean, cov, n):
        return rng.multivariate_normal(np.asarray(mean, float), np.asarray(cov, float), size=n)

    def label(X):
        y = (X @ w + b > 0).astype(np.int64)
        if plan.label_noise > 0:
            flip = rng.random(X.shape[0]) < plan.label_noise
            y = np.where(flip, 1 - y, y)
        return y

    if plan.src_mix is not None:
        mix_w, mix_mean, mix_cov = plan.src_mix
        k = rng.binomial(plan.n_src, mix_w)
        Xs = np.vstack(
            [
                draw_X(plan.src_mean, plan.src_cov, plan.n_src - k),
                draw_X(mix_mean, mix_cov, k),
            ]
        )
        Xs = Xs[rng.permutation(plan.n_src)]
    else:
        Xs = draw_X(plan.src_mean, plan.src_cov, plan.n_src)
    src = Dataset(Xs, label(Xs), 2)
    Xt = draw_X(plan.trg_mean, plan.trg_cov, plan.n_trg)
    trg = Dataset(Xt, label(Xt), 2)
    return src, trg, (w, b)


def bias_sample(data: Dataset | None, plan: BiasPlan) -> tuple[Dataset, Dataset]:
    """Produce a (source, target) pair according to the plan.

    All randomness flows from plan.seed; a repeated call returns identical
    samples.  synthetic_2d ignores `data` (pass None).
    """
    rng = np.random.default_rng(plan.seed)
    if plan.kind == "synthetic_2d":
        src, trg, _ = _synthetic_2d(plan, rng)
        return src, trg
    if data is None:
        raise ValueError(f"{plan.kind} requires a dataset")
    if plan.kind == "variable_split":
        return _variable_split(data, plan, rng)
    if plan.kind == "gaussian_subsample":
        return _gaussian_subsample(data, plan, rng)
    return _additive_noise(data, plan, rng)


# ---------------------------------------------------------------------------
# Pinned synthetic scenarios

# Constants are artifact-defined and frozen; the acceptance thresholds are
# calibrated against exactly these values.  fig1/fig2: a broad source cloud
# plus a faint secondary source component sitting on a compact target cloud
# shifted far along the boundary — the target lives in thin-but-nonzero
# source density, the regime where expressive features pay off while the
# linear model stays hedged; fig3: closely overlapping clouds with 20%
# flips; fig5: the same far compact target but with no secondary source
# support and 25% flips, the weight-blowup regime.
_FIG2_FAMILY = {
    "src_mean": (0.0, 0.0),
    "src_cov": ((1.0, 0.0), (0.0, 1.0)),
    "trg_mean": (1.45, 1.45),
    "trg_cov": ((0.25, 0.0), (0.0, 0.25)),
    "boundary_w": (1.0, -1.0),
    "boundary_b": 0.0,
    "label_noise": 0.05,
    "src_mix": (0.15, (1.45, 1.45), ((0.25, 0.0), (0.0, 0.25))),
}
_FIG3_FAMILY = {
    "src_mean": (-0.35, -0.35),
    "src_cov": ((0.8, 0.0), (0.0, 0.8)),
    "trg_mean": (0.35, 0.35),
    "trg_cov": ((0.8, 0.0), (0.0, 0.8)),
    "boundary_w": (1.0, -1.0),
    "boundary_b": 0.0,
    "label_noise": 0.20,
}
# fig5: a far compact target with no secondary source support — importance
# weights concentrate on a handful of source points, so the weighted fit
# swings seed to seed while the robust fit settles near uniform.
_FIG5_FAMILY = {
    "src_mean": (0.0, 0.0),
    "src_cov": ((1.0, 0.0), (0.0, 1.0)),
    "trg_mean": (1.5, 1.5),
    "trg_cov": ((0.25, 0.0), (0.0, 0.25)),
    "boundary_w": (1.0, -1.0),
    "boundary_b": 0.0,
    "label_noise": 0.25,
}
SCENARIOS = {
    "fig1": dict(_FIG2_FAMILY),
    "fig2": dict(_FIG2_FAMILY),
    "fig3": dict(_FIG3_FAMILY),
    "fig5": dict(_FIG5_FAMILY),
}


def synth_scenario(
    name: str, seed: int, n_src: int = 200, n_trg: int = 200
) -> tuple[Dataset, Dataset, tuple]:
    """Generate a pinned scenario; returns (src, trg, (boundary_w, boundary_b))."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; known: {sorted(SCENARIOS)}")
    plan = BiasPlan(kind="synthetic_2d", n_src=n_src, n_trg=n_trg, seed=seed, **SCENARIOS[name])
    return _synthetic_2d(plan, np.random.default_rng(plan.seed))


# Long-form public name for the same generator
synth_figure_scenarios = synth_scenario


def standardize(src_X: np.ndarray, trg_X: np.ndarray):
    """Zero-mean/unit-variance transform fitted on the source sample only."""
    mu = src_X.mean(axis=0)
    sd = src_X.std(axis=0)
    sd = np.where(sd < 1e-12, 1.0, sd)
    return (src_X - mu) / sd, (trg_X - mu) / sd, (mu, sd)


# ---------------------------------------------------------------------------
# Experiment runner


@dataclass(frozen=True)
class UniformModel:
    """Dummy estimator predicting 1/K everywhere."""

    class_count: int

    def predict_proba(self, X, ratios=None) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.full((X.shape[0], self.class_count), 1.0 / self.class_count)


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    seeds: list
    ratio_clip: tuple
    rows: list
    aggregate: dict
    pairwise_logloss: dict
    failures: list
    selection_rows: list = field(compare=False, default_factory=list)
    ratios_repeat0: np.ndarray | None = field(compare=False, default=None)
    timing: dict = field(compare=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "seeds": list(self.seeds),
            "ratio_clip": list(self.ratio_clip),
            "standardized": True,
            "rows": self.rows,
            "aggregate": self.aggregate,
            "pairwise_logloss": self.pairwise_logloss,
            "failures": self.failures,
            "timestamp": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _train_cfg(overrides: dict | None, base: TrainConfig) -> TrainConfig:
    if not overrides:
        return base
    return replace(base, **overrides)


def _method_fit_fn(method: str, kernel: KernelSpec | None, cfg: TrainConfig):
    if method in _KERNEL_METHODS and kernel is None:
        raise ValueError(f"method {method!r} needs a kernel spec")

    def fit(train: Dataset, train_ratios, lam: float):
        if method == "rba":
            return rba_fit(train, train_ratios, lam, cfg)
        if method == "kernel_rba":
            return krba_fit(train, train_ratios, kernel, lam, cfg)
        if method == "lr":
            return lr_fit(train, lam, cfg)
        if method == "iw":
            return iw_fit(train, train_ratios, lam, cfg)
        if method == "kernel_lr":
            return klr_fit(train, kernel, lam, cfg)
        if method == "kernel_iw":
            return kiw_fit(train, train_ratios, kernel, lam, cfg)
        raise ValueError(f"unknown method {method!r}")

    return fit


def _resolve_config(config: dict) -> dict:
    cfg = dict(config)
    if ("scenario" in cfg) == ("dataset" in cfg):
        raise ValueError("config needs exactly one of 'scenario' or 'dataset'")
    methods = cfg.get("methods")
    if not methods:
        raise ValueError("config needs a non-empty 'methods' list")
    for m in methods:
        if m not in METHOD_IDS:
            raise ValueError(f"unknown method {m!r}; known: {METHOD_IDS}")
    if any(m in _KERNEL_METHODS for m in methods) and "kernel" not in cfg:
        raise ValueError("kernel methods need a 'kernel' spec in the config")
    cfg["repeats"] = int(cfg.get("repeats", 1))
    if cfg["repeats"] < 1:
        raise ValueError("repeats must be >= 1")
    cfg["seed"] = int(cfg.get("seed", 0))
    sel = dict(cfg.get("selection", {}))
    sel.setdefault("folds", 5)
    sel.setdefault("grid", list(DEFAULT_GRID))
    sel["folds"] = int(sel["folds"])
    sel["grid"] = [float(g) for g in sel["grid"]]
    cfg["selection"] = sel
    if "scenario" in cfg:
        sc = dict(cfg["scenario"])
        if "name" not in sc:
            raise ValueError("scenario config needs a 'name'")
        sc.setdefault("n_src", 200)
        sc.setdefault("n_trg", 200)
        cfg["scenario"] = sc
    else:
        ds = dict(cfg["dataset"])
        for key in ("path", "label_column", "bias_plan"):
            if key not in ds:
                raise ValueError(f"dataset config needs {key!r}")
        cfg["dataset"] = ds
    return cfg


def _one_repeat(cfg, rep_seed, kernel, train_cfgs, source_data):
    """Returns (rows, selection_rows, src_ratios, failures) for one repeat."""
    if "scenario" in cfg:
        sc = cfg["scenario"]
        src, trg, _ = synth_scenario(sc["name"], rep_seed, sc["n_src"], sc["n_trg"])
    else:
        plan = BiasPlan.from_dict({**cfg["dataset"]["bias_plan"], "seed": rep_seed})
        src, trg = bias_sample(source_data, plan)

    src_X, trg_X, _ = standardize(src.features, trg.features)
    src = Dataset(src_X, src.labels, src.class_count)
    trg = Dataset(trg_X, trg.labels, trg.class_count)

    ratio_model = fit_ratio_cv(
        src.features, trg.features, seed=rep_seed, cfg=train_cfgs["ratio"]
    )
    src_r = ratio_many(ratio_model, src.features)
    trg_r = ratio_many(ratio_model, trg.features)

    rows, sel_rows, failures = [], [], []
    for method in cfg["methods"]:
        try:
            if method == "uniform":
                model = UniformModel(src.class_count)
                lam = 0.0
                iters, converged = 0, True
            else:
                scheme = "cv" if method in _CV_METHODS else "iwcv"
                plan = SelectionPlan(
                    folds=cfg["selection"]["folds"],
                    grid=tuple(cfg["selection"]["grid"]),
                    scheme=scheme,
                    seed=rep_seed,
                )
                cv_fit = _method_fit_fn(method, kernel, train_cfgs["cv"])
                lam, table = select(plan, cv_fit, src, src_r)
                for row in table:
                    sel_rows.append({"method": method, "seed": rep_seed, **row})
                final_fit = _method_fit_fn(method, kernel, train_cfgs["final"])
                model = final_fit(src, src_r, lam)
                info = model.fit_info
                iters = info.iterations if info else 0
                converged = bool(info.converged) if info else True
            preds = model.predict_proba(trg.features, trg_r)
            metrics = evaluate(preds, trg.labels)
            rows.append(
                {
                    "method": method,
                    "seed": rep_seed,
                    "lambda": float(lam),
                    "logloss_bits": metrics.logloss_bits,
                    "entropy_bits": metrics.entropy_bits,
                    "accuracy": metrics.accuracy,
                    "iterations": int(iters),
                    "converged": converged,
                }
            )
        except (NumericalFailure, ValueError) as exc:
            failures.append({"seed": rep_seed, "stage": f"method:{method}", "error": str(exc)})
    return rows, sel_rows, src_r, failures


def run_experiment(config: dict, output_dir=None) -> ExperimentReport:
    """Run the configured experiment; optionally write report files.

    Per repeat (seed + repeat index): draw a biased source/target pair,
    standardize on source statistics, fit the density ratio (5-fold CV),
    select each method's lambda, fit, and score on the target sample.  A
    failing stage is recorded and skips only what depends on it; the report
    is produced as long as one repeat succeeds end to end.
    """
    t0 = time.perf_counter()
    cfg = _resolve_config(config)
    kernel = KernelSpec.from_dict(cfg["kernel"]) if "kernel" in cfg else None
    train = cfg.get("train", {})
    train_cfgs = {
        "cv": _train_cfg(train.get("cv"), CV_TRAIN),
        "final": _train_cfg(train.get("final"), FINAL_TRAIN),
        "ratio": _train_cfg(train.get("ratio"), RATIO_TRAIN),
    }
    source_data = None
    if "dataset" in cfg:
        source_data = load_csv(cfg["dataset"]["path"], cfg["dataset"]["label_column"])

    seeds = [cfg["seed"] + rep for rep in range(cfg["repeats"])]
    all_rows, all_sel, failures = [], [], []
    ratios_repeat0 = None
    for rep, rep_seed in enumerate(seeds):
        try:
            rows, sel_rows, src_r, meth_failures = _one_repeat(
                cfg, rep_seed, kernel, train_cfgs, source_data
            )
        except (NumericalFailure, ValueError) as exc:
            failures.append({"seed": rep_seed, "stage": "repeat", "error": str(exc)})
            continue
        if rep == 0:
            ratios_repeat0 = src_r
        for row in rows:
            all_rows.append({"repeat": rep, **row})
        for row in sel_rows:
            all_sel.append({"repeat": rep, **row})
        failures.extend(meth_failures)

    if not all_rows:
        raise NumericalFailure("every repeat failed; no report rows produced")

    aggregate = {}
    for method in cfg["methods"]:
        rows = [r for r in all_rows if r["method"] == method]
        if not rows:
            continue
        ll = np.array([r["logloss_bits"] for r in rows])
        acc = np.array([r["accuracy"] for r in rows])
        ent = np.array([r["entropy_bits"] for r in rows])
        aggregate[method] = {
            "repeats": len(rows),
            "logloss_mean": float(ll.mean()),
            "logloss_sd": float(ll.std(ddof=1)) if len(rows) > 1 else None,
            "entropy_mean": float(ent.mean()),
            "accuracy_mean": float(acc.mean()),
            "accuracy_sd": float(acc.std(ddof=1)) if len(rows) > 1 else None,
        }

    pairwise = {}
    methods = [m for m in cfg["methods"] if m in aggregate]
    for i, a in enumerate(methods):
        for b in methods[i + 1 :]:
            ra = {r["repeat"]: r["logloss_bits"] for r in all_rows if r["method"] == a}
            rb = {r["repeat"]: r["logloss_bits"] for r in all_rows if r["method"] == b}
            common = sorted(set(ra) & set(rb))
            if len(common) < 2:
                continue
            t, p = paired_t_test([ra[c] for c in common], [rb[c] for c in common])
            pairwise[f"{a}_vs_{b}"] = {"t": float(t), "p": float(p), "pairs": len(common)}

    report = ExperimentReport(
        config=cfg,
        seeds=seeds,
        ratio_clip=DEFAULT_CLIP,
        rows=all_rows,
        aggregate=aggregate,
        pairwise_logloss=pairwise,
        failures=failures,
        selection_rows=all_sel,
        ratios_repeat0=ratios_repeat0,
        timing={
            "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "wall_time_s": time.perf_counter() - t0,
        },
    )
    if output_dir is not None:
        write_report_files(report, output_dir)
    return report


def write_report_files(report: ExperimentReport, output_dir) -> None:
    """report.json plus scores/ratios/curves/selection CSVs."""
    import os

    os.makedirs(output_dir, exist_ok=True)
    with open(os.path.join(output_dir, "report.json"), "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    pd.DataFrame(report.rows).to_csv(os.path.join(output_dir, "scores.csv"), index=False)
    if report.ratios_repeat0 is not None:
        save_ratios_csv(os.path.join(output_dir, "ratios.csv"), report.ratios_repeat0)
    curves = [
        {"method": r["method"], "repeat": r["repeat"], "metric": metric, "value": r[key]}
        for r in report.rows
        for metric, key in (
            ("logloss_bits", "logloss_bits"),
            ("entropy_bits", "entropy_bits"),
            ("accuracy", "accuracy"),
        )
    ]
    pd.DataFrame(curves).to_csv(os.path.join(output_dir, "curves.csv"), index=False)
    if report.selection_rows:
        pd.DataFrame(report.selection_rows).to_csv(
            os.path.join(output_dir, "selection.csv"), index=False
        )
