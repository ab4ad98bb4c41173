"""Command-line entry points.

Every subcommand reads a JSON config (--config) and accepts --seed / --out
overrides; exit status is 0 on success, 2 for invalid configuration or
arguments, 3 for numerical failure.
"""

import argparse
import json
import os
import sys

import numpy as np
import pandas as pd

from .baselines import iw_fit, kiw_fit, klr_fit, lr_fit
from .core import Dataset, NumericalFailure, evaluate, load_csv, save_csv
from .density_ratio import (
    fit_ratio_cv,
    load_ratios_csv,
    ratio_many,
    save_ratios_csv,
)
from .kernel_rba import krba_fit
from .kernels import KernelSpec
from .model_select import SelectionPlan, select
from .optim import TrainConfig
from .rba import rba_fit
from .serialize import load_model, save_model
from .shiftbench import run_experiment, synth_scenario

_NEEDS_RATIOS = ("rba", "kernel_rba", "iw", "kernel_iw")
_NEEDS_KERNEL = ("kernel_rba", "kernel_lr", "kernel_iw")
_IWCV_METHODS = ("rba", "kernel_rba", "iw", "kernel_iw")


def _load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    return cfg


def _features_only(path, label_column):
    frame = pd.read_csv(path)
    if label_column and label_column in frame.columns:
        frame = frame.drop(columns=[label_column])
    return frame.to_numpy(dtype=float)


def _cmd_synth(cfg: dict, out: str) -> int:
    name = cfg["scenario"]
    seed = int(cfg.get("seed", 0))
    src, trg, (w, b) = synth_scenario(
        name, seed, int(cfg.get("n_src", 200)), int(cfg.get("n_trg", 200))
    )
    os.makedirs(out, exist_ok=True)
    save_csv(src, os.path.join(out, "src.csv"))
    save_csv(trg, os.path.join(out, "trg.csv"))
    with open(os.path.join(out, "scenario.json"), "w") as fh:
        json.dump(
            {"scenario": name, "seed": seed, "boundary_w": list(map(float, w)), "boundary_b": b},
            fh,
            indent=2,
        )
        fh.write("\n")
    print(f"wrote src.csv ({src.n} rows), trg.csv ({trg.n} rows) to {out}")
    return 0


def _cmd_ratio(cfg: dict, out: str) -> int:
    label = cfg.get("label_column", "label")
    src_X = _features_only(cfg["src_csv"], label)
    trg_X = _features_only(cfg["trg_csv"], label)
    model = fit_ratio_cv(
        src_X,
        trg_X,
        grid=tuple(cfg.get("grid", (2.0**-16, 2.0**-12, 2.0**-8, 2.0**-4, 1.0))),
        folds=int(cfg.get("folds", 5)),
        seed=int(cfg.get("seed", 0)),
    )
    which = cfg.get("eval", "src")
    if which not in ("src", "trg"):
        raise ValueError("'eval' must be 'src' or 'trg'")
    ratios = ratio_many(model, src_X if which == "src" else trg_X)
    save_ratios_csv(out, ratios)
    print(f"wrote {len(ratios)} {which} ratios to {out}")
    return 0


def _train_cfg_from(cfg: dict) -> TrainConfig:
    overrides = cfg.get("train", {})
    return TrainConfig(
        learning_rate=float(overrides.get("learning_rate", 1.0)),
        max_iters=int(overrides.get("max_iters", 5000)),
        grad_tol=float(overrides.get("grad_tol", 1e-6)),
        seed=int(overrides.get("seed", 0)),
    )


def _fit_one(method, data, ratios, kernel, lam, tcfg):
    if method == "rba":
        return rba_fit(data, ratios, lam, tcfg)
    if method == "kernel_rba":
        return krba_fit(data, ratios, kernel, lam, tcfg)
    if method == "lr":
        return lr_fit(data, lam, tcfg)
    if method == "iw":
        return iw_fit(data, ratios, lam, tcfg)
    if method == "kernel_lr":
        return klr_fit(data, kernel, lam, tcfg)
    if method == "kernel_iw":
        return kiw_fit(data, ratios, kernel, lam, tcfg)
    raise ValueError(f"unknown method {method!r}")


def _cmd_fit(cfg: dict, out: str) -> int:
    method = cfg["method"]
    data = load_csv(cfg["train_csv"], cfg.get("label_column", "label"))
    kernel = KernelSpec.from_dict(cfg["kernel"]) if method in _NEEDS_KERNEL else None
    if method in _NEEDS_RATIOS:
        if "ratios_csv" not in cfg:
            raise ValueError(f"method {method!r} needs 'ratios_csv'")
        ratios = load_ratios_csv(cfg["ratios_csv"])
    else:
        ratios = np.ones(data.n)
    tcfg = _train_cfg_from(cfg)

    if "lambda" in cfg:
        lam = float(cfg["lambda"])
    else:
        sel = cfg.get("selection", {})
        plan = SelectionPlan(
            folds=int(sel.get("folds", 5)),
            grid=tuple(sel.get("grid", (2.0**-16, 2.0**-12, 2.0**-8, 2.0**-4, 1.0))),
            scheme=sel.get("scheme", "iwcv" if method in _IWCV_METHODS else "cv"),
            seed=int(cfg.get("seed", 0)),
        )
        lam, _ = select(plan, lambda d, r, l: _fit_one(method, d, r, kernel, l, tcfg), data, ratios)
        print(f"selected lambda = {lam:g}")
    model = _fit_one(method, data, ratios, kernel, lam, tcfg)
    save_model(model, out)
    print(f"wrote {method} model to {out}")
    return 0


def _predict_matrix(cfg: dict):
    model = load_model(cfg["model"])
    X = _features_only(cfg["data_csv"], cfg.get("label_column", "label"))
    method = model.to_dict()["method"]
    if method in _NEEDS_RATIOS and method in ("rba", "kernel_rba"):
        if "ratios_csv" not in cfg:
            raise ValueError("robust models need 'ratios_csv' at prediction time")
        ratios = load_ratios_csv(cfg["ratios_csv"])
    else:
        ratios = np.ones(X.shape[0])
    return model.predict_proba(X, ratios), X


def _cmd_predict(cfg: dict, out: str) -> int:
    preds, _ = _predict_matrix(cfg)
    frame = pd.DataFrame({f"p{k}": preds[:, k] for k in range(preds.shape[1])})
    frame.to_csv(out, index=False)
    print(f"wrote {preds.shape[0]} predictions to {out}")
    return 0


def _cmd_evaluate(cfg: dict, out: str | None) -> int:
    preds, _ = _predict_matrix(cfg)
    label = cfg.get("label_column", "label")
    frame = pd.read_csv(cfg["data_csv"])
    if label not in frame.columns:
        raise ValueError(f"label column {label!r} not present in {cfg['data_csv']}")
    labels = frame[label].to_numpy(dtype=np.int64)
    report = evaluate(preds, labels)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
            fh.write("\n")
    print(text)
    return 0


def _cmd_experiment(cfg: dict, out: str | None) -> int:
    output_dir = out or cfg.get("output_dir")
    report = run_experiment(cfg, output_dir=output_dir)
    for method, agg in sorted(report.aggregate.items()):
        sd = agg["logloss_sd"]
        sd_text = f" +/- {sd:.3f}" if sd is not None else ""
        print(
            f"{method}: logloss {agg['logloss_mean']:.3f}{sd_text} bits, "
            f"accuracy {agg['accuracy_mean']:.3f} over {agg['repeats']} repeats"
        )
    if output_dir:
        print(f"report files in {output_dir}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rbashift",
        description="Robust bias-aware classification under covariate shift",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (
        ("synth", True),
        ("ratio", True),
        ("fit", True),
        ("predict", True),
        ("evaluate", False),
        ("experiment", False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", required=needs_out, default=None, help="output path")

    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        handler = {
            "synth": _cmd_synth,
            "ratio": _cmd_ratio,
            "fit": _cmd_fit,
            "predict": _cmd_predict,
            "evaluate": _cmd_evaluate,
            "experiment": _cmd_experiment,
        }[args.command]
        return handler(cfg, args.out)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
