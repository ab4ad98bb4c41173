"""Regularization-strength selection by k-fold CV or importance-weighted CV.

Both schemes score held-out base-2 logloss; iwcv additionally scales each
held-out sample's loss by clip(1/r_i) so the average estimates target loss.
Fold assignment is a seeded permutation cut into near-equal contiguous
blocks, identical across the grid so every lam sees the same folds.
"""

from dataclasses import dataclass

import numpy as np

from .core import Dataset, NumericalFailure, PROB_FLOOR
from .density_ratio import DEFAULT_CLIP

DEFAULT_GRID = (2.0**-16, 2.0**-12, 2.0**-8, 2.0**-4, 1.0)


@dataclass(frozen=True)
class SelectionPlan:
    folds: int = 5
    grid: tuple = DEFAULT_GRID
    scheme: str = "cv"
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        grid = tuple(float(g) for g in self.grid)
        if not grid or any(g <= 0 for g in grid):
            raise ValueError("grid must be non-empty with positive values")
        object.__setattr__(self, "grid", grid)
        if self.scheme not in ("cv", "iwcv"):
            raise ValueError("scheme must be 'cv' or 'iwcv'")


def fold_indices(n: int, folds: int, seed: int):
    """Deterministic partition: seeded permutation split into folds blocks."""
    if folds > n:
        raise ValueError("more folds than samples")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.asarray(p, dtype=np.int64) for p in np.array_split(perm, folds)]


def _held_out_score(model, data, held, ratios, scheme):
    preds = model.predict_proba(data.features[held], ratios[held])
    p_true = np.maximum(preds[np.arange(held.size), data.labels[held]], PROB_FLOOR)
    losses = -np.log2(p_true)
    if scheme == "iwcv":
        losses = losses * np.clip(1.0 / ratios[held], DEFAULT_CLIP[0], DEFAULT_CLIP[1])
    return float(losses.mean())


def select(plan: SelectionPlan, fit_fn, data: Dataset, ratios) -> tuple[float, list]:
    """Choose the best lam from plan.grid for the estimator fit_fn builds.

    fit_fn(train_data, train_ratios, lam) must return a model exposing
    predict_proba(X, ratios).  Returns (best_lam, rows) where rows carries one
    dict per (lam, fold) with the held-out score, or a single failed row for
    a lam whose fit raised NumericalFailure.  Ties resolve to the larger lam.
    """
    r = np.asarray(ratios, dtype=float)
    if r.shape != (data.n,) or np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise ValueError("ratios must be positive, finite, aligned with rows")
    parts = fold_indices(data.n, plan.folds, plan.seed)

    rows = []
    means = {}
    for lam in plan.grid:
        fold_scores = []
        failed = False
        for k, held in enumerate(parts):
            rest = np.concatenate([parts[j] for j in range(plan.folds) if j != k])
            try:
                model = fit_fn(data.subset(rest), r[rest], lam)
            except NumericalFailure:
                rows.append({"lam": lam, "fold": k, "score": float("nan"), "failed": True})
                failed = True
                break
            score = _held_out_score(model, data, held, r, plan.scheme)
            rows.append({"lam": lam, "fold": k, "score": score, "failed": False})
            fold_scores.append(score)
        if not failed:
            means[lam] = float(np.mean(fold_scores))

    if not means:
        raise NumericalFailure("every lam in the grid failed to fit")
    best_score = min(means.values())
    best_lam = max(lam for lam, m in means.items() if m == best_score)
    return best_lam, rows
