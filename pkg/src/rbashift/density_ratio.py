"""Source/target density-ratio estimation by logistic discrimination.

A regularized logistic discriminator is trained to tell source rows (label 1)
from target rows (label 0); its odds, corrected by the sampling prior
n_trg/n_src, estimate p_src(x) / p_trg(x).  Ratios are clipped to fixed
bounds so downstream exponents and importance weights stay bounded.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .optim import TrainConfig, minimize

DEFAULT_CLIP = (1e-3, 1e3)

# Grid shared with estimator selection; ties resolve to the larger value.
LAMBDA_GRID = (2.0**-16, 2.0**-12, 2.0**-8, 2.0**-4, 1.0)


@dataclass(frozen=True)
class DensityRatioModel:
    """Discriminator weights (bias first) plus the prior-correction factor."""

    weights: np.ndarray
    prior_ratio: float
    clip: tuple = DEFAULT_CLIP

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a finite vector")
        lo, hi = self.clip
        if not (0 < lo < hi):
            raise ValueError("clip bounds must satisfy 0 < lo < hi")
        if self.prior_ratio <= 0:
            raise ValueError("prior_ratio must be positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "prior_ratio", float(self.prior_ratio))
        object.__setattr__(self, "clip", (float(lo), float(hi)))

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "prior_ratio": self.prior_ratio,
            "clip": list(self.clip),
        }

    @staticmethod
    def from_dict(d: dict) -> "DensityRatioModel":
        return DensityRatioModel(
            weights=np.asarray(d["weights"], dtype=float),
            prior_ratio=float(d["prior_ratio"]),
            clip=tuple(d["clip"]),
        )


def _with_bias(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    return np.hstack([np.ones((X.shape[0], 1)), X])


def _binary_logloss_and_grad(Z, t, lam):
    """Mean logistic loss + lam*||w||^2 on design Z with 0/1 targets t."""
    n = Z.shape[0]

    def value(w):
        s = Z @ w
        # -log sigma(s) = log(1 + e^-s); -log(1 - sigma(s)) = log(1 + e^s)
        losses = np.where(t == 1, np.logaddexp(0.0, -s), np.logaddexp(0.0, s))
        return float(losses.mean() + lam * w @ w)

    def grad(w):
        p = 1.0 / (1.0 + np.exp(-(Z @ w)))
        return Z.T @ (p - t) / n + 2.0 * lam * w

    return value, grad


def fit_ratio(
    src_X: np.ndarray,
    trg_X: np.ndarray,
    lam: float,
    cfg: TrainConfig | None = None,
    clip: tuple = DEFAULT_CLIP,
) -> DensityRatioModel:
    """Fit the discriminator at one regularization strength."""
    src_X = np.asarray(src_X, dtype=float)
    trg_X = np.asarray(trg_X, dtype=float)
    if src_X.ndim != 2 or trg_X.ndim != 2 or src_X.shape[1] != trg_X.shape[1]:
        raise ValueError("source and target features must share a dimension")
    if src_X.shape[0] < 1 or trg_X.shape[0] < 1:
        raise ValueError("both samples must be non-empty")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    cfg = cfg or TrainConfig()

    Z = _with_bias(np.vstack([src_X, trg_X]))
    t = np.concatenate([np.ones(src_X.shape[0]), np.zeros(trg_X.shape[0])])
    value, grad = _binary_logloss_and_grad(Z, t, lam)
    w, _ = minimize(value, grad, np.zeros(Z.shape[1]), cfg)
    return DensityRatioModel(
        weights=w, prior_ratio=trg_X.shape[0] / src_X.shape[0], clip=clip
    )


def fit_ratio_cv(
    src_X: np.ndarray,
    trg_X: np.ndarray,
    grid=LAMBDA_GRID,
    folds: int = 5,
    seed: int = 0,
    cfg: TrainConfig | None = None,
    clip: tuple = DEFAULT_CLIP,
) -> DensityRatioModel:
    """Pick the discriminator's lam by k-fold CV on discrimination logloss."""
    src_X = np.asarray(src_X, dtype=float)
    trg_X = np.asarray(trg_X, dtype=float)
    cfg = cfg or TrainConfig()
    Z = _with_bias(np.vstack([src_X, trg_X]))
    t = np.concatenate([np.ones(src_X.shape[0]), np.zeros(trg_X.shape[0])])
    n = Z.shape[0]
    if folds < 2 or folds > n:
        raise ValueError("folds must lie in {2..n}")

    perm = np.random.default_rng(seed).permutation(n)
    parts = np.array_split(perm, folds)
    scores = []
    for lam in grid:
        if lam <= 0:
            raise ValueError("grid values must be positive")
        fold_losses = []
        for k in range(folds):
            held = parts[k]
            rest = np.concatenate([parts[j] for j in range(folds) if j != k])
            value, grad = _binary_logloss_and_grad(Z[rest], t[rest], lam)
            w, _ = minimize(value, grad, np.zeros(Z.shape[1]), cfg)
            s = Z[held] @ w
            losses = np.where(t[held] == 1, np.logaddexp(0.0, -s), np.logaddexp(0.0, s))
            fold_losses.append(float(losses.mean()))
        scores.append(float(np.mean(fold_losses)))
    best = min(scores)
    lam = max(l for l, s in zip(grid, scores) if s == best)
    return fit_ratio(src_X, trg_X, lam, cfg=cfg, clip=clip)


def ratio_many(model: DensityRatioModel, X: np.ndarray) -> np.ndarray:
    """Clipped density-ratio estimates for each row of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.weights.shape[0] - 1:
        raise ValueError("feature dimension does not match the fitted model")
    s = _with_bias(X) @ model.weights
    # Odds of the discriminator times the prior correction, in log space
    # until the final exp so extreme scores cannot overflow before clipping.
    lo, hi = model.clip
    log_r = s + np.log(model.prior_ratio)
    # The log-space clip (padded by 1) only guards exp against overflow; the
    # linear clip is the one that lands saturated values exactly on lo / hi.
    safe = np.exp(np.clip(log_r, np.log(lo) - 1.0, np.log(hi) + 1.0))
    return np.clip(safe, lo, hi)


def ratio(model: DensityRatioModel, x: np.ndarray) -> float:
    """Clipped density-ratio estimate at a single point."""
    return float(ratio_many(model, np.asarray(x, dtype=float).reshape(1, -1))[0])


def save_ratios_csv(path, ratios: np.ndarray) -> None:
    """Single-column CSV aligned with the dataset row order."""
    pd.DataFrame({"ratio": np.asarray(ratios, dtype=float)}).to_csv(path, index=False)


def load_ratios_csv(path) -> np.ndarray:
    frame = pd.read_csv(path)
    if "ratio" not in frame.columns:
        raise ValueError(f"{path} lacks a 'ratio' column")
    r = frame["ratio"].to_numpy(dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        raise ValueError("ratios must be finite and positive")
    return r
