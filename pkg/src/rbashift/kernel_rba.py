"""Kernelized robust bias-aware estimation.

An extended representer argument puts the robust solution in the span of
source-sample joint-kernel evaluations: with the label-matched joint kernel
delta(y, y') k(x, x'), the score of (x, y) is

    f(x, y) = r(x) * (1/n) sum_i alpha[i, y] k(x_i, x),

and predictions are the softmax of f over y.  Training minimizes

    F_K(A) = (1/n) sum_i (1/r_i) log Z_i
             - (1/n) sum_i S0[i, y_i]
             + (lam / (2 n^2)) sum_y A[:, y]^T K A[:, y],

with S0 = K A / n and Z_i the normalizer of row i's ratio-scaled scores.
Its exact gradient is (1/n^2) K (P - Y + lam A), so descent touches only
Gram-matrix products.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Dataset, NumericalFailure, softmax_rows
from .kernels import KernelSpec, gram
from .optim import OptResult, TrainConfig, minimize
from .rba import _check_ratios


def _score_terms(alpha, gram_nn, ratios):
    n = gram_nn.shape[0]
    S0 = gram_nn @ alpha / n
    M = ratios[:, None] * S0
    if not np.all(np.isfinite(M)):
        raise NumericalFailure("non-finite exponent in kernel robust scores")
    return S0, M


def krba_potential(alpha, gram_nn, labels, ratios, lam: float) -> float:
    """Kernel surrogate objective at dual coefficients alpha (n x K)."""
    gram_nn = np.asarray(gram_nn, dtype=float)
    n = gram_nn.shape[0]
    labels = np.asarray(labels, dtype=np.int64)
    r = _check_ratios(ratios, n)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    A = np.asarray(alpha, dtype=float).reshape(n, -1)
    S0, M = _score_terms(A, gram_nn, r)
    mx = M.max(axis=1)
    log_z = mx + np.log(np.exp(M - mx[:, None]).sum(axis=1))
    fit_term = float(np.mean(log_z / r))
    data_term = float(np.mean(S0[np.arange(n), labels]))
    quad = lam / (2.0 * n * n) * float(np.sum(A * (gram_nn @ A)))
    return fit_term - data_term + quad


def krba_gradient_at(alpha, gram_nn, labels, ratios, lam: float) -> np.ndarray:
    """Exact gradient of krba_potential, shaped like alpha."""
    gram_nn = np.asarray(gram_nn, dtype=float)
    n = gram_nn.shape[0]
    labels = np.asarray(labels, dtype=np.int64)
    r = _check_ratios(ratios, n)
    A = np.asarray(alpha, dtype=float).reshape(n, -1)
    _, M = _score_terms(A, gram_nn, r)
    P = softmax_rows(M)
    Y = np.zeros_like(P)
    Y[np.arange(n), labels] = 1.0
    return gram_nn @ (P - Y + lam * A) / (n * n)


@dataclass(frozen=True)
class KernelRbaModel:
    alpha: np.ndarray
    support_X: np.ndarray
    support_ratios: np.ndarray
    kernel: KernelSpec
    lam: float
    fit_info: OptResult | None = field(default=None, compare=False)

    def __post_init__(self):
        A = np.asarray(self.alpha, dtype=float)
        X = np.asarray(self.support_X, dtype=float)
        r = np.asarray(self.support_ratios, dtype=float)
        if A.ndim != 2 or X.ndim != 2 or A.shape[0] != X.shape[0]:
            raise ValueError("alpha rows must align with support points")
        if A.shape[1] < 2:
            raise ValueError("alpha needs one column per class (>= 2)")
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(X)):
            raise ValueError("alpha and support points must be finite")
        if r.shape != (X.shape[0],) or np.any(r <= 0) or not np.all(np.isfinite(r)):
            raise ValueError("support_ratios must be positive, finite, aligned")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        object.__setattr__(self, "alpha", A)
        object.__setattr__(self, "support_X", X)
        object.__setattr__(self, "support_ratios", r)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def class_count(self) -> int:
        return self.alpha.shape[1]

    def predict_proba(self, X: np.ndarray, ratios: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        r = _check_ratios(ratios, X.shape[0])
        n = self.support_X.shape[0]
        S = gram(self.kernel, X, self.support_X) @ self.alpha / n
        M = r[:, None] * S
        if not np.all(np.isfinite(M)):
            raise NumericalFailure("non-finite exponent in kernel robust scores")
        return softmax_rows(M)

    def to_dict(self) -> dict:
        return {
            "method": "kernel_rba",
            "kernel": self.kernel.to_dict(),
            "lambda": self.lam,
            "alpha": self.alpha.tolist(),
            "support_X": self.support_X.tolist(),
            "support_ratios": self.support_ratios.tolist(),
        }

    @staticmethod
    def from_dict(d: dict) -> "KernelRbaModel":
        return KernelRbaModel(
            alpha=np.asarray(d["alpha"], dtype=float),
            support_X=np.asarray(d["support_X"], dtype=float),
            support_ratios=np.asarray(d["support_ratios"], dtype=float),
            kernel=KernelSpec.from_dict(d["kernel"]),
            lam=float(d["lambda"]),
        )


def krba_score(model: KernelRbaModel, x: np.ndarray, r: float, y: int) -> float:
    """Unnormalized robust score f(x, y) = r * mean_i alpha[i, y] k(x_i, x)."""
    y = int(y)
    if not 0 <= y < model.class_count:
        raise ValueError("label outside the model's classes")
    if r <= 0 or not np.isfinite(r):
        raise ValueError("ratio must be finite and positive")
    kv = gram(model.kernel, np.asarray(x, dtype=float).reshape(1, -1), model.support_X)[0]
    return float(r * (kv @ model.alpha[:, y]) / model.support_X.shape[0])


def krba_predict(model: KernelRbaModel, x: np.ndarray, r: float) -> np.ndarray:
    if r <= 0 or not np.isfinite(r):
        raise ValueError("ratio must be finite and positive")
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return model.predict_proba(x, np.array([r]))[0]


def krba_gradient(model: KernelRbaModel, data: Dataset, gram_nn=None) -> np.ndarray:
    """Surrogate gradient at the model's coefficients on its support sample."""
    if gram_nn is None:
        gram_nn = gram(model.kernel, model.support_X, model.support_X)
    return krba_gradient_at(
        model.alpha, gram_nn, data.labels, model.support_ratios, model.lam
    )


def krba_fit(
    data: Dataset,
    ratios,
    kernel: KernelSpec,
    lam: float,
    cfg: TrainConfig | None = None,
) -> KernelRbaModel:
    """Train dual coefficients from zero by gradient descent on F_K."""
    cfg = cfg or TrainConfig()
    r = _check_ratios(ratios, data.n)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if lam == 0.0 and len(np.unique(data.features, axis=0)) < data.n:
        warnings.warn(
            "duplicate support points with lam=0: coefficients are not unique",
            RuntimeWarning,
        )
    gram_nn = gram(kernel, data.features, data.features)
    n = data.n
    Y = np.zeros((n, data.class_count))
    Y[np.arange(n), data.labels] = 1.0
    inv_r = 1.0 / r
    idx = np.arange(n)

    def value(A):
        S0 = gram_nn @ A / n
        M = r[:, None] * S0
        mx = M.max(axis=1)
        log_z = mx + np.log(np.exp(M - mx[:, None]).sum(axis=1))
        # (lam / 2n^2) sum(A * (K A)) with K A re-used as n * S0
        return (
            float(np.mean(log_z * inv_r))
            - float(np.mean(S0[idx, data.labels]))
            + lam / (2.0 * n) * float(np.sum(A * S0))
        )

    def grad(A):
        _, M = _score_terms(A, gram_nn, r)
        P = softmax_rows(M)
        return gram_nn @ (P - Y + lam * A) / (n * n)

    A0 = np.zeros((n, data.class_count))
    # The 1/n^2 gradient normalization shrinks steps by ~n relative to the
    # linear case; scale the line-search trial cap to compensate.
    step_cfg = replace(cfg, learning_rate=cfg.learning_rate * n)
    A, info = minimize(value, grad, A0, step_cfg)
    return KernelRbaModel(
        alpha=A,
        support_X=data.features,
        support_ratios=r,
        kernel=kernel,
        lam=lam,
        fit_info=info,
    )
