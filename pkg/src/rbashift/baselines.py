"""Non-robust reference estimators: plain and importance-weighted softmax
regression, in linear and kernelized form.

None of these scale test-point scores by the density ratio; the importance-
weighted variants reweight the *training* loss by w_i = clip(1/r_i) with the
same clip bounds the ratio estimator uses.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .core import Dataset, FeatureMap, design_matrix, softmax_rows
from .density_ratio import DEFAULT_CLIP
from .kernels import KernelSpec, gram
from .optim import OptResult, TrainConfig, minimize
from .rba import _check_ratios


def importance_weights(ratios, clip: tuple = DEFAULT_CLIP) -> np.ndarray:
    r = np.asarray(ratios, dtype=float)
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise ValueError("ratios must be finite and positive")
    return np.clip(1.0 / r, clip[0], clip[1])


def linear_objective(fm: FeatureMap, data: Dataset, weights, lam: float):
    """(value_fn, grad_fn) of weighted softmax-regression loss over theta.

    F(theta) = (1/n) sum_i w_i [log Z_i - S[i, y_i]] + lam ||theta||^2.
    """
    w = np.asarray(weights, dtype=float)
    Xd = design_matrix(fm, data.features)
    n = data.n
    idx = np.arange(n)
    Y = np.zeros((n, fm.class_count))
    Y[idx, data.labels] = 1.0

    def value(theta_mat):
        S = Xd @ theta_mat.T
        mx = S.max(axis=1)
        log_z = mx + np.log(np.exp(S - mx[:, None]).sum(axis=1))
        t = theta_mat.ravel()
        return float(np.mean(w * (log_z - S[idx, data.labels]))) + lam * float(t @ t)

    def grad(theta_mat):
        P = softmax_rows(Xd @ theta_mat.T)
        return (w[:, None] * (P - Y)).T @ Xd / n + 2.0 * lam * theta_mat

    return value, grad


def kernel_objective(gram_nn, labels, weights, lam: float):
    """(value_fn, grad_fn) of weighted kernel softmax loss over alpha (n x K).

    Scores are S0 = K A / n; the regularizer is (lam/2n^2) sum_y A_y^T K A_y,
    so the gradient is (1/n^2) K (W (P - Y) + lam A).
    """
    gram_nn = np.asarray(gram_nn, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    w = np.asarray(weights, dtype=float)
    n = gram_nn.shape[0]
    idx = np.arange(n)

    def value(A):
        S0 = gram_nn @ A / n
        mx = S0.max(axis=1)
        log_z = mx + np.log(np.exp(S0 - mx[:, None]).sum(axis=1))
        return float(np.mean(w * (log_z - S0[idx, labels]))) + lam / (2.0 * n) * float(
            np.sum(A * S0)
        )

    def grad(A):
        S0 = gram_nn @ A / n
        P = softmax_rows(S0)
        Y = np.zeros_like(P)
        Y[idx, labels] = 1.0
        return gram_nn @ (w[:, None] * (P - Y) + lam * A) / (n * n)

    return value, grad


@dataclass(frozen=True)
class BaselineModel:
    """A fitted non-robust estimator; form picks the parameterization."""

    form: str  # "linear" | "kernel"
    weighting: str  # "none" | "importance"
    lam: float
    theta: np.ndarray | None = None
    feature_map: FeatureMap | None = None
    alpha: np.ndarray | None = None
    support_X: np.ndarray | None = None
    kernel: KernelSpec | None = None
    fit_weights: np.ndarray | None = field(default=None, compare=False)
    fit_info: OptResult | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.form not in ("linear", "kernel"):
            raise ValueError("form must be 'linear' or 'kernel'")
        if self.weighting not in ("none", "importance"):
            raise ValueError("weighting must be 'none' or 'importance'")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.form == "linear":
            if self.theta is None or self.feature_map is None:
                raise ValueError("linear form needs theta and feature_map")
            t = np.asarray(self.theta, dtype=float).ravel()
            if t.shape[0] != self.feature_map.output_dim or not np.all(np.isfinite(t)):
                raise ValueError("theta must be finite with the feature map's length")
            object.__setattr__(self, "theta", t)
        else:
            if self.alpha is None or self.support_X is None or self.kernel is None:
                raise ValueError("kernel form needs alpha, support_X, kernel")
            A = np.asarray(self.alpha, dtype=float)
            X = np.asarray(self.support_X, dtype=float)
            if A.ndim != 2 or A.shape[0] != X.shape[0] or not np.all(np.isfinite(A)):
                raise ValueError("alpha must be finite and align with support points")
            object.__setattr__(self, "alpha", A)
            object.__setattr__(self, "support_X", X)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def class_count(self) -> int:
        if self.form == "linear":
            return self.feature_map.class_count
        return self.alpha.shape[1]

    def predict_proba(self, X: np.ndarray, ratios=None) -> np.ndarray:
        """Softmax predictions; density ratios are accepted and ignored."""
        X = np.asarray(X, dtype=float)
        if self.form == "linear":
            fm = self.feature_map
            S = design_matrix(fm, X) @ self.theta.reshape(fm.class_count, fm.block_dim).T
        else:
            S = gram(self.kernel, X, self.support_X) @ self.alpha / self.support_X.shape[0]
        return softmax_rows(S)

    def to_dict(self) -> dict:
        d = {"method": method_id(self.form, self.weighting), "lambda": self.lam}
        if self.form == "linear":
            d["feature_map"] = self.feature_map.to_dict()
            d["theta"] = self.theta.tolist()
        else:
            d["kernel"] = self.kernel.to_dict()
            d["alpha"] = self.alpha.tolist()
            d["support_X"] = self.support_X.tolist()
        return d

    @staticmethod
    def from_dict(d: dict) -> "BaselineModel":
        form, weighting = _parse_method_id(d["method"])
        if form == "linear":
            return BaselineModel(
                form=form,
                weighting=weighting,
                lam=float(d["lambda"]),
                theta=np.asarray(d["theta"], dtype=float),
                feature_map=FeatureMap.from_dict(d["feature_map"]),
            )
        return BaselineModel(
            form=form,
            weighting=weighting,
            lam=float(d["lambda"]),
            alpha=np.asarray(d["alpha"], dtype=float),
            support_X=np.asarray(d["support_X"], dtype=float),
            kernel=KernelSpec.from_dict(d["kernel"]),
        )


def method_id(form: str, weighting: str) -> str:
    base = "iw" if weighting == "importance" else "lr"
    return base if form == "linear" else f"kernel_{base}"


def _parse_method_id(mid: str):
    table = {
        "lr": ("linear", "none"),
        "iw": ("linear", "importance"),
        "kernel_lr": ("kernel", "none"),
        "kernel_iw": ("kernel", "importance"),
    }
    if mid not in table:
        raise ValueError(f"unknown baseline method {mid!r}")
    return table[mid]


def _fit_linear(data, weights, lam, cfg, weighting, include_bias=True):
    fm = FeatureMap(data.dim, data.class_count, include_bias=include_bias)
    value, grad = linear_objective(fm, data, weights, lam)
    theta0 = np.zeros((fm.class_count, fm.block_dim))
    theta_mat, info = minimize(value, grad, theta0, cfg)
    return BaselineModel(
        form="linear",
        weighting=weighting,
        lam=lam,
        theta=theta_mat.ravel(),
        feature_map=fm,
        fit_weights=np.asarray(weights, dtype=float),
        fit_info=info,
    )


def _fit_kernel(data, weights, lam, kernel, cfg, weighting):
    gram_nn = gram(kernel, data.features, data.features)
    value, grad = kernel_objective(gram_nn, data.labels, weights, lam)
    A0 = np.zeros((data.n, data.class_count))
    # Same trial-step scaling as the kernelized robust fit: the 1/n^2
    # gradient normalization calls for ~n-times-larger steps.
    step_cfg = replace(cfg, learning_rate=cfg.learning_rate * data.n)
    A, info = minimize(value, grad, A0, step_cfg)
    return BaselineModel(
        form="kernel",
        weighting=weighting,
        lam=lam,
        alpha=A,
        support_X=data.features,
        kernel=kernel,
        fit_weights=np.asarray(weights, dtype=float),
        fit_info=info,
    )


def lr_fit(
    data: Dataset, lam: float, cfg: TrainConfig | None = None, include_bias: bool = True
) -> BaselineModel:
    """Plain multinomial logistic regression."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return _fit_linear(data, np.ones(data.n), lam, cfg or TrainConfig(), "none", include_bias)


def iw_fit(
    data: Dataset,
    ratios,
    lam: float,
    cfg: TrainConfig | None = None,
    include_bias: bool = True,
) -> BaselineModel:
    """Importance-weighted logistic regression (training loss scaled by 1/r)."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    _check_ratios(ratios, data.n)
    w = importance_weights(ratios)
    return _fit_linear(data, w, lam, cfg or TrainConfig(), "importance", include_bias)


def klr_fit(
    data: Dataset, kernel: KernelSpec, lam: float, cfg: TrainConfig | None = None
) -> BaselineModel:
    """Kernel logistic regression in the dual-coefficient parameterization."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return _fit_kernel(data, np.ones(data.n), lam, kernel, cfg or TrainConfig(), "none")


def kiw_fit(
    data: Dataset,
    ratios,
    kernel: KernelSpec,
    lam: float,
    cfg: TrainConfig | None = None,
) -> BaselineModel:
    """Importance-weighted kernel logistic regression."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    _check_ratios(ratios, data.n)
    w = importance_weights(ratios)
    return _fit_kernel(data, w, lam, kernel, cfg or TrainConfig(), "importance")
