"""Linear robust bias-aware estimation under covariate shift.

The estimator plays a minimax logloss game against an adversary that must
match source-sample feature expectations; the resulting predictor is a
softmax whose exponent is scaled by the source/target density ratio,

    P(y | x)  propto  exp( r(x) * theta . Phi(x, y) ).

Training minimizes the convex surrogate

    F(theta) = (1/n) sum_i (1/r_i) log Z(x_i)  -  theta . c  +  lam ||theta||^2,

whose exact gradient is the moment-matching form
(1/n) sum_i E_model[Phi(x_i, .)] - c + 2 lam theta, with c the empirical
source feature mean.  Plain gradient descent from zero is deterministic.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, FeatureMap, NumericalFailure, design_matrix, softmax_rows
from .optim import OptResult, TrainConfig, minimize


def _check_ratios(ratios: np.ndarray, n: int) -> np.ndarray:
    r = np.asarray(ratios, dtype=float)
    if r.ndim != 1 or r.shape[0] != n:
        raise ValueError("ratios must align with dataset rows")
    if not np.all(np.isfinite(r)) or np.any(r <= 0):
        raise ValueError("ratios must be finite and positive")
    return r


def _exponents(theta_mat, Xd, ratios):
    M = ratios[:, None] * (Xd @ theta_mat.T)
    if not np.all(np.isfinite(M)):
        raise NumericalFailure("non-finite exponent in robust scores")
    return M


def rba_potential(theta, fm: FeatureMap, data: Dataset, ratios, lam: float) -> float:
    """Surrogate objective F at a flat parameter vector."""
    r = _check_ratios(ratios, data.n)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    theta_mat = np.asarray(theta, dtype=float).reshape(fm.class_count, fm.block_dim)
    Xd = design_matrix(fm, data.features)
    S = Xd @ theta_mat.T
    M = r[:, None] * S
    mx = M.max(axis=1)
    log_z = mx + np.log(np.exp(M - mx[:, None]).sum(axis=1))
    fit_term = float(np.mean(log_z / r))
    data_term = float(np.mean(S[np.arange(data.n), data.labels]))
    t = theta_mat.ravel()
    return fit_term - data_term + lam * float(t @ t)


def rba_gradient_at(theta, fm: FeatureMap, data: Dataset, ratios, lam: float) -> np.ndarray:
    """Exact gradient of rba_potential, flattened to match theta."""
    r = _check_ratios(ratios, data.n)
    theta_mat = np.asarray(theta, dtype=float).reshape(fm.class_count, fm.block_dim)
    Xd = design_matrix(fm, data.features)
    P = softmax_rows(_exponents(theta_mat, Xd, r))
    Y = np.zeros_like(P)
    Y[np.arange(data.n), data.labels] = 1.0
    G = (P - Y).T @ Xd / data.n + 2.0 * lam * theta_mat
    return G.ravel()


@dataclass(frozen=True)
class LinearRbaModel:
    theta: np.ndarray
    feature_map: FeatureMap
    lam: float
    fit_info: OptResult | None = field(default=None, compare=False)

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float).ravel()
        if t.shape[0] != self.feature_map.output_dim:
            raise ValueError("theta length must equal the feature map's output_dim")
        if not np.all(np.isfinite(t)):
            raise ValueError("theta must be finite")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "lam", float(self.lam))

    def predict_proba(self, X: np.ndarray, ratios: np.ndarray) -> np.ndarray:
        """Row-stochastic predictions at the given per-row density ratios."""
        fm = self.feature_map
        Xd = design_matrix(fm, np.asarray(X, dtype=float))
        r = _check_ratios(ratios, Xd.shape[0])
        theta_mat = self.theta.reshape(fm.class_count, fm.block_dim)
        return softmax_rows(_exponents(theta_mat, Xd, r))

    def to_dict(self) -> dict:
        return {
            "method": "rba",
            "feature_map": self.feature_map.to_dict(),
            "lambda": self.lam,
            "theta": self.theta.tolist(),
        }

    @staticmethod
    def from_dict(d: dict) -> "LinearRbaModel":
        return LinearRbaModel(
            theta=np.asarray(d["theta"], dtype=float),
            feature_map=FeatureMap.from_dict(d["feature_map"]),
            lam=float(d["lambda"]),
        )


def rba_predict(model: LinearRbaModel, x: np.ndarray, r: float) -> np.ndarray:
    """Prediction vector for a single input at density ratio r."""
    if r <= 0 or not np.isfinite(r):
        raise ValueError("ratio must be finite and positive")
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return model.predict_proba(x, np.array([r]))[0]


def rba_gradient(model: LinearRbaModel, data: Dataset, ratios) -> np.ndarray:
    """Surrogate gradient at the model's parameters on source data."""
    return rba_gradient_at(model.theta, model.feature_map, data, ratios, model.lam)


def rba_fit(
    data: Dataset,
    ratios,
    lam: float,
    cfg: TrainConfig | None = None,
    include_bias: bool = True,
) -> LinearRbaModel:
    """Train from theta = 0 until the gradient norm meets cfg.grad_tol."""
    cfg = cfg or TrainConfig()
    r = _check_ratios(ratios, data.n)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    fm = FeatureMap(data.dim, data.class_count, include_bias=include_bias)
    Xd = design_matrix(fm, data.features)
    Y = np.zeros((data.n, fm.class_count))
    Y[np.arange(data.n), data.labels] = 1.0
    inv_r = 1.0 / r

    def value(theta_mat):
        S = Xd @ theta_mat.T
        M = r[:, None] * S
        mx = M.max(axis=1)
        log_z = mx + np.log(np.exp(M - mx[:, None]).sum(axis=1))
        t = theta_mat.ravel()
        return (
            float(np.mean(log_z * inv_r))
            - float(np.mean(S[np.arange(data.n), data.labels]))
            + lam * float(t @ t)
        )

    def grad(theta_mat):
        P = softmax_rows(_exponents(theta_mat, Xd, r))
        return (P - Y).T @ Xd / data.n + 2.0 * lam * theta_mat

    theta0 = np.zeros((fm.class_count, fm.block_dim))
    theta_mat, info = minimize(value, grad, theta0, cfg)
    return LinearRbaModel(theta=theta_mat.ravel(), feature_map=fm, lam=lam, fit_info=info)
