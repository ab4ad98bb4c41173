"""Deterministic full-batch gradient descent with backtracking line search.

Every estimator in the package trains through this loop, so fits are exactly
reproducible: zero initialization, no randomness, fixed evaluation order.
"""

from dataclasses import dataclass

import numpy as np

from .core import NumericalFailure

_ARMIJO = 1e-4
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1.0
    max_iters: int = 5000
    grad_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


@dataclass(frozen=True)
class OptResult:
    iterations: int
    grad_norm: float
    value: float
    converged: bool


def minimize(value_fn, grad_fn, x0: np.ndarray, cfg: TrainConfig):
    """Descend value_fn from x0 until the gradient norm falls under grad_tol.

    Steps are -grad scaled by a backtracked step size (halving, Armijo
    c=1e-4); the accepted size seeds the next trial so easy stretches do not
    re-pay the backtracking cost.  Non-finite values or gradients raise
    NumericalFailure with the iteration index.
    """
    x = np.asarray(x0, dtype=float).copy()
    fx = float(value_fn(x))
    if not np.isfinite(fx):
        raise NumericalFailure("objective not finite at the initial point", 0)

    trial = cfg.learning_rate
    it = 0
    grad_norm = np.inf
    converged = False
    for it in range(1, cfg.max_iters + 1):
        g = np.asarray(grad_fn(x), dtype=float)
        if not np.all(np.isfinite(g)):
            raise NumericalFailure("gradient not finite", it)
        grad_norm = float(np.linalg.norm(g.ravel()))
        if grad_norm <= cfg.grad_tol:
            converged = True
            break

        slope = -(grad_norm**2)
        t = trial
        accepted = False
        for _ in range(_MAX_HALVINGS):
            xt = x - t * g
            ft = float(value_fn(xt))
            if np.isfinite(ft) and ft <= fx + _ARMIJO * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # Step collapsed below resolution: no further descent possible.
            break
        x, fx = xt, ft
        trial = min(cfg.learning_rate, 2.0 * t)

    return x, OptResult(iterations=it, grad_norm=grad_norm, value=fx, converged=converged)
