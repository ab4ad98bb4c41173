import numpy as np
import pytest

from rbashift.core import Dataset


def make_gaussian_dataset(seed, n=60, d=3, k=3, spread=2.0):
    """Seeded Gaussian class clusters; labels are the cluster ids."""
    rng = np.random.default_rng(seed)
    means = rng.normal(scale=spread, size=(k, d))
    labels = rng.integers(0, k, size=n)
    X = means[labels] + rng.normal(size=(n, d))
    return Dataset(X, labels, k)


def central_diff(value_fn, x, h=1e-5):
    """Central finite differences of a scalar function over a flat/nd array."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    flat = g.ravel()
    xf = x.ravel()
    for i in range(xf.size):
        step = np.zeros_like(xf)
        step[i] = h
        plus = value_fn((xf + step).reshape(x.shape))
        minus = value_fn((xf - step).reshape(x.shape))
        flat[i] = (plus - minus) / (2 * h)
    return g


def grad_rel_err(numeric, analytic):
    """Worst entry error scaled by the gradient's largest magnitude."""
    numeric = np.asarray(numeric, dtype=float).ravel()
    analytic = np.asarray(analytic, dtype=float).ravel()
    scale = max(np.max(np.abs(analytic)), 1e-12)
    return float(np.max(np.abs(numeric - analytic)) / scale)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
