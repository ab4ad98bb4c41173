"""Shared domain types, the class-indexed feature embedding, and metrics."""

from dataclasses import dataclass

import numpy as np
import pandas as pd

# Per-sample probabilities are floored here before taking logs so a single
# confidently-wrong prediction stays finite (~40 bits) instead of inf.
PROB_FLOOR = 1e-12


class NumericalFailure(RuntimeError):
    """Raised when an iterative routine produces non-finite values."""

    def __init__(self, message: str, iteration: int | None = None):
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)
        self.iteration = iteration


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with integer labels in {0..class_count-1}.

    Arrays are coerced to float64 / int64 on construction and treated as
    immutable afterwards.
    """

    features: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("features must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError("labels must align with feature rows")
        if not np.issubdtype(y.dtype, np.integer):
            if not np.all(np.equal(np.mod(y, 1), 0)):
                raise ValueError("labels must be integers")
        y = y.astype(np.int64)
        if int(self.class_count) < 2:
            raise ValueError("class_count must be at least 2")
        if y.size and (y.min() < 0 or y.max() >= self.class_count):
            raise ValueError("labels must lie in {0..class_count-1}")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "class_count", int(self.class_count))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.class_count)


@dataclass(frozen=True)
class FeatureMap:
    """Class-indexed block embedding of an (input, label) pair.

    The output has one block of size block_dim per class; block y holds the
    input (prefixed with a constant 1 when include_bias), all other blocks
    are zero.  Embeddings of distinct labels are therefore orthogonal.
    """

    input_dim: int
    class_count: int
    include_bias: bool = True

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be positive")
        if self.class_count < 2:
            raise ValueError("class_count must be at least 2")

    @property
    def block_dim(self) -> int:
        return self.input_dim + (1 if self.include_bias else 0)

    @property
    def output_dim(self) -> int:
        return self.class_count * self.block_dim

    def to_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "class_count": self.class_count,
            "include_bias": self.include_bias,
        }

    @staticmethod
    def from_dict(d: dict) -> "FeatureMap":
        return FeatureMap(
            input_dim=int(d["input_dim"]),
            class_count=int(d["class_count"]),
            include_bias=bool(d["include_bias"]),
        )


def feature_map(fm: FeatureMap, x: np.ndarray, y: int) -> np.ndarray:
    """Embed one (input, label) pair into the class-indexed block layout."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != fm.input_dim:
        raise ValueError(f"expected input of dimension {fm.input_dim}, got {x.shape[0]}")
    y = int(y)
    if not 0 <= y < fm.class_count:
        raise ValueError(f"label {y} outside {{0..{fm.class_count - 1}}}")
    out = np.zeros(fm.output_dim)
    b = fm.block_dim
    if fm.include_bias:
        out[y * b] = 1.0
        out[y * b + 1 : (y + 1) * b] = x
    else:
        out[y * b : (y + 1) * b] = x
    return out


def design_matrix(fm: FeatureMap, X: np.ndarray) -> np.ndarray:
    """Rows embedded without the class index: [1, x] per row (or x alone)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != fm.input_dim:
        raise ValueError(f"expected an (n, {fm.input_dim}) matrix")
    if fm.include_bias:
        return np.hstack([np.ones((X.shape[0], 1)), X])
    return X


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted by the row max for overflow safety."""
    S = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(S)):
        raise NumericalFailure("non-finite scores in softmax")
    S = S - S.max(axis=1, keepdims=True)
    E = np.exp(S)
    return E / E.sum(axis=1, keepdims=True)


def check_prediction_matrix(preds: np.ndarray, row_tol: float = 1e-9) -> np.ndarray:
    """Validate a row-stochastic prediction matrix; returns it as float64."""
    P = np.asarray(preds, dtype=float)
    if P.ndim != 2 or P.shape[0] < 1 or P.shape[1] < 2:
        raise ValueError("prediction matrix must be (n, class_count) with n >= 1")
    if not np.all(np.isfinite(P)):
        raise ValueError("prediction matrix must be finite")
    if P.min() < 0.0 or P.max() > 1.0:
        raise ValueError("prediction entries must lie in [0, 1]")
    if np.max(np.abs(P.sum(axis=1) - 1.0)) > row_tol:
        raise ValueError("prediction rows must sum to 1")
    return P


def logloss(preds: np.ndarray, labels: np.ndarray) -> float:
    """Mean base-2 log loss of the probabilities assigned to true labels."""
    P = np.asarray(preds, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    if P.ndim != 2 or y.ndim != 1 or P.shape[0] != y.shape[0]:
        raise ValueError("predictions and labels must align")
    if P.shape[0] == 0:
        raise ValueError("empty input")
    if y.min() < 0 or y.max() >= P.shape[1]:
        raise ValueError("labels outside prediction columns")
    p_true = np.maximum(P[np.arange(P.shape[0]), y], PROB_FLOOR)
    return float(np.mean(-np.log2(p_true)))


def entropy(preds: np.ndarray) -> float:
    """Mean base-2 Shannon entropy of prediction rows (0*log 0 := 0)."""
    P = np.asarray(preds, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError("empty input")
    terms = np.where(P > 0.0, -P * np.log2(np.maximum(P, PROB_FLOOR)), 0.0)
    return float(np.mean(terms.sum(axis=1)))


def accuracy(preds: np.ndarray, labels: np.ndarray) -> float:
    """Argmax accuracy; ties break toward the lowest class index."""
    P = np.asarray(preds, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    if P.ndim != 2 or P.shape[0] != y.shape[0]:
        raise ValueError("predictions and labels must align")
    if P.shape[0] == 0:
        raise ValueError("empty input")
    return float(np.mean(np.argmax(P, axis=1) == y))


@dataclass(frozen=True)
class MetricReport:
    logloss_bits: float
    entropy_bits: float
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "logloss_bits": self.logloss_bits,
            "entropy_bits": self.entropy_bits,
            "accuracy": self.accuracy,
        }


def evaluate(preds: np.ndarray, labels: np.ndarray) -> MetricReport:
    P = check_prediction_matrix(preds)
    return MetricReport(
        logloss_bits=logloss(P, labels),
        entropy_bits=entropy(P),
        accuracy=accuracy(P, labels),
    )


def load_csv(path, label_column: str, class_count: int | None = None) -> Dataset:
    """Read a headered CSV into a Dataset.

    All non-label columns must be numeric and become features in file order.
    Without class_count, sorted unique label values are canonicalized to
    0..K-1 (files in the wild are often 1-based); with it, labels must
    already be canonical.
    """
    frame = pd.read_csv(path)
    if label_column not in frame.columns:
        raise ValueError(f"label column {label_column!r} not present in {path}")
    raw = frame[label_column].to_numpy()
    feats = frame.drop(columns=[label_column])
    try:
        X = feats.to_numpy(dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"non-numeric feature column in {path}: {exc}") from None
    if not np.all(np.equal(np.mod(raw, 1), 0)):
        raise ValueError("labels must be integer-valued")
    raw = raw.astype(np.int64)
    if class_count is None:
        values = np.unique(raw)
        y = np.searchsorted(values, raw)
        k = len(values)
    else:
        y, k = raw, int(class_count)
    return Dataset(X, y, k)


def save_csv(dataset: Dataset, path, label_column: str = "label") -> None:
    """Write a Dataset in the same headered layout load_csv reads."""
    cols = {f"x{j}": dataset.features[:, j] for j in range(dataset.dim)}
    cols[label_column] = dataset.labels
    pd.DataFrame(cols).to_csv(path, index=False)
