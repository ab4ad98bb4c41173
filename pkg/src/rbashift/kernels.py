"""Kernel specifications, Gram matrices, and the label-matched joint kernel."""

from dataclasses import dataclass

import numpy as np

_KINDS = ("linear", "polynomial", "gaussian")


@dataclass(frozen=True)
class KernelSpec:
    """Validated kernel description; parameters present iff the kind uses them.

    linear      k(x, x') = x . x'
    polynomial  k(x, x') = (x . x' + offset)^degree
    gaussian    k(x, x') = exp(-||x - x'||^2 / (2 bandwidth^2))
    """

    kind: str
    degree: int | None = None
    bandwidth: float | None = None
    offset: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "linear":
            if self.degree is not None or self.bandwidth is not None or self.offset is not None:
                raise ValueError("linear kernel takes no parameters")
        elif self.kind == "polynomial":
            if self.bandwidth is not None:
                raise ValueError("polynomial kernel takes no bandwidth")
            if self.degree is None or int(self.degree) < 1:
                raise ValueError("polynomial kernel needs degree >= 1")
            object.__setattr__(self, "degree", int(self.degree))
            off = 1.0 if self.offset is None else float(self.offset)
            if off < 0:
                raise ValueError("polynomial offset must be >= 0")
            object.__setattr__(self, "offset", off)
        else:  # gaussian
            if self.degree is not None or self.offset is not None:
                raise ValueError("gaussian kernel takes only a bandwidth")
            if self.bandwidth is None or float(self.bandwidth) <= 0:
                raise ValueError("gaussian kernel needs bandwidth > 0")
            object.__setattr__(self, "bandwidth", float(self.bandwidth))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "polynomial":
            d["degree"] = self.degree
            d["offset"] = self.offset
        elif self.kind == "gaussian":
            d["bandwidth"] = self.bandwidth
        return d

    @staticmethod
    def from_dict(d: dict) -> "KernelSpec":
        return KernelSpec(
            kind=d["kind"],
            degree=d.get("degree"),
            bandwidth=d.get("bandwidth"),
            offset=d.get("offset"),
        )


def kernel_eval(spec: KernelSpec, x: np.ndarray, x2: np.ndarray) -> float:
    x = np.asarray(x, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    if x.shape[0] != x2.shape[0]:
        raise ValueError("kernel arguments must share a dimension")
    if spec.kind == "linear":
        return float(x @ x2)
    if spec.kind == "polynomial":
        return float((x @ x2 + spec.offset) ** spec.degree)
    d2 = float(np.sum((x - x2) ** 2))
    return float(np.exp(-d2 / (2.0 * spec.bandwidth**2)))


def gram(spec: KernelSpec, X: np.ndarray, X2: np.ndarray) -> np.ndarray:
    """Pairwise kernel matrix, gram[i, j] = k(X[i], X2[j])."""
    X = np.asarray(X, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    if X.ndim != 2 or X2.ndim != 2 or X.shape[1] != X2.shape[1]:
        raise ValueError("inputs must be 2-D with matching column counts")
    inner = X @ X2.T
    if spec.kind == "linear":
        return inner
    if spec.kind == "polynomial":
        return (inner + spec.offset) ** spec.degree
    # Squared distances via the norm expansion; rounding can leave tiny
    # negatives, clip so the diagonal of gram(X, X) stays exactly 1.
    sq = np.sum(X**2, axis=1)[:, None] + np.sum(X2**2, axis=1)[None, :] - 2.0 * inner
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * spec.bandwidth**2))


def joint_kernel(spec: KernelSpec, x, y: int, x2, y2: int) -> float:
    """Kernel on (input, label) pairs: delta(y, y2) * k(x, x2)."""
    y, y2 = int(y), int(y2)
    if y < 0 or y2 < 0:
        raise ValueError("labels must be non-negative")
    if y != y2:
        return 0.0
    return kernel_eval(spec, x, x2)
