"""Kernel evaluation, Gram matrices and centering.

Three kernel families are supported, all with bandwidth ``h``::

    linear    K(x, y) = x.y
    rbf       K(x, y) = exp(-|x - y|_2^2 / (2h))
    laplace   K(x, y) = exp(-|x - y|_1   / (2h))
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConfigError, DimensionError


class KernelFamily(str, enum.Enum):
    LINEAR = "linear"
    RBF = "rbf"
    LAPLACE = "laplace"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family together with its bandwidth ``h`` (unused for linear)."""

    family: KernelFamily = KernelFamily.LINEAR
    bandwidth: float | None = None

    def __post_init__(self):
        try:
            family = KernelFamily(self.family)
        except ValueError:
            raise ConfigError(f"unknown kernel family {self.family!r}") from None
        object.__setattr__(self, "family", family)
        if family is KernelFamily.LINEAR:
            object.__setattr__(self, "bandwidth", None)
            return
        h = self.bandwidth
        if h is None or not np.isfinite(h) or h <= 0:
            raise ConfigError(f"{family.value} kernel needs a positive bandwidth, got {h!r}")
        object.__setattr__(self, "bandwidth", float(h))

    @classmethod
    def linear(cls) -> "KernelSpec":
        return cls(KernelFamily.LINEAR)

    @classmethod
    def rbf(cls, bandwidth: float) -> "KernelSpec":
        return cls(KernelFamily.RBF, bandwidth)

    @classmethod
    def laplace(cls, bandwidth: float) -> "KernelSpec":
        return cls(KernelFamily.LAPLACE, bandwidth)

    @property
    def is_radial(self) -> bool:
        return self.family is not KernelFamily.LINEAR

    def to_dict(self) -> dict:
        return {"kernel": self.family.value, "bandwidth": self.bandwidth}


@dataclass
class Representation:
    """Rows are samples, columns are feature dimensions."""

    data: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = as_matrix(self.data)

    @property
    def n(self) -> int:
        return self.data.shape[0]


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Validate a representation matrix and return it as a float64 array."""
    if isinstance(X, Representation):
        return X.data
    A = np.asarray(X, dtype=np.float64)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D (samples x features), got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and one column, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError(f"{name} contains NaN or Inf")
    return A


def as_gram(K, name: str = "K") -> np.ndarray:
    """Validate a square, finite, symmetric matrix (symmetry within 1e-12)."""
    A = np.asarray(K, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError(f"{name} contains NaN or Inf")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12:
        raise DimensionError(f"{name} is not symmetric")
    return A


def eval_kernel(spec: KernelSpec, x, y) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"vectors differ in length: {x.size} vs {y.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DimensionError("kernel arguments must be finite")
    if spec.family is KernelFamily.LINEAR:
        return float(x @ y)
    diff = x - y
    if spec.family is KernelFamily.RBF:
        return float(np.exp(-(diff @ diff) / (2.0 * spec.bandwidth)))
    return float(np.exp(-np.abs(diff).sum() / (2.0 * spec.bandwidth)))


def _radial(spec: KernelSpec, dist: np.ndarray) -> np.ndarray:
    return np.exp(dist * (-1.0 / (2.0 * spec.bandwidth)))


def gram_matrix(spec: KernelSpec, X) -> np.ndarray:
    """n x n Gram matrix of the rows of ``X``; exactly symmetric."""
    X = as_matrix(X)
    kern = _backend.get()
    if spec.family is KernelFamily.LINEAR:
        G = X @ X.T
        upper = np.triu(G, 1)
        return upper + upper.T + np.diag(np.diag(G))
    if spec.family is KernelFamily.RBF:
        dist = kern.sqeuclidean_gram(X)
    else:
        dist = kern.cityblock_gram(X)
    return _radial(spec, dist)


def cross_gram(spec: KernelSpec, X, Y) -> np.ndarray:
    """Kernel evaluations between rows of ``X`` (n x k) and rows of ``Y`` (m x k)."""
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(f"feature dimensions differ: {X.shape[1]} vs {Y.shape[1]}")
    if spec.family is KernelFamily.LINEAR:
        return X @ Y.T
    kern = _backend.get()
    if spec.family is KernelFamily.RBF:
        dist = kern.sqeuclidean_cross(X, Y)
    else:
        dist = kern.cityblock_cross(X, Y)
    return _radial(spec, dist)


def center_gram(K) -> np.ndarray:
    """Double-center ``K``: returns ``H K H`` with ``H = I - 11^T / n``."""
    K = as_gram(K)
    row_means = K.mean(axis=1)
    Kc = K - row_means[:, None] - row_means[None, :] + row_means.mean()
    # a second pass removes the O(eps) residual means, making centering idempotent
    r = Kc.mean(axis=1)
    Kc = Kc - r[:, None] - r[None, :] + r.mean()
    return 0.5 * (Kc + Kc.T)
