"""Low-rank factors ``Z`` with ``Z Z^T ~ K`` and the UKP distance computed from them.

With a factor of width ``D`` the smoother follows the push-through identity::

    Z Z^T (Z Z^T + c I_n)^{-1} = Z (Z^T Z + c I_D)^{-1} Z^T

and is evaluated from a thin SVD of ``Z``, so the cost drops from ``O(n^3)``
to ``O(n D min(n, D))``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._rng import check_seed, make_rng
from .errors import ConfigError, DimensionError
from .kernels import KernelFamily, KernelSpec, as_matrix, cross_gram, gram_matrix
from .metrics import MetricValue, _finish
from .spectral import _check_lambda, sym_eig

NYSTROM_RANK_TOL = 1e-12


class Provenance(str, enum.Enum):
    NYSTROM = "nystrom"
    RANDOM_FEATURES = "rff"
    EXACT = "exact"


@dataclass(frozen=True)
class LowRankFactor:
    Z: np.ndarray
    provenance: Provenance
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def D(self) -> int:
        return self.Z.shape[1]

    def gram(self) -> np.ndarray:
        return self.Z @ self.Z.T


@dataclass(frozen=True)
class ApproxConfig:
    method: Provenance
    D: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", Provenance(self.method))
        if int(self.D) < 1:
            raise ConfigError(f"rank budget D must be >= 1, got {self.D}")
        object.__setattr__(self, "D", int(self.D))
        object.__setattr__(self, "seed", check_seed(self.seed))


def rff_map(spec: KernelSpec, X, D: int, seed: int) -> LowRankFactor:
    """Random Fourier features ``sqrt(2/D) cos(X W + b)``.

    Frequencies are drawn from the kernel's spectral density: normal with
    variance ``1/h`` per coordinate for the RBF kernel, Cauchy with scale
    ``1/(2h)`` for the Laplace kernel.
    """
    if spec.family is KernelFamily.LINEAR:
        raise ConfigError("random features are for radial kernels; use exact_factor(X) for linear")
    D = int(D)
    if D < 1:
        raise ConfigError(f"rank budget D must be >= 1, got {D}")
    seed = check_seed(seed)
    X = as_matrix(X)
    k = X.shape[1]
    rng = make_rng(seed)
    if spec.family is KernelFamily.RBF:
        W = rng.standard_normal((k, D)) / np.sqrt(spec.bandwidth)
    else:
        W = rng.standard_cauchy((k, D)) / (2.0 * spec.bandwidth)
    b = rng.uniform(0.0, 2.0 * np.pi, size=D)
    Z = np.sqrt(2.0 / D) * np.cos(X @ W + b)
    return LowRankFactor(Z, Provenance.RANDOM_FEATURES, seed)


def nystrom_map(spec: KernelSpec, X, D: int, seed: int) -> LowRankFactor:
    """Nyström factor ``K[:, S] W^{-1/2}`` from ``D`` uniformly drawn landmarks."""
    X = as_matrix(X)
    n = X.shape[0]
    D = int(D)
    if D < 1 or D > n:
        raise ConfigError(f"Nystrom rank must satisfy 1 <= D <= n={n}, got {D}")
    seed = check_seed(seed)
    landmarks = np.sort(make_rng(seed).choice(n, size=D, replace=False))
    L = X[landmarks]
    W = gram_matrix(spec, L)
    eig = sym_eig(W)
    mu, U = eig.eigenvalues, eig.eigenvectors
    keep = mu > NYSTROM_RANK_TOL * mu[0] if mu[0] > 0 else np.zeros_like(mu, dtype=bool)
    inv_root = (U[:, keep] / np.sqrt(mu[keep])) @ U[:, keep].T
    Z = cross_gram(spec, X, L) @ inv_root
    return LowRankFactor(Z, Provenance.NYSTROM, seed)


def exact_factor(X) -> LowRankFactor:
    """``Z = X`` is an exact factor of the linear-kernel Gram matrix."""
    return LowRankFactor(as_matrix(X).copy(), Provenance.EXACT)


def build_factor(spec: KernelSpec, X, config: ApproxConfig) -> LowRankFactor:
    if spec.family is KernelFamily.LINEAR and config.method is not Provenance.NYSTROM:
        return exact_factor(X)
    if config.method is Provenance.NYSTROM:
        return nystrom_map(spec, X, config.D, config.seed)
    if config.method is Provenance.RANDOM_FEATURES:
        return rff_map(spec, X, config.D, config.seed)
    return exact_factor(X)


def _smoother_basis(Z: np.ndarray, c: float) -> tuple[np.ndarray, np.ndarray]:
    # Z = U S V^T gives Z (Z^T Z + c I)^{-1} Z^T = U diag(s^2 / (s^2 + c)) U^T
    U, s, _ = np.linalg.svd(Z, full_matrices=False)
    s2 = s * s
    return U, s2 / (s2 + c)


def ukp_lowrank(Zphi: LowRankFactor, Zpsi: LowRankFactor, lam: float) -> MetricValue:
    """UKP distance between the Gram matrices ``Zphi Zphi^T`` and ``Zpsi Zpsi^T``.

    Each smoother is represented by a thin SVD of its factor, so the largest
    object is ``n x min(n, D)`` and no ``n x n`` matrix is formed when ``D < n``.
    """
    A = Zphi.Z if isinstance(Zphi, LowRankFactor) else np.asarray(Zphi, dtype=np.float64)
    B = Zpsi.Z if isinstance(Zpsi, LowRankFactor) else np.asarray(Zpsi, dtype=np.float64)
    if A.ndim != 2 or B.ndim != 2:
        raise DimensionError("factors must be 2-D arrays")
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"factors come from different samples: n={A.shape[0]} vs n={B.shape[0]}")
    lam = _check_lambda(lam)
    if B is A:
        return _finish(0.0, None)
    c = A.shape[0] * lam
    Uphi, rphi = _smoother_basis(A, c)
    Upsi, rpsi = _smoother_basis(B, c)
    C = Uphi.T @ Upsi
    sq = float(rphi @ rphi) + float(rpsi @ rpsi) - 2.0 * float(rphi @ (C * C) @ rpsi)
    return _finish(sq, None)
