"""Symmetric eigendecomposition, ridge smoother ("hat") matrices and trace products."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _backend
from .errors import ConfigError, DimensionError, NotPSDError, NumericError
from .kernels import as_gram

PSD_TOL = 1e-8


@dataclass(frozen=True)
class SymmetricEigen:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


def _canonical_signs(U: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def _order_ties(mu: np.ndarray, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # within runs of exactly equal eigenvalues, sort columns lexicographically
    # (descending) so the layout does not depend on LAPACK's internal order
    order = np.arange(mu.size)
    start = 0
    while start < mu.size:
        stop = start + 1
        while stop < mu.size and mu[stop] == mu[start]:
            stop += 1
        if stop - start > 1:
            block = U[:, start:stop]
            perm = np.lexsort(-block[::-1])
            order[start:stop] = start + perm
        start = stop
    return mu[order], U[:, order]


def sym_eig(K) -> SymmetricEigen:
    """Eigendecomposition of a symmetric PSD matrix.

    Eigenvalues in ``(-1e-8 * mu_max, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPSDError`. Eigenvectors are sign-normalized so
    that the entry of largest magnitude in each column is positive.
    """
    K = as_gram(K)
    try:
        mu, U = scipy.linalg.eigh(K, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"symmetric eigensolver failed: {exc}") from exc
    mu = mu[::-1].copy()
    U = U[:, ::-1]
    tol = PSD_TOL * max(mu[0], 0.0)
    if mu[-1] < -tol:
        raise NotPSDError(
            f"matrix is not positive semidefinite: min eigenvalue {mu[-1]:.3e}, "
            f"max eigenvalue {mu[0]:.3e}"
        )
    np.maximum(mu, 0.0, out=mu)
    U = _canonical_signs(U)
    mu, U = _order_ties(mu, U)
    return SymmetricEigen(mu, np.ascontiguousarray(U))


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0:
        raise ConfigError(f"ridge parameter must be positive, got {lam!r}")
    return lam


def shrinkage(eig: SymmetricEigen, lam: float) -> np.ndarray:
    """Smoother eigenvalues ``mu / (mu + n*lam)``."""
    lam = _check_lambda(lam)
    mu = eig.eigenvalues
    return mu / (mu + eig.n * lam)


def hat_from_eig(eig: SymmetricEigen, lam: float) -> np.ndarray:
    r = shrinkage(eig, lam)
    U = eig.eigenvectors
    H = (U * r) @ U.T
    return 0.5 * (H + H.T)


def hat_matrix(K, lam: float, method: str = "eig") -> np.ndarray:
    """Ridge smoother ``K (K + n*lam*I)^{-1}``.

    ``method="eig"`` (default) goes through :func:`sym_eig`;
    ``method="solve"`` uses a Cholesky solve and is meant as a fast path
    and cross-check.
    """
    lam = _check_lambda(lam)
    if method == "eig":
        return hat_from_eig(sym_eig(K), lam)
    if method != "solve":
        raise ConfigError(f"unknown hat_matrix method {method!r}")
    K = as_gram(K)
    n = K.shape[0]
    A = K + n * lam * np.eye(n)
    try:
        # K and (K + n lam I)^{-1} commute, so solving from the left is fine
        H = scipy.linalg.solve(A, K, assume_a="pos", check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"ridge system is not positive definite: {exc}") from exc
    return 0.5 * (H + H.T)


def trace_product(A, B) -> float:
    """``Tr(AB)`` as ``sum_ij A_ij B_ji`` without forming ``AB``."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise DimensionError(f"trace_product needs equal square matrices, got {A.shape} and {B.shape}")
    return _backend.get().trace_product(A, B)
