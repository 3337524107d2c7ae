"""Representation similarity measures.

All Gram-based measures take raw (uncentered) Gram matrices computed on the
same ``n`` inputs. The UKP distance is evaluated from ridge smoothers
``H = K (K + n*lam*I)^{-1}`` as::

    d^2 = Tr(Hphi Hphi) + Tr(Hpsi Hpsi) - 2 Tr(Hphi Hpsi)

with an eigenvalue/eigenvector form available as an independent check.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigError, DegenerateInputError, DimensionError, NumericError, NumericWarning
from .kernels import KernelFamily, KernelSpec, as_gram, as_matrix, center_gram
from .spectral import SymmetricEigen, _check_lambda, hat_from_eig, shrinkage, sym_eig, trace_product

CLAMP_WARN = 1e-10
CCA_RANK_TOL = 1e-12


class Metric(str, enum.Enum):
    UKP = "ukp"
    GULP = "gulp"
    RCCA = "rcca"
    CKA = "cka"
    CCA = "cca"


@dataclass(frozen=True)
class MetricConfig:
    """Which measure to compute, with its kernel and ridge parameter.

    GULP and CCA always use the linear kernel; CKA and CCA take no ridge
    parameter.
    """

    metric: Metric = Metric.UKP
    kernel: KernelSpec | None = None
    lam: float | None = None

    def __post_init__(self):
        try:
            metric = Metric(self.metric)
        except ValueError:
            raise ConfigError(f"unknown metric {self.metric!r}") from None
        object.__setattr__(self, "metric", metric)
        kernel = self.kernel
        if metric in (Metric.GULP, Metric.CCA):
            if kernel is not None and kernel.family is not KernelFamily.LINEAR:
                raise ConfigError(f"{metric.value} is defined for the linear kernel only")
            kernel = KernelSpec.linear()
        elif kernel is None:
            raise ConfigError(f"{metric.value} needs a kernel")
        object.__setattr__(self, "kernel", kernel)
        if metric in (Metric.CKA, Metric.CCA):
            if self.lam is not None:
                raise ConfigError(f"{metric.value} takes no ridge parameter")
        else:
            if self.lam is None:
                raise ConfigError(f"{metric.value} needs a ridge parameter")
            object.__setattr__(self, "lam", _check_lambda(self.lam))

    def to_dict(self) -> dict:
        return {
            "name": self.metric.value,
            "kernel": self.kernel.family.value,
            "bandwidth": self.kernel.bandwidth,
            "lambda": self.lam,
        }


@dataclass(frozen=True)
class MetricValue:
    value: float
    squared: float
    config: MetricConfig | None = None

    def __float__(self) -> float:
        return self.value


def _finish(squared: float, config: MetricConfig | None) -> MetricValue:
    if squared < 0.0:
        if squared < -CLAMP_WARN:
            warnings.warn(
                f"squared distance {squared:.3e} below zero beyond rounding; clamped",
                NumericWarning,
                stacklevel=3,
            )
        squared = 0.0
    return MetricValue(float(np.sqrt(squared)), float(squared), config)


def _pair(Kphi, Kpsi) -> tuple[np.ndarray, np.ndarray]:
    Kphi = as_gram(Kphi, "Kphi")
    Kpsi = as_gram(Kpsi, "Kpsi")
    if Kphi.shape != Kpsi.shape:
        raise DimensionError(
            f"Gram matrices come from different samples: n={Kphi.shape[0]} vs n={Kpsi.shape[0]}"
        )
    return Kphi, Kpsi


def ukp_from_hats(Hphi: np.ndarray, Hpsi: np.ndarray, config: MetricConfig | None = None) -> MetricValue:
    sq = trace_product(Hphi, Hphi) + trace_product(Hpsi, Hpsi) - 2.0 * trace_product(Hphi, Hpsi)
    return _finish(sq, config)


def ukp(Kphi, Kpsi, lam: float) -> MetricValue:
    """UKP distance from two Gram matrices on the same sample."""
    Kphi, Kpsi = _pair(Kphi, Kpsi)
    lam = _check_lambda(lam)
    Hphi = hat_from_eig(sym_eig(Kphi), lam)
    Hpsi = Hphi if Kpsi is Kphi else hat_from_eig(sym_eig(Kpsi), lam)
    return ukp_from_hats(Hphi, Hpsi)


def _eig_cross(ephi: SymmetricEigen, epsi: SymmetricEigen, lam: float) -> tuple[float, float, float]:
    rphi = shrinkage(ephi, lam)
    rpsi = shrinkage(epsi, lam)
    C = ephi.eigenvectors.T @ epsi.eigenvectors
    cross = float(rphi @ (C * C) @ rpsi)
    return float(rphi @ rphi), float(rpsi @ rpsi), cross


def ukp_eigenform(Kphi, Kpsi, lam: float) -> MetricValue:
    """UKP distance through eigenvalues and eigenvector overlaps.

    Uses ``c_ij = u_phi_i . u_psi_j`` and smoother eigenvalues
    ``r = mu / (mu + n*lam)``::

        d^2 = sum r_phi^2 + sum r_psi^2 - 2 sum_ij r_phi_i r_psi_j c_ij^2
    """
    Kphi, Kpsi = _pair(Kphi, Kpsi)
    lam = _check_lambda(lam)
    sphi, spsi, cross = _eig_cross(sym_eig(Kphi), sym_eig(Kpsi), lam)
    return _finish(sphi + spsi - 2.0 * cross, None)


def rcca(Kphi, Kpsi, lam: float) -> float:
    """Kernel ridge-CCA similarity ``Tr(Hphi Hpsi)``."""
    Kphi, Kpsi = _pair(Kphi, Kpsi)
    lam = _check_lambda(lam)
    Hphi = hat_from_eig(sym_eig(Kphi), lam)
    Hpsi = Hphi if Kpsi is Kphi else hat_from_eig(sym_eig(Kpsi), lam)
    return trace_product(Hphi, Hpsi)


def rcca_eigenform(Kphi, Kpsi, lam: float) -> float:
    Kphi, Kpsi = _pair(Kphi, Kpsi)
    return _eig_cross(sym_eig(Kphi), sym_eig(Kpsi), _check_lambda(lam))[2]


def _centered_nonzero(K: np.ndarray, name: str) -> np.ndarray:
    Kc = center_gram(K)
    scale = np.linalg.norm(K)
    if scale == 0.0 or np.linalg.norm(Kc) <= 1e-12 * scale:
        raise DegenerateInputError(f"{name} is constant after centering; CKA is undefined")
    return Kc


def cka_from_centered(Kc_phi: np.ndarray, Kc_psi: np.ndarray) -> float:
    num = trace_product(Kc_phi, Kc_psi)
    den = np.sqrt(trace_product(Kc_phi, Kc_phi) * trace_product(Kc_psi, Kc_psi))
    return float(num / den)


def cka(Kphi, Kpsi) -> float:
    """Centered kernel alignment; centering is applied here."""
    Kphi, Kpsi = _pair(Kphi, Kpsi)
    return cka_from_centered(_centered_nonzero(Kphi, "Kphi"), _centered_nonzero(Kpsi, "Kpsi"))


def _covariances(X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = X.shape[0]
    Sxx = X.T @ X / n
    Syy = Y.T @ Y / n
    Sxy = X.T @ Y / n
    return 0.5 * (Sxx + Sxx.T), 0.5 * (Syy + Syy.T), Sxy


def _ridge_solve(S: np.ndarray, lam: float, B: np.ndarray) -> np.ndarray:
    A = S + lam * np.eye(S.shape[0])
    try:
        return scipy.linalg.solve(A, B, assume_a="pos", check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"regularized covariance is not positive definite: {exc}") from exc


def gulp_primal(Xphi, Xpsi, lam: float) -> MetricValue:
    """Linear-kernel UKP (GULP) computed from feature covariances.

    Works with k x k and l x l covariance matrices, so it is the cheap route
    when the feature dimensions are small compared to ``n``.
    """
    Xphi = as_matrix(Xphi, "Xphi")
    Xpsi = as_matrix(Xpsi, "Xpsi")
    if Xphi.shape[0] != Xpsi.shape[0]:
        raise DimensionError(f"sample counts differ: {Xphi.shape[0]} vs {Xpsi.shape[0]}")
    lam = _check_lambda(lam)
    Sphi, Spsi, Sphipsi = _covariances(Xphi, Xpsi)
    Mphi = _ridge_solve(Sphi, lam, Sphi)
    Mpsi = _ridge_solve(Spsi, lam, Spsi)
    Pphi = _ridge_solve(Sphi, lam, Sphipsi)
    Ppsi = _ridge_solve(Spsi, lam, Sphipsi.T)
    sq = (
        np.sum(Mphi * Mphi.T)
        + np.sum(Mpsi * Mpsi.T)
        - 2.0 * np.sum(Pphi * Ppsi.T)
    )
    return _finish(float(sq), MetricConfig(Metric.GULP, lam=lam))


def _projector_basis(X: np.ndarray) -> np.ndarray:
    eig = sym_eig(X @ X.T)
    mu = eig.eigenvalues
    if mu[0] <= 0.0:
        return eig.eigenvectors[:, :0]
    keep = mu > CCA_RANK_TOL * mu[0]
    return eig.eigenvectors[:, keep]


def cca(Xphi, Xpsi) -> float:
    """``Tr(Pphi Ppsi)`` for the orthogonal projectors onto the column spaces
    of the linear Gram matrices (the ``lam -> 0`` limit of :func:`rcca`).
    Ranges over ``[0, min(rank phi, rank psi)]``.
    """
    Xphi = as_matrix(Xphi, "Xphi")
    Xpsi = as_matrix(Xpsi, "Xpsi")
    if Xphi.shape[0] != Xpsi.shape[0]:
        raise DimensionError(f"sample counts differ: {Xphi.shape[0]} vs {Xpsi.shape[0]}")
    Uphi = _projector_basis(Xphi)
    Upsi = _projector_basis(Xpsi)
    C = Uphi.T @ Upsi
    return float(np.sum(C * C))


def compute(config: MetricConfig, Xphi, Xpsi) -> float:
    """Evaluate ``config`` on two representation matrices.

    Returns the distance for UKP/GULP and the raw similarity for RCCA, CKA
    and CCA.
    """
    from .kernels import gram_matrix

    m = config.metric
    if m is Metric.GULP:
        return gulp_primal(Xphi, Xpsi, config.lam).value
    if m is Metric.CCA:
        return cca(Xphi, Xpsi)
    Kphi = gram_matrix(config.kernel, Xphi)
    Kpsi = gram_matrix(config.kernel, Xpsi)
    if m is Metric.UKP:
        return ukp(Kphi, Kpsi, config.lam).value
    if m is Metric.RCCA:
        return rcca(Kphi, Kpsi, config.lam)
    return cka(Kphi, Kpsi)
