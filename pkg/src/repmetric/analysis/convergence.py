"""Empirical convergence rate of the squared UKP estimate in the sample size."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .._rng import check_seed, make_rng
from ..errors import ConfigError, DimensionError
from ..kernels import KernelFamily, KernelSpec, as_matrix, gram_matrix
from ..metrics import ukp
from ..spectral import _check_lambda

PairSampler = Callable[[int, np.random.Generator], tuple[np.ndarray, np.ndarray]]


def concentration_bound(n, kappa: float, lam: float, delta: float = 0.05):
    """High-probability bound on ``|d^2 - d_hat^2|`` for ``n`` samples.

    ``kappa`` bounds the kernel; holds with probability at least ``1 - delta``.
    """
    n = np.asarray(n, dtype=np.float64)
    L = 2.0 * np.log(6.0 / delta)
    a = 8.0 * kappa**3 / lam**3 * (L / n + np.sqrt(L / n))
    b = 4.0 * kappa**2 / lam**2 * (2.0 / n + np.sqrt(L / n))
    return a + b


@dataclass
class ConvergenceReport:
    n_grid: list[int]
    n_ref: int
    reference: float
    errors: np.ndarray
    median_errors: np.ndarray
    slope: float
    intercept: float
    kappa: float
    delta: float
    envelope: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n_grid": self.n_grid,
            "n_ref": self.n_ref,
            "reference_squared": self.reference,
            "median_abs_error": self.median_errors.tolist(),
            "slope": self.slope,
            "intercept": self.intercept,
            "kappa": self.kappa,
            "delta": self.delta,
            "envelope": self.envelope.tolist(),
        }


def _kernel_bound(kernel: KernelSpec, X: np.ndarray, Y: np.ndarray) -> float:
    if kernel.family is not KernelFamily.LINEAR:
        return 1.0
    return float(max(np.max(np.sum(X * X, axis=1)), np.max(np.sum(Y * Y, axis=1))))


def convergence_experiment(generator: PairSampler, kernel: KernelSpec, lam: float,
                           n_grid: list[int], n_ref: int, repeats: int, seed: int,
                           delta: float = 0.05) -> ConvergenceReport:
    """Median ``|d_hat^2_n - d_hat^2_ref|`` over repeats for each ``n`` in the grid.

    ``generator(n, rng)`` returns a pair of representation matrices of the
    same ``n`` inputs. A pool of ``n_ref`` inputs is drawn once and its
    estimate serves as the reference; each grid estimate uses a random
    subset of the pool (without replacement). ``slope`` is the least-squares
    fit of log median error against log ``n``.
    """
    seed = check_seed(seed)
    lam = _check_lambda(lam)
    grid = [int(v) for v in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("n_grid must be non-empty and strictly increasing")
    if grid[0] < 1 or grid[-1] > n_ref:
        raise ConfigError(f"grid sizes must lie in [1, n_ref={n_ref}]")
    if repeats < 5:
        raise ConfigError("repeats must be >= 5")

    Xphi, Xpsi = generator(int(n_ref), make_rng(seed, 0))
    Xphi = as_matrix(Xphi, "Xphi")
    Xpsi = as_matrix(Xpsi, "Xpsi")
    if Xphi.shape[0] != n_ref or Xpsi.shape[0] != n_ref:
        raise DimensionError("generator returned the wrong number of samples")
    Kphi = gram_matrix(kernel, Xphi)
    Kpsi = gram_matrix(kernel, Xpsi)
    reference = ukp(Kphi, Kpsi, lam).squared

    errors = np.empty((repeats, len(grid)))
    for g, n in enumerate(grid):
        for r in range(repeats):
            idx = np.sort(make_rng(seed, 1, g, r).choice(n_ref, size=n, replace=False))
            sub = np.ix_(idx, idx)
            errors[r, g] = abs(ukp(Kphi[sub], Kpsi[sub], lam).squared - reference)

    med = np.median(errors, axis=0)
    positive = med > 0
    if positive.sum() >= 2:
        slope, intercept = np.polyfit(np.log(np.asarray(grid)[positive]), np.log(med[positive]), 1)
    else:
        slope = intercept = float("nan")
    kappa = _kernel_bound(kernel, Xphi, Xpsi)
    envelope = concentration_bound(np.asarray(grid), kappa, lam, delta)
    return ConvergenceReport(grid, int(n_ref), float(reference), errors, med,
                             float(slope), float(intercept), kappa, delta, envelope)
