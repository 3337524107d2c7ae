"""Synthetic kernel-ridge-regression probes of generalization agreement.

For each task a standard-normal label is drawn on the training points, every
representation fits its own kernel ridge regressor, and the disagreement
between two representations is the mean squared difference of their
predictions on held-out points. The probe reports how well each metric's
pairwise distances rank-correlate with those disagreements.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.stats

from .._rng import check_seed, make_rng
from ..errors import ConfigError, DimensionError, NumericError, UndefinedCorrelationError
from ..kernels import KernelSpec, as_gram, cross_gram, gram_matrix
from ..metrics import MetricConfig
from ..spectral import _check_lambda
from .distances import _labels_and_data, pairwise_distances


@dataclass(frozen=True)
class KRRPredictor:
    alpha: np.ndarray
    lam: float

    def predict(self, K_cross) -> np.ndarray:
        K_cross = np.asarray(K_cross, dtype=np.float64)
        if K_cross.ndim != 2 or K_cross.shape[1] != self.alpha.shape[0]:
            raise DimensionError(
                f"cross Gram must have {self.alpha.shape[0]} columns, got shape {K_cross.shape}"
            )
        return K_cross @ self.alpha


def _ridge_factor(K: np.ndarray, lam: float):
    n = K.shape[0]
    try:
        return scipy.linalg.cho_factor(K + n * lam * np.eye(n), lower=True, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"ridge system is not positive definite: {exc}") from exc


def fit_krr(K_train, y, lam: float) -> KRRPredictor:
    """Dual coefficients ``(K + n*lam*I)^{-1} y``."""
    K = as_gram(K_train, "K_train")
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != K.shape[0]:
        raise DimensionError(f"y has {y.shape[0]} entries, K_train is {K.shape[0]} x {K.shape[0]}")
    lam = _check_lambda(lam)
    alpha = scipy.linalg.cho_solve(_ridge_factor(K, lam), y, check_finite=False)
    if not np.all(np.isfinite(alpha)):
        raise NumericError("kernel ridge coefficients are not finite")
    return KRRPredictor(alpha, lam)


def krr_predict(K_train, y, lam: float, K_cross) -> np.ndarray:
    return fit_krr(K_train, y, lam).predict(K_cross)


def spearman(x, y) -> float:
    """Spearman's rho: Pearson correlation of average ranks."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise DimensionError("spearman needs at least two observations")
    rx = scipy.stats.rankdata(x) - (x.size + 1) / 2.0
    ry = scipy.stats.rankdata(y) - (y.size + 1) / 2.0
    sx = np.sqrt(rx @ rx)
    sy = np.sqrt(ry @ ry)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("rank correlation is undefined for a constant input")
    return float(np.clip((rx @ ry) / (sx * sy), -1.0, 1.0))


@dataclass
class MetricCorrelation:
    config: MetricConfig
    rho: float | None
    rho_per_task: list[float | None]
    undefined: bool
    distances: np.ndarray

    def to_dict(self) -> dict:
        return {
            "metric": self.config.to_dict(),
            "rho": self.rho,
            "rho_per_task": self.rho_per_task,
            "undefined": self.undefined,
        }


@dataclass
class ProbeReport:
    labels: list[str]
    n_train: int
    n_test: int
    tasks: int
    lam: float
    kernel: KernelSpec
    seed: int
    errors: np.ndarray
    correlations: list[MetricCorrelation] = field(default_factory=list)

    def rho(self, metric: str) -> float | None:
        for c in self.correlations:
            if c.config.metric.value == metric:
                return c.rho
        raise KeyError(metric)

    def to_dict(self) -> dict:
        return {
            "labels": self.labels,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "tasks": self.tasks,
            "lambda": self.lam,
            **self.kernel.to_dict(),
            "seed": self.seed,
            "mean_err": self.errors.tolist(),
            "correlations": [c.to_dict() for c in self.correlations],
        }


def probe_generalization(reps, tasks: int, lam: float, kernel: KernelSpec,
                         metrics: list[MetricConfig], seed: int,
                         n_train: int | None = None) -> ProbeReport:
    """Correlate metric distances with KRR prediction disagreement.

    One train/test split is drawn from ``seed`` and shared by all tasks; the
    metrics are evaluated on the training rows. Per task, ``rho`` is the
    Spearman correlation between the pairwise prediction disagreements and
    the metric's distances; the reported value is the mean over tasks, or
    ``None`` with ``undefined=True`` when any task gives a constant vector.
    """
    labels, data = _labels_and_data(reps)
    m = len(data)
    if m < 3:
        raise DimensionError("the probe needs at least three representations")
    if int(tasks) < 1:
        raise ConfigError("tasks must be >= 1")
    tasks = int(tasks)
    lam = _check_lambda(lam)
    seed = check_seed(seed)
    N = data[0].shape[0]
    if any(X.shape[0] != N for X in data):
        raise DimensionError("all representations must share the sample count")
    if n_train is None:
        n_train = int(round(0.6 * N))
    if not 1 <= n_train < N:
        raise ConfigError(f"n_train must be in [1, {N - 1}], got {n_train}")

    perm = make_rng(seed, 0).permutation(N)
    train = np.sort(perm[:n_train])
    test = np.sort(perm[n_train:])

    Y = np.column_stack([make_rng(seed, 1, t).standard_normal(n_train) for t in range(tasks)])
    preds = []
    for X in data:
        Xtr, Xte = X[train], X[test]
        factor = _ridge_factor(gram_matrix(kernel, Xtr), lam)
        alpha = scipy.linalg.cho_solve(factor, Y, check_finite=False)
        preds.append(cross_gram(kernel, Xte, Xtr) @ alpha)

    iu = np.triu_indices(m, 1)
    err = np.zeros((tasks, m, m))
    for i in range(m):
        for j in range(i + 1, m):
            e = np.mean((preds[i] - preds[j]) ** 2, axis=0)
            err[:, i, j] = e
            err[:, j, i] = e

    train_reps = [X[train] for X in data]
    correlations = []
    for cfg in metrics:
        dm = pairwise_distances(train_reps, cfg, labels=labels)
        dvec = dm.upper()
        per_task: list[float | None] = []
        for t in range(tasks):
            try:
                per_task.append(spearman(err[t][iu], dvec))
            except UndefinedCorrelationError:
                per_task.append(None)
        undefined = any(r is None for r in per_task)
        rho = None if undefined else float(np.mean(per_task))
        correlations.append(MetricCorrelation(cfg, rho, per_task, undefined, dm.values))

    return ProbeReport(labels, n_train, N - n_train, tasks, lam, kernel, seed,
                       err.mean(axis=0), correlations)
