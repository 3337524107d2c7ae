from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..approx import ApproxConfig, build_factor, ukp_lowrank
from ..errors import ConfigError, DimensionError
from ..kernels import Representation, as_matrix, gram_matrix
from ..metrics import (
    Metric,
    MetricConfig,
    _centered_nonzero,
    _projector_basis,
    cka_from_centered,
    gulp_primal,
    ukp_from_hats,
)
from ..spectral import hat_from_eig, sym_eig, trace_product


@dataclass
class DistanceMatrix:
    labels: list[str]
    values: np.ndarray
    config: MetricConfig

    @property
    def m(self) -> int:
        return len(self.labels)

    def upper(self) -> np.ndarray:
        """Strict upper triangle in row-major order."""
        return self.values[np.triu_indices(self.m, 1)]


def _labels_and_data(reps) -> tuple[list[str], list[np.ndarray]]:
    labels, data = [], []
    for i, r in enumerate(reps):
        if isinstance(r, Representation):
            labels.append(r.label or f"rep{i}")
            data.append(r.data)
        else:
            labels.append(f"rep{i}")
            data.append(as_matrix(r, f"reps[{i}]"))
    return labels, data


def _normalized_similarity_distance(S: np.ndarray) -> np.ndarray:
    d = np.sqrt(np.diag(S))
    with np.errstate(invalid="ignore", divide="ignore"):
        D = 1.0 - S / np.outer(d, d)
    return np.clip(np.nan_to_num(D, nan=1.0), 0.0, None)


def pairwise_distances(reps, config: MetricConfig, approx: ApproxConfig | None = None,
                       labels: list[str] | None = None) -> DistanceMatrix:
    """All pairwise distances between representations of the same ``n`` inputs.

    UKP and GULP are reported as-is. The similarity measures are turned into
    distances through their normalized form ``1 - s(a, b) / sqrt(s(a, a) s(b, b))``
    (for CKA this is ``1 - CKA``). Per-representation work (Gram matrix,
    eigendecomposition, smoother) is done once.
    """
    names, data = _labels_and_data(reps)
    if labels is not None:
        if len(labels) != len(data):
            raise DimensionError("one label per representation is required")
        names = list(labels)
    m = len(data)
    if m < 2:
        raise DimensionError("need at least two representations")
    n = data[0].shape[0]
    for i, X in enumerate(data):
        if X.shape[0] != n:
            raise DimensionError(f"representation {names[i]!r} has {X.shape[0]} samples, expected {n}")
    metric = config.metric
    if approx is not None and metric is not Metric.UKP:
        raise ConfigError("low-rank approximation is only available for the UKP metric")

    D = np.zeros((m, m))
    iu = [(i, j) for i in range(m) for j in range(i + 1, m)]

    if metric is Metric.UKP:
        if approx is not None:
            factors = [build_factor(config.kernel, X, approx) for X in data]
            for i, j in iu:
                D[i, j] = ukp_lowrank(factors[i], factors[j], config.lam).value
        else:
            hats = [hat_from_eig(sym_eig(gram_matrix(config.kernel, X)), config.lam) for X in data]
            for i, j in iu:
                D[i, j] = ukp_from_hats(hats[i], hats[j]).value
    elif metric is Metric.GULP:
        for i, j in iu:
            D[i, j] = gulp_primal(data[i], data[j], config.lam).value
    else:
        S = np.zeros((m, m))
        if metric is Metric.RCCA:
            mats = [hat_from_eig(sym_eig(gram_matrix(config.kernel, X)), config.lam) for X in data]
            sim = trace_product
        elif metric is Metric.CKA:
            mats = [_centered_nonzero(gram_matrix(config.kernel, X), names[k]) for k, X in enumerate(data)]
            sim = trace_product
        else:
            mats = [_projector_basis(X) for X in data]

            def sim(a, b):
                C = a.T @ b
                return float(np.sum(C * C))

        for i in range(m):
            S[i, i] = sim(mats[i], mats[i])
        for i, j in iu:
            S[i, j] = S[j, i] = sim(mats[i], mats[j])
        if metric is Metric.CKA:
            for i, j in iu:
                D[i, j] = max(0.0, 1.0 - cka_from_centered(mats[i], mats[j]))
        else:
            N = _normalized_similarity_distance(S)
            for i, j in iu:
                D[i, j] = N[i, j]

    D = D + D.T
    np.fill_diagonal(D, 0.0)
    return DistanceMatrix(names, D, config)
