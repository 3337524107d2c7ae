"""Agglomerative clustering over a precomputed distance matrix.

Merges are recorded in the usual linkage encoding: leaves are ``0..m-1``,
the cluster created by merge ``t`` gets id ``m + t``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DimensionError
from .distances import DistanceMatrix


class Linkage(str, enum.Enum):
    AVERAGE = "average"
    SINGLE = "single"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int

    def to_dict(self) -> dict:
        return {"left": self.left, "right": self.right, "height": self.height, "size": self.size}


@dataclass
class Dendrogram:
    labels: list[str]
    merges: list[Merge]
    linkage: Linkage

    @property
    def m(self) -> int:
        return len(self.labels)

    def members(self, node: int) -> list[int]:
        if node < self.m:
            return [node]
        mg = self.merges[node - self.m]
        return sorted(self.members(mg.left) + self.members(mg.right))

    def leaves(self) -> list[int]:
        return self.members(2 * self.m - 2) if self.merges else list(range(self.m))

    def cut(self, n_clusters: int) -> np.ndarray:
        """Flat assignment into ``n_clusters`` groups by undoing the last merges.

        Cluster ids are numbered by the smallest leaf they contain.
        """
        m = self.m
        if not 1 <= n_clusters <= m:
            raise ConfigError(f"n_clusters must be in [1, {m}], got {n_clusters}")
        roots = set(range(m))
        for t, mg in enumerate(self.merges[: m - n_clusters]):
            roots -= {mg.left, mg.right}
            roots.add(m + t)
        groups = sorted((self.members(r) for r in roots), key=min)
        out = np.empty(m, dtype=int)
        for cid, g in enumerate(groups):
            out[g] = cid
        return out


def _lance_williams(linkage: Linkage, da: float, db: float, na: int, nb: int) -> float:
    if linkage is Linkage.AVERAGE:
        return (na * da + nb * db) / (na + nb)
    if linkage is Linkage.SINGLE:
        return min(da, db)
    return max(da, db)


def agglomerate(dist: DistanceMatrix | np.ndarray, linkage: Linkage | str = Linkage.AVERAGE,
                labels: list[str] | None = None) -> Dendrogram:
    """Bottom-up clustering with Lance-Williams updates.

    Ties in merge distance go to the pair whose smallest leaf indices are
    lowest, which makes the result deterministic.
    """
    try:
        linkage = Linkage(linkage)
    except ValueError:
        raise ConfigError(f"unknown linkage {linkage!r}") from None
    if isinstance(dist, DistanceMatrix):
        values, names = dist.values, list(dist.labels)
    else:
        values = np.asarray(dist, dtype=np.float64)
        names = list(labels) if labels is not None else [str(i) for i in range(values.shape[0])]
    m = values.shape[0]
    if values.ndim != 2 or values.shape != (m, m) or m < 2:
        raise DimensionError(f"need a square distance matrix with m >= 2, got {values.shape}")
    if len(names) != m:
        raise DimensionError("one label per row of the distance matrix is required")
    if not np.all(np.isfinite(values)) or np.max(np.abs(values - values.T)) > 1e-12:
        raise DimensionError("distance matrix must be finite and symmetric")

    total = 2 * m - 1
    D = np.full((total, total), np.inf)
    D[:m, :m] = values
    size = [1] * m + [0] * (m - 1)
    low = list(range(m)) + [0] * (m - 1)
    active = list(range(m))
    merges: list[Merge] = []

    for t in range(m - 1):
        best = None
        for ai, a in enumerate(active):
            for b in active[ai + 1:]:
                lo, hi = sorted((low[a], low[b]))
                key = (D[a, b], lo, hi)
                if best is None or key < best[0]:
                    best = (key, a, b)
        (height, _, _), a, b = best
        if low[a] > low[b]:
            a, b = b, a
        new = m + t
        size[new] = size[a] + size[b]
        low[new] = low[a]
        active = [c for c in active if c not in (a, b)]
        for c in active:
            D[new, c] = D[c, new] = _lance_williams(linkage, D[a, c], D[b, c], size[a], size[b])
        active.append(new)
        merges.append(Merge(a, b, float(height), size[new]))

    return Dendrogram(names, merges, linkage)
