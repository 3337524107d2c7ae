"""Pure-numpy reference versions of the hot kernels.

Pairwise distances are formed from explicit coordinate differences (not the
``|x|^2 + |y|^2 - 2 x.y`` expansion) so that radial Grams stay exactly
translation invariant up to rounding of the differences themselves.
Rows are processed in blocks to bound the ``(b, n, k)`` temporary.
"""
from __future__ import annotations

import numpy as np

_BLOCK_BYTES = 1 << 26


def _block_rows(n_other: int, k: int) -> int:
    return max(1, _BLOCK_BYTES // (8 * max(1, n_other) * max(1, k)))


def _cross(X: np.ndarray, Y: np.ndarray, l1: bool) -> np.ndarray:
    n, k = X.shape
    out = np.empty((n, Y.shape[0]), dtype=np.float64)
    step = _block_rows(Y.shape[0], k)
    for start in range(0, n, step):
        diff = X[start:start + step, None, :] - Y[None, :, :]
        if l1:
            np.abs(diff, out=diff)
        else:
            np.square(diff, out=diff)
        out[start:start + step] = diff.sum(axis=2)
    return out


def _mirror_upper(D: np.ndarray) -> np.ndarray:
    upper = np.triu(D, 1)
    return upper + upper.T


def sqeuclidean_gram(X: np.ndarray) -> np.ndarray:
    return _mirror_upper(_cross(X, X, l1=False))


def cityblock_gram(X: np.ndarray) -> np.ndarray:
    return _mirror_upper(_cross(X, X, l1=True))


def sqeuclidean_cross(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return _cross(X, Y, l1=False)


def cityblock_cross(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return _cross(X, Y, l1=True)


def trace_product(A: np.ndarray, B: np.ndarray) -> float:
    # row sums first, then a sequential total: the same association as the
    # compiled kernel, so Tr(AB) and Tr(BA) agree bitwise for symmetric inputs
    rows = np.multiply(A, B.T, order="C").sum(axis=1)
    total = 0.0
    for r in rows.tolist():
        total += r
    return total
