"""numba-compiled hot kernels; same contract as ``_numpy_kernels``.

Every output entry is computed independently inside ``prange`` so results
do not depend on the thread count.
"""
from __future__ import annotations

import os

import numba
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the TBB probe, which warns on older system TBB installs
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(parallel=True, cache=True)
def _sq_gram(X):
    n, k = X.shape
    out = np.zeros((n, n))
    for i in prange(n):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(k):
                d = X[i, c] - X[j, c]
                s += d * d
            out[i, j] = s
            out[j, i] = s
    return out


@njit(parallel=True, cache=True)
def _l1_gram(X):
    n, k = X.shape
    out = np.zeros((n, n))
    for i in prange(n):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(k):
                s += abs(X[i, c] - X[j, c])
            out[i, j] = s
            out[j, i] = s
    return out


@njit(parallel=True, cache=True)
def _sq_cross(X, Y):
    n, k = X.shape
    m = Y.shape[0]
    out = np.empty((n, m))
    for i in prange(n):
        for j in range(m):
            s = 0.0
            for c in range(k):
                d = X[i, c] - Y[j, c]
                s += d * d
            out[i, j] = s
    return out


@njit(parallel=True, cache=True)
def _l1_cross(X, Y):
    n, k = X.shape
    m = Y.shape[0]
    out = np.empty((n, m))
    for i in prange(n):
        for j in range(m):
            s = 0.0
            for c in range(k):
                s += abs(X[i, c] - Y[j, c])
            out[i, j] = s
    return out


@njit(parallel=True, cache=True)
def _trace_rows(A, B):
    n = A.shape[0]
    rows = np.empty(n)
    for i in prange(n):
        s = 0.0
        for j in range(n):
            s += A[i, j] * B[j, i]
        rows[i] = s
    return rows


@njit(cache=True)
def _ordered_sum(v):
    total = 0.0
    for x in v:
        total += x
    return total


def _f64(X: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(X, dtype=np.float64)


def sqeuclidean_gram(X: np.ndarray) -> np.ndarray:
    return _sq_gram(_f64(X))


def cityblock_gram(X: np.ndarray) -> np.ndarray:
    return _l1_gram(_f64(X))


def sqeuclidean_cross(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return _sq_cross(_f64(X), _f64(Y))


def cityblock_cross(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return _l1_cross(_f64(X), _f64(Y))


def trace_product(A: np.ndarray, B: np.ndarray) -> float:
    return float(_ordered_sum(_trace_rows(_f64(A), _f64(B))))
