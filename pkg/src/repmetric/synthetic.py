"""Seeded synthetic representations for experiments and self-checks."""
from __future__ import annotations

import numpy as np

from ._rng import make_rng
from .kernels import Representation


def _unit_scale(Z: np.ndarray) -> np.ndarray:
    # mean squared row norm 1, so one bandwidth suits every representation
    Z = Z - Z.mean(axis=0)
    s = np.sqrt(np.mean(np.sum(Z * Z, axis=1)))
    return Z / s if s > 0 else Z


def gaussian_inputs(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, d))


def linear_map_pair(d: int, k: int, l: int, seed: int):
    """Sampler of ``(X A, X B)`` for fixed random maps and fresh Gaussian ``X``."""
    rng = make_rng(seed, 99)
    A = rng.standard_normal((d, k)) / np.sqrt(d)
    B = rng.standard_normal((d, l)) / np.sqrt(d)

    def sample(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        X = gaussian_inputs(n, d, rng)
        return X @ A, X @ B

    return sample


def random_feature_representations(X: np.ndarray, widths: list[int], seed: int,
                                   scales: list[float] | None = None) -> list[Representation]:
    """Two-layer random ReLU networks ``relu(relu(X W1 s) W2)``, one per width.

    ``scales`` multiplies the first-layer weights and controls how
    nonlinear each representation is.
    """
    d = X.shape[1]
    if scales is None:
        scales = [1.0] * len(widths)
    reps = []
    for i, (w, s) in enumerate(zip(widths, scales)):
        rng = make_rng(seed, 1, i)
        W1 = rng.standard_normal((d, w)) * (s / np.sqrt(d))
        W2 = rng.standard_normal((w, w)) / np.sqrt(w)
        H = np.maximum(X @ W1, 0.0)
        Z = np.maximum(H @ W2, 0.0)
        reps.append(Representation(_unit_scale(Z), f"rf{i}_w{w}_s{s:g}"))
    return reps


def representation_families(X: np.ndarray, per_family: int, seed: int,
                            width: int = 256) -> list[Representation]:
    """Three families of maps of the same inputs.

    ``linear``: ``X A``; ``rbf``: ``exp(-|x - c_j|^2 / d)`` against random
    centres; ``sign``: ``sign(X A)``. Each representation is centred and
    scaled to unit mean squared norm.
    """
    n, d = X.shape
    reps = []
    for f, family in enumerate(("linear", "rbf", "sign")):
        for i in range(per_family):
            rng = make_rng(seed, 2, f, i)
            if family == "linear":
                Z = X @ rng.standard_normal((d, width))
            elif family == "rbf":
                C = rng.standard_normal((width, d))
                sq = np.sum(X * X, axis=1)[:, None] + np.sum(C * C, axis=1)[None, :] - 2.0 * X @ C.T
                Z = np.exp(-np.maximum(sq, 0.0) / d)
            else:
                Z = np.sign(X @ rng.standard_normal((d, width)))
            reps.append(Representation(_unit_scale(Z), f"{family}{i}", {"family": family}))
    return reps
