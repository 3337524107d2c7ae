from __future__ import annotations

import numpy as np

from .errors import ConfigError

UINT64_MAX = (1 << 64) - 1


def check_seed(seed) -> int:
    try:
        s = int(seed)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}") from None
    if s < 0 or s > UINT64_MAX:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return s


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for ``seed`` and a stream index path.

    Sub-streams (task, repeat, ...) are derived by hashing the key path, so
    draws never depend on the order in which streams are consumed.
    """
    key = [check_seed(seed), *(int(s) for s in stream)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))
