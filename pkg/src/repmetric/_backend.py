"""Selection between the numba-compiled and the pure-numpy hot kernels.

The numba path is used when numba imports cleanly and the environment
variable ``REPMETRIC_DISABLE_NUMBA`` is unset (or set to ``0``/``false``).
Both paths expose the same functions with the same results up to rounding.
"""
from __future__ import annotations

import contextlib
import os
from types import ModuleType

from . import _numpy_kernels

_FALSY = {"", "0", "false", "no", "off"}


def _numba_requested() -> bool:
    return os.environ.get("REPMETRIC_DISABLE_NUMBA", "").strip().lower() in _FALSY


def _load_numba() -> ModuleType | None:
    try:
        from . import _numba_kernels
    except ImportError:
        return None
    return _numba_kernels


_numba_module = _load_numba() if _numba_requested() else None
_active: ModuleType = _numba_module if _numba_module is not None else _numpy_kernels


def available() -> list[str]:
    names = ["numpy"]
    if _numba_module is not None or _load_numba() is not None:
        names.insert(0, "numba")
    return names


def get(name: str | None = None) -> ModuleType:
    """Return the kernel module called ``name``, or the active one."""
    if name is None:
        return _active
    if name == "numpy":
        return _numpy_kernels
    if name == "numba":
        mod = _numba_module or _load_numba()
        if mod is None:
            raise ImportError("numba backend requested but numba is not importable")
        return mod
    raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")


def active_name() -> str:
    return "numba" if _active is not _numpy_kernels else "numpy"


def set_backend(name: str) -> None:
    global _active
    _active = get(name)


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily switch the active backend (not thread-safe)."""
    global _active
    previous = _active
    _active = get(name)
    try:
        yield _active
    finally:
        _active = previous
