"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Set ``CASCADE_GRID_BACKEND=python`` to force the
fallback. Callers look up ``_backend.kernels`` at call time, so
:func:`use_backend` switches every module at once.
"""

import os
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    _AVAILABLE["cython"] = _ckernels


def _initial():
    forced = os.environ.get("CASCADE_GRID_BACKEND", "").strip().lower()
    if forced:
        if forced not in _AVAILABLE:
            raise ImportError(f"requested kernel backend {forced!r} is not available")
        return forced
    return "cython" if "cython" in _AVAILABLE else "python"


BACKEND = _initial()
kernels = _AVAILABLE[BACKEND]


def available_backends():
    return sorted(_AVAILABLE)


def set_backend(name):
    global BACKEND, kernels
    if name not in _AVAILABLE:
        raise ValueError(f"unknown or unbuilt backend {name!r}; have {available_backends()}")
    BACKEND = name
    kernels = _AVAILABLE[name]


@contextmanager
def use_backend(name):
    previous = BACKEND
    set_backend(name)
    try:
        yield _AVAILABLE[name]
    finally:
        set_backend(previous)
