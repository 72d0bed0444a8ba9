"""Backend selection for the hot kernels.

The compiled extension is used when it is importable; setting the
environment variable ``XBICORR_BACKEND=python`` forces the numpy fallback.
"""
import importlib
import os

from . import _pykernels

_PURE_NAMES = {"python", "numpy", "pure"}


def get_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name in _PURE_NAMES:
        return _pykernels
    if name == "cython":
        return importlib.import_module("xbicorr._kernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        get_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("XBICORR_BACKEND", "").lower() in _PURE_NAMES:
    _impl = _pykernels
else:
    try:
        _impl = get_backend("cython")
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"
bds_counts = _impl.bds_counts
window_lag_stats = _impl.window_lag_stats
