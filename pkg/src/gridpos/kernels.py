"""Kernel backend selection.

The compiled extension (gridpos._speedups) is preferred when importable;
otherwise the pure-Python twin (gridpos._kernels_py) is used.  Set
GRIDPOS_PURE=1 to force the pure backend.  Both expose the same four
functions with identical results and overflow behaviour; shapes beyond the
compiled kernels' fixed buffers fall back to the pure twin transparently.
"""

from __future__ import annotations

import os

from . import _kernels_py

_COMPILED_MAX_M = 12
_COMPILED_MAX_D = 12

_speedups = None
if os.environ.get("GRIDPOS_PURE", "").strip() in ("", "0"):
    try:
        from . import _speedups as _speedups  # type: ignore[no-redef]
    except ImportError:
        _speedups = None

_impl = _speedups if _speedups is not None else _kernels_py

BACKEND = "compiled" if _speedups is not None else "python"


def available_backends() -> dict:
    """Name -> module for every importable backend (used by the benchmark)."""
    out = {"python": _kernels_py}
    if _speedups is not None:
        out["compiled"] = _speedups
    return out


def _fits_compiled(size: int, dim: int) -> bool:
    return size <= _COMPILED_MAX_M and dim <= _COMPILED_MAX_D


def census_scan(pts_array, k, lo, hi, collect):
    mod = _impl if _fits_compiled(k + 2, pts_array.shape[1]) else _kernels_py
    return mod.census_scan(pts_array, k, lo, hi, collect)


def count_low_rank(pts_array, size, rmax, lo, hi):
    mod = _impl if _fits_compiled(size, pts_array.shape[1]) else _kernels_py
    return mod.count_low_rank(pts_array, size, rmax, lo, hi)


def collect_low_rank(pts_array, size, rmax):
    mod = _impl if _fits_compiled(size, pts_array.shape[1]) else _kernels_py
    return mod.collect_low_rank(pts_array, size, rmax)


def find_low_rank(pts_array, size, rmax):
    mod = _impl if _fits_compiled(size, pts_array.shape[1]) else _kernels_py
    return mod.find_low_rank(pts_array, size, rmax)
