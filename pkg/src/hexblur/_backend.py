"""Kernel backend selection and sparse-key plumbing.

The compiled extension is preferred when importable; set
``HEXBLUR_BACKEND=python`` or ``HEXBLUR_BACKEND=compiled`` to force a
choice (forcing an unavailable backend raises at import).

Bins are addressed by packed 64-bit keys ``(q + 2^20) * 2^21 + (r + 2^20)``,
which sort in (q, r) lexicographic order and turn axial offsets into plain
integer deltas. Coordinates must stay within |q|, |r| < 2^20.
"""

from __future__ import annotations

import os

import numpy as np

_COORD_LIMIT = 1 << 20
_KEY_STRIDE = 1 << 21

_choice = os.environ.get("HEXBLUR_BACKEND", "auto").strip().lower()
if _choice in ("", "auto"):
    try:
        from . import _kernels as _impl
        BACKEND_NAME = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND_NAME = "python"
elif _choice in ("compiled", "c"):
    from . import _kernels as _impl
    BACKEND_NAME = "compiled"
elif _choice in ("python", "py"):
    from . import _kernels_py as _impl
    BACKEND_NAME = "python"
else:
    raise ValueError(f"unknown HEXBLUR_BACKEND value: {_choice!r}")

assign_points = _impl.assign_points
gather_convolve = _impl.gather_convolve


def pack_keys(q, r):
    """Pack integer axial coordinates into sortable int64 keys."""
    q = np.asarray(q, dtype=np.int64)
    r = np.asarray(r, dtype=np.int64)
    if np.any(np.abs(q) >= _COORD_LIMIT) or np.any(np.abs(r) >= _COORD_LIMIT):
        raise ValueError(f"axial coordinates exceed +/-{_COORD_LIMIT - 1}")
    return (q + _COORD_LIMIT) * _KEY_STRIDE + (r + _COORD_LIMIT)


def unpack_keys(keys):
    """Inverse of :func:`pack_keys`."""
    keys = np.asarray(keys, dtype=np.int64)
    q = keys // _KEY_STRIDE - _COORD_LIMIT
    r = keys % _KEY_STRIDE - _COORD_LIMIT
    return q, r


def pack_offsets(dq, dr):
    """Key deltas for axial offsets: adding one shifts a packed key."""
    dq = np.asarray(dq, dtype=np.int64)
    dr = np.asarray(dr, dtype=np.int64)
    return dq * _KEY_STRIDE + dr


def dilate_keys(src_keys, off_keys):
    """Sorted unique keys reachable as src + offset (stencil support).

    Processes offsets in blocks to bound the transient ``n_src * n_off``
    allocation on large grids.
    """
    n_src = src_keys.shape[0]
    if n_src == 0 or off_keys.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    block = max(1, int(8_000_000 // max(n_src, 1)))
    cand = None
    for i in range(0, off_keys.shape[0], block):
        part = np.unique(src_keys[:, None] + off_keys[None, i:i + block])
        cand = part if cand is None else np.union1d(cand, part)
    return cand
