"""NumPy implementations of the hot kernels.

Drop-in fallback for the compiled ``hexblur._kernels`` extension. Both
backends evaluate the same floating-point operations in the same order
(multiplies before adds, accumulation in stencil order, rint rounding),
so their outputs are bit-identical; tests assert this.
"""

from __future__ import annotations

import math

import numpy as np

_C_Q = 2.0 / 3.0
_C_RX = -1.0 / 3.0
_C_RY = -1.0 / math.sqrt(3.0)


def assign_points(u, v):
    """Map normalized Cartesian points to axial bin indices.

    Inverts the axial center transform to fractional (q, r), extends to
    cube coordinates and rounds, repairing the component with the largest
    rounding error (ties repair q, then r, then s).
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    v = np.ascontiguousarray(v, dtype=np.float64)
    qf = u * _C_Q
    rf = u * _C_RX + v * _C_RY
    sf = -qf - rf
    rq = np.rint(qf)
    rr = np.rint(rf)
    rs = np.rint(sf)
    dq = np.abs(rq - qf)
    dr = np.abs(rr - rf)
    ds = np.abs(rs - sf)
    fix_q = (dq >= dr) & (dq >= ds)
    fix_r = ~fix_q & (dr >= ds)
    rq = np.where(fix_q, -rr - rs, rq)
    rr = np.where(fix_r, -rq - rs, rr)
    return rq.astype(np.int64), rr.astype(np.int64)


def gather_convolve(cand_keys, src_keys, src_vals, off_keys, off_weights):
    """Blurred value for each candidate bin.

    ``out[j] = sum_i off_weights[i] * value(cand_keys[j] - off_keys[i])``
    with missing source bins contributing zero. ``src_keys`` must be
    sorted ascending. Accumulation runs in stencil order for every
    candidate independently, so the result does not depend on how callers
    partition the candidate array.
    """
    cand_keys = np.ascontiguousarray(cand_keys, dtype=np.int64)
    out = np.zeros(cand_keys.shape[0], dtype=np.float64)
    n_src = src_keys.shape[0]
    if n_src == 0:
        return out
    for i in range(off_keys.shape[0]):
        tgt = cand_keys - off_keys[i]
        pos = np.searchsorted(src_keys, tgt)
        pos_c = np.minimum(pos, n_src - 1)
        hit = src_keys[pos_c] == tgt
        out += np.where(hit, src_vals[pos_c] * off_weights[i], 0.0)
    return out
