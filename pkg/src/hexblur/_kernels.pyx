# cython: language_level=3
"""Compiled hot kernels: point-to-bin assignment and sparse gather convolution.

Mirrors hexblur._kernels_py operation-for-operation; the build disables
fp contraction so results stay bit-identical with the NumPy fallback.
"""

from libc.math cimport fabs, rint, sqrt

import numpy as np


cdef double C_Q = 2.0 / 3.0
cdef double C_RX = -1.0 / 3.0
cdef double C_RY = -1.0 / sqrt(3.0)


def assign_points(u, v):
    """Map normalized Cartesian points to axial bin indices (cube rounding)."""
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0]
    q_out = np.empty(n, dtype=np.int64)
    r_out = np.empty(n, dtype=np.int64)
    cdef long long[::1] qo = q_out
    cdef long long[::1] ro = r_out
    cdef Py_ssize_t i
    cdef double qf, rf, sf, rq, rr, rs, dq, dr, ds
    with nogil:
        for i in range(n):
            qf = uu[i] * C_Q
            rf = uu[i] * C_RX + vv[i] * C_RY
            sf = -qf - rf
            rq = rint(qf)
            rr = rint(rf)
            rs = rint(sf)
            dq = fabs(rq - qf)
            dr = fabs(rr - rf)
            ds = fabs(rs - sf)
            if dq >= dr and dq >= ds:
                rq = -rr - rs
            elif dr >= ds:
                rr = -rq - rs
            qo[i] = <long long>rq
            ro[i] = <long long>rr
    return q_out, r_out


def gather_convolve(cand_keys, src_keys, src_vals, off_keys, off_weights):
    """Blurred value per candidate bin; see the fallback for the contract.

    Offset-major merge walk: cand_keys is sorted, so for a fixed offset the
    lookup targets ascend and a single cursor sweeps src_keys. Per
    candidate, offsets still accumulate in ascending order, matching the
    fallback bit for bit.
    """
    cdef long long[::1] cand = np.ascontiguousarray(cand_keys, dtype=np.int64)
    cdef long long[::1] keys = np.ascontiguousarray(src_keys, dtype=np.int64)
    cdef double[::1] vals = np.ascontiguousarray(src_vals, dtype=np.float64)
    cdef long long[::1] offs = np.ascontiguousarray(off_keys, dtype=np.int64)
    cdef double[::1] ws = np.ascontiguousarray(off_weights, dtype=np.float64)
    cdef Py_ssize_t m = cand.shape[0]
    cdef Py_ssize_t b = keys.shape[0]
    cdef Py_ssize_t s = offs.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] oo = out
    cdef Py_ssize_t i, j, p, lo, hi, mid
    cdef long long k, off
    cdef double w
    if b == 0 or m == 0:
        return out
    with nogil:
        for i in range(s):
            off = offs[i]
            w = ws[i]
            k = cand[0] - off
            lo = 0
            hi = b
            while lo < hi:
                mid = (lo + hi) >> 1
                if keys[mid] < k:
                    lo = mid + 1
                else:
                    hi = mid
            p = lo
            for j in range(m):
                k = cand[j] - off
                while p < b and keys[p] < k:
                    p += 1
                if p == b:
                    break
                if keys[p] == k:
                    oo[j] = oo[j] + w * vals[p]
    return out
