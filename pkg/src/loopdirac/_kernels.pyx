# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled graded character convolution.

Same contract as ``_kernels_py.graded_convolve``: entries keyed by
(energy, parity, *coords) with integer multiplicities, truncated at a total
energy cap.  Keys are packed into 64-bit integers with a mixed radix derived
from the coordinate ranges, and accumulated in a C++ hash map.
"""

import numpy as np

cimport numpy as cnp
from cython.operator cimport dereference as deref, preincrement as inc
from libcpp.unordered_map cimport unordered_map

COMPILED = True


def graded_convolve(items_a, items_b, long cap):
    items_a = list(items_a)
    items_b = list(items_b)
    if not items_a or not items_b:
        return {}
    rank = len(items_a[0][0]) - 2

    a_keys = np.array([k for k, _ in items_a], dtype=np.int64)
    a_mult = np.array([m for _, m in items_a], dtype=np.int64)
    b_keys = np.array([k for k, _ in items_b], dtype=np.int64)
    b_mult = np.array([m for _, m in items_b], dtype=np.int64)

    lo = a_keys.min(axis=0) + b_keys.min(axis=0)
    hi = a_keys.max(axis=0) + b_keys.max(axis=0)
    lo[1], hi[1] = 0, 1  # parity axis holds the xor, not the sum
    span = (hi - lo + 1).astype(np.int64)
    radix = np.ones(rank + 2, dtype=np.int64)
    for i in range(rank, -1, -1):
        radix[i] = radix[i + 1] * span[i + 1]
    if int(radix[0]) * int(span[0]) >= (1 << 62):
        raise OverflowError("key space too large to pack into 64 bits")

    order = np.argsort(b_keys[:, 0], kind="stable")
    b_keys = b_keys[order]
    b_mult = b_mult[order]

    cdef cnp.int64_t[:, ::1] ak = np.ascontiguousarray(a_keys)
    cdef cnp.int64_t[::1] am = np.ascontiguousarray(a_mult)
    cdef cnp.int64_t[:, ::1] bk = np.ascontiguousarray(b_keys)
    cdef cnp.int64_t[::1] bm = np.ascontiguousarray(b_mult)
    cdef cnp.int64_t[::1] lo_v = np.ascontiguousarray(lo)
    cdef cnp.int64_t[::1] rad = np.ascontiguousarray(radix)

    cdef unordered_map[long long, long long] acc
    cdef Py_ssize_t ia, ib, j, na, nb
    cdef long long key
    cdef long long m
    cdef Py_ssize_t width = rank + 2
    na = ak.shape[0]
    nb = bk.shape[0]
    acc.reserve(<size_t> (na + nb))
    for ia in range(na):
        for ib in range(nb):
            if ak[ia, 0] + bk[ib, 0] > cap:
                break  # b is sorted by energy
            key = 0
            for j in range(width):
                if j == 1:
                    key += rad[j] * ((ak[ia, j] + bk[ib, j]) & 1)
                else:
                    key += rad[j] * (ak[ia, j] + bk[ib, j] - lo_v[j])
            acc[key] += am[ia] * bm[ib]

    out = {}
    cdef unordered_map[long long, long long].iterator it = acc.begin()
    cdef long long rem, q
    while it != acc.end():
        key = deref(it).first
        m = deref(it).second
        inc(it)
        if m == 0:
            continue
        rem = key
        parts = []
        for j in range(width):
            q = rem / rad[j]
            rem = rem - q * rad[j]
            if j == 1:
                parts.append(int(q))
            else:
                parts.append(int(q + lo_v[j]))
        out[tuple(parts)] = int(m)
    return out
