# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer polynomial kernels (int64 fast path).

Inputs whose products could overflow 63 bits are routed to the pure-Python
implementation, so results are always exact.
"""
from cpython.array cimport array, clone

from holonomy import _laurent_py

cdef long long LIMIT = 1LL << 62

cdef array _LL = array("q")


cdef long long _absmax(seq) except -1:
    cdef object m = 0
    for x in seq:
        if x > m:
            m = x
        elif -x > m:
            m = -x
    if m >= LIMIT:
        return LIMIT
    return m


def conv(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return []
    cdef long long ma = _absmax(a), mb = _absmax(b)
    cdef Py_ssize_t nmin = na if na < nb else nb
    if ma >= LIMIT or mb >= LIMIT or (ma and mb and
            (<double>ma) * (<double>mb) * nmin >= 4.0e18):
        return _laurent_py.conv(a, b)
    cdef array A = array("q", a), B = array("q", b)
    cdef array C = clone(_LL, na + nb - 1, True)
    cdef long long[:] av = A, bv = B, cv = C
    cdef Py_ssize_t i, j
    cdef long long x
    for i in range(na):
        x = av[i]
        if x == 0:
            continue
        for j in range(nb):
            cv[i + j] += x * bv[j]
    return list(C)


def fold_mod(coeffs, long long shift, Py_ssize_t l):
    cdef Py_ssize_t n = len(coeffs)
    cdef long long m = _absmax(coeffs)
    if m >= LIMIT or (<double>m) * n >= 4.0e18:
        return _laurent_py.fold_mod(coeffs, shift, l)
    cdef array A = array("q", coeffs)
    cdef array C = clone(_LL, l, True)
    cdef long long[:] av = A, cv = C
    cdef Py_ssize_t i, k
    for i in range(n):
        if av[i]:
            k = (shift + i) % l
            if k < 0:
                k += l
            cv[k] += av[i]
    return list(C)


def reduce_monic(coeffs, modulus):
    cdef Py_ssize_t n = len(modulus) - 1, nc = len(coeffs)
    cdef long long mc = _absmax(coeffs), mm = _absmax(modulus)
    if mc >= LIMIT or mm >= LIMIT:
        return _laurent_py.reduce_monic(coeffs, modulus)
    cdef array R = array("q", coeffs)
    cdef array M = array("q", modulus)
    cdef long long[:] rv = R, mv = M
    cdef Py_ssize_t top, j, base
    cdef long long c, v
    # each step needs |c * m_j| and the updated entry to stay below 2^62;
    # otherwise restart exactly in Python
    cdef long long cmax = LIMIT // (mm + 1)
    for top in range(nc - 1, n - 1, -1):
        c = rv[top]
        if c == 0:
            continue
        if c > cmax or -c > cmax:
            return _laurent_py.reduce_monic(coeffs, modulus)
        base = top - n
        for j in range(n + 1):
            v = rv[base + j] - c * mv[j]
            if v >= LIMIT or -v >= LIMIT:
                return _laurent_py.reduce_monic(coeffs, modulus)
            rv[base + j] = v
    out = list(R)[:n]
    if len(out) < n:
        out.extend([0] * (n - len(out)))
    return out


BACKEND = "cython"
