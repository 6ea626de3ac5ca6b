# cython: boundscheck=False, wraparound=False, cdivision=True
"""Dense row reduction modulo a word-sized prime (compiled)."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(cnp.ndarray[i64, ndim=2] a, long p):
    """Reduce ``a`` in place to reduced echelon form mod ``p``; return the rank."""
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef i64 inv, f, x
    cdef i64[:, :] m = a
    for i in range(nrows):
        for j in range(ncols):
            x = m[i, j] % p
            if x < 0:
                x += p
            m[i, j] = x
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and m[k, c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            for j in range(c, ncols):
                x = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = x
        inv = _inv(m[r, c], p)
        if inv != 1:
            for j in range(c, ncols):
                m[r, j] = m[r, j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            f = m[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, ncols):
                if m[r, j]:
                    m[i, j] = (m[i, j] + f * m[r, j]) % p
        r += 1
    return r
