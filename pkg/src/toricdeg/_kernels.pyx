# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef long long i64


cdef inline i64 floordiv(i64 a, i64 b) nogil:
    # b > 0
    cdef i64 q = a // b
    if (a % b != 0) and (a < 0):
        q -= 1
    return q


def enumerate_points(A, b, starts, int d, bint count_only=False):
    cdef cnp.ndarray[i64, ndim=2] Aa = np.ascontiguousarray(A, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ba = np.ascontiguousarray(b, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef i64[:, :] Am = Aa
    cdef i64[:] bm = ba
    cdef i64[:] sm = st
    cdef i64* y = <i64*> malloc(d * sizeof(i64))
    cdef i64* hi = <i64*> malloc(d * sizeof(i64))
    cdef int k, r, j
    cdef i64 rhs, a, v, lo_k, hi_k
    cdef bint has_lo, has_hi
    cdef i64 count = 0
    cdef list out = []
    cdef bint descend
    try:
        k = 0
        descend = True
        while k >= 0:
            if descend:
                has_lo = False
                has_hi = False
                lo_k = 0
                hi_k = 0
                for r in range(sm[k], sm[k + 1]):
                    rhs = bm[r]
                    for j in range(k):
                        rhs -= Am[r, j] * y[j]
                    a = Am[r, k]
                    if a > 0:
                        v = -floordiv(-rhs, a)
                        if not has_lo or v > lo_k:
                            lo_k = v
                        has_lo = True
                    else:
                        v = floordiv(-rhs, -a)
                        if not has_hi or v < hi_k:
                            hi_k = v
                        has_hi = True
                if not (has_lo and has_hi):
                    raise ValueError("unbounded coordinate in lattice enumeration")
                y[k] = lo_k
                hi[k] = hi_k
            else:
                y[k] += 1
            if y[k] > hi[k]:
                k -= 1
                descend = False
                continue
            if k + 1 == d and count_only:
                count += hi[k] - y[k] + 1
                k -= 1
                descend = False
            elif k + 1 == d:
                count += 1
                if not count_only:
                    out.append(tuple([y[j] for j in range(d)]))
                descend = False
            else:
                k += 1
                descend = True
    finally:
        free(y)
        free(hi)
    if count_only:
        return count
    return out


def poly_eval(coef, exps, gen, int n_gen, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c = np.ascontiguousarray(coef, dtype=np.complex128)
    cdef cnp.ndarray[i64, ndim=2] e = np.ascontiguousarray(exps, dtype=np.int64).reshape(len(c), -1) if len(c) else np.zeros((0, len(z)), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] g = np.ascontiguousarray(gen, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef int T = c.shape[0]
    cdef int nv = zz.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vals = np.zeros(n_gen, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] jac = np.zeros((n_gen, nv), dtype=np.complex128)
    cdef int t, v, w, p
    cdef double complex mono, dm, base
    for t in range(T):
        mono = c[t]
        for v in range(nv):
            for p in range(e[t, v]):
                mono = mono * zz[v]
        vals[g[t]] += mono
        for v in range(nv):
            if e[t, v] == 0:
                continue
            dm = c[t] * e[t, v]
            for w in range(nv):
                if w == v:
                    for p in range(e[t, w] - 1):
                        dm = dm * zz[w]
                else:
                    for p in range(e[t, w]):
                        dm = dm * zz[w]
            jac[g[t], v] += dm
    return vals, jac
