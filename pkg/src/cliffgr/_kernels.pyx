# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled jet and blade product kernels."""
import numpy as np
cimport numpy as cnp

from ._tables import NCOEF, NPAIRS, PAIR_LEFT, PAIR_RIGHT, PAIR_RESULT

cnp.import_array()

cdef cnp.int64_t[::1] _L = np.ascontiguousarray(PAIR_LEFT, dtype=np.int64)
cdef cnp.int64_t[::1] _R = np.ascontiguousarray(PAIR_RIGHT, dtype=np.int64)
cdef cnp.int64_t[::1] _T = np.ascontiguousarray(PAIR_RESULT, dtype=np.int64)


def jet_mul(a, b, int order):
    """Batched truncated product of jets; a and b have shape (M, >=N)."""
    cdef const double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t m = av.shape[0]
    cdef Py_ssize_t p = NPAIRS[order]
    out = np.zeros((m, NCOEF[order]))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, q
    for r in range(m):
        for q in range(p):
            ov[r, _T[q]] += av[r, _L[q]] * bv[r, _R[q]]
    return out


def blade_bilinear(a, b, signs, int order):
    """Batched signed blade product of multivector jets of shape (M, 16, >=N)."""
    cdef const double[:, :, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, :, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double[:, ::1] sv = np.ascontiguousarray(signs, dtype=np.float64)
    cdef Py_ssize_t m = av.shape[0]
    cdef Py_ssize_t p = NPAIRS[order]
    out = np.zeros((m, 16, NCOEF[order]))
    cdef double[:, :, ::1] ov = out
    cdef Py_ssize_t r, i, j, k, q
    cdef double s, ai
    for r in range(m):
        for i in range(16):
            for j in range(16):
                s = sv[i, j]
                if s == 0.0:
                    continue
                k = i ^ j
                for q in range(p):
                    ai = av[r, i, _L[q]]
                    if ai != 0.0:
                        ov[r, k, _T[q]] += s * ai * bv[r, j, _R[q]]
    return out
