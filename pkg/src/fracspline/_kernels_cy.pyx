# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; mirror of _kernels_np."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, pow

cnp.import_array()

BACKEND = "cython"


cdef inline double _tpsum(double u, const double* w, Py_ssize_t nw,
                          double expo, double cutoff) nogil:
    cdef double acc = 0.0
    cdef double v
    cdef Py_ssize_t k, kmax
    if u > cutoff:
        return 0.0
    if u < 0.0:
        return 0.0
    kmax = <Py_ssize_t>floor(u)
    if kmax > nw - 1:
        kmax = nw - 1
    for k in range(kmax + 1):
        v = u - k
        # C99 pow(0, 0) == 1, which is exactly the right-continuity wanted
        # for the zeroth power; for expo > 0 the v == 0 term is 0 anyway.
        if v > 0.0 or (v == 0.0 and expo == 0.0):
            acc += w[k] * pow(v, expo)
    return acc


def truncated_power_sum(u, weights, double expo, double cutoff):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ww = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(uu.shape[0], dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0]
    cdef Py_ssize_t nw = ww.shape[0]
    cdef Py_ssize_t i
    cdef const double* wp = <const double*>cnp.PyArray_DATA(ww)
    cdef const double* up = <const double*>cnp.PyArray_DATA(uu)
    cdef double* op = <double*>cnp.PyArray_DATA(out)
    with nogil:
        for i in range(n):
            op[i] = _tpsum(up[i], wp, nw, expo, cutoff)
    return out


def basis_matrix(t, double scale, double shift0, Py_ssize_t n_cols,
                 weights, double expo, double cutoff):
    cdef cnp.ndarray[double, ndim=1] tt = np.ascontiguousarray(t, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ww = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((tt.shape[0], n_cols), dtype=np.float64)
    cdef Py_ssize_t n = tt.shape[0]
    cdef Py_ssize_t nw = ww.shape[0]
    cdef Py_ssize_t i, c
    cdef const double* wp = <const double*>cnp.PyArray_DATA(ww)
    cdef const double* tp = <const double*>cnp.PyArray_DATA(tt)
    cdef double* op = <double*>cnp.PyArray_DATA(out)
    cdef double u
    with nogil:
        for i in range(n):
            for c in range(n_cols):
                u = scale * tp[i] - (shift0 + c)
                op[i * n_cols + c] = _tpsum(u, wp, nw, expo, cutoff)
    return out
