# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; see _slowkernels for the reference semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef extern from "complex.h" nogil:
    double complex clog(double complex)


cdef inline double complex cpow_int(double complex base, int k):
    cdef double complex out = 1.0 + 0.0j
    cdef int i
    for i in range(k):
        out = out * base
    return out


def cauchy_sum(cnp.complex128_t[::1] w, cnp.complex128_t[::1] coeff,
               double complex z, int k):
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double complex acc = 0
    for i in range(n):
        acc = acc + coeff[i] / cpow_int(w[i] - z, k)
    return complex(acc)


def node_values(cnp.complex128_t[::1] zeta, cnp.complex128_t[::1] dzeta,
                cnp.complex128_t[::1] dens, double complex q, int k):
    cdef Py_ssize_t i, n = zeta.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef cnp.complex128_t[::1] ov = out
    for i in range(n):
        ov[i] = dens[i] * dzeta[i] / cpow_int(zeta[i] - q, k)
    return out


def polyline_log_sum(cnp.complex128_t[::1] vertices, double complex z):
    cdef Py_ssize_t j, n = vertices.shape[0]
    cdef double complex acc = 0
    for j in range(n - 1):
        acc = acc + clog((vertices[j + 1] - z) / (vertices[j] - z))
    return complex(acc)


def xi_pair_sum(cnp.float64_t[::1] ts, cnp.complex128_t[::1] zt,
                cnp.complex128_t[::1] z1, cnp.complex128_t[::1] z2,
                cnp.complex128_t[::1] wt,
                cnp.float64_t[::1] tlo, cnp.float64_t[::1] thi,
                cnp.float64_t[::1] sgn, int n1, int n2, double coef):
    cdef Py_ssize_t i, p, m = ts.shape[0], np_ = z1.shape[0]
    cdef double complex acc, kern
    out = np.empty(m, dtype=np.complex128)
    cdef cnp.complex128_t[::1] ov = out
    for i in range(m):
        acc = 0
        for p in range(np_):
            if tlo[p] <= ts[i] <= thi[p]:
                kern = (cpow_int(zt[i] - z1[p], n2)
                        * cpow_int(z2[p] - zt[i], n1)
                        / cpow_int(z2[p] - z1[p], n1 + n2 + 1))
                acc = acc + kern * wt[p] * sgn[p]
        ov[i] = coef * acc
    return out
