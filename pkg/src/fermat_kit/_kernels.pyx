# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: packed exp-poly evaluation and 2-D complex convolution."""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double creal(double complex)

cnp.import_array()

DEF EXP_LIMIT = 709.0


def eval_packed(const double complex[:, ::1] coeffs, const double complex[::1] freqs,
                const double complex[::1] zs):
    cdef Py_ssize_t T = coeffs.shape[0], D = coeffs.shape[1], N = zs.shape[0]
    cdef Py_ssize_t t, d, k
    cdef double complex z, acc, p, w
    cdef bint overflow = False
    out = np.zeros(N, dtype=np.complex128)
    cdef double complex[::1] res = out
    with nogil:
        for k in range(N):
            z = zs[k]
            acc = 0
            for t in range(T):
                w = freqs[t] * z
                if creal(w) > EXP_LIMIT or creal(w) < -EXP_LIMIT:
                    overflow = True
                    break
                p = 0
                for d in range(D - 1, -1, -1):
                    p = p * z + coeffs[t, d]
                acc = acc + p * cexp(w)
            if overflow:
                break
            res[k] = acc
    if overflow:
        raise OverflowError("exp argument beyond binary64 range")
    return out


def conv2d(const double complex[:, ::1] a, const double complex[:, ::1] b):
    cdef Py_ssize_t M1 = a.shape[0], N1 = a.shape[1], M2 = b.shape[0], N2 = b.shape[1]
    cdef Py_ssize_t i, j, k, l
    cdef double complex v
    out = np.zeros((M1 + M2 - 1, N1 + N2 - 1), dtype=np.complex128)
    cdef double complex[:, ::1] res = out
    with nogil:
        for i in range(M1):
            for j in range(N1):
                v = a[i, j]
                if v == 0:
                    continue
                for k in range(M2):
                    for l in range(N2):
                        res[i + k, j + l] = res[i + k, j + l] + v * b[k, l]
    return out
