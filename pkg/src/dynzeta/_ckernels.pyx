# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Euler-product inner loop; see _pykernels.euler_log_sum for the contract."""

from libc.math cimport cos, sin, exp
from libc.stdlib cimport malloc, free


cdef extern from "complex.h" nogil:
    double complex cexp(double complex)


def euler_log_sum(const double[::1] lengths, const double[:, ::1] angles, const double complex[:, ::1] chi,
                  const long long[::1] n_max, const double[:, ::1] weights, const double[::1] wmult,
                  double complex s, double shift, bint with_denominator):
    cdef Py_ssize_t G = lengths.shape[0]
    cdef Py_ssize_t R = angles.shape[1]
    cdef Py_ssize_t D = chi.shape[1]
    cdef Py_ssize_t W = weights.shape[0]
    cdef Py_ssize_t g, j, w
    cdef long long n, N
    cdef double l, x, den, ph
    cdef double complex total = 0, tr_chi, tr_sigma, z
    cdef double complex *powers = <double complex *> malloc(max(D, 1) * sizeof(double complex))
    cdef double complex *zs = <double complex *> malloc(max(D, 1) * sizeof(double complex))
    cdef double *phase = <double *> malloc(max(W, 1) * sizeof(double))
    if powers == NULL or zs == NULL or phase == NULL:
        free(powers); free(zs); free(phase)
        raise MemoryError()
    try:
        with nogil:
            for g in range(G):
                N = n_max[g]
                if N <= 0:
                    continue
                l = lengths[g]
                z = cexp(-(s + shift) * l)
                for j in range(D):
                    zs[j] = chi[g, j] * z
                    powers[j] = 1
                for w in range(W):
                    ph = 0
                    for j in range(R):
                        ph = ph + weights[w, j] * angles[g, j]
                    phase[w] = ph
                for n in range(1, N + 1):
                    tr_chi = 0
                    for j in range(D):
                        powers[j] = powers[j] * zs[j]
                        tr_chi = tr_chi + powers[j]
                    tr_sigma = 0
                    for w in range(W):
                        tr_sigma = tr_sigma + wmult[w] * (cos(n * phase[w]) + 1j * sin(n * phase[w]))
                    if with_denominator:
                        x = exp(-n * l)
                        den = 1
                        for j in range(R):
                            den = den * (1 - 2 * x * cos(n * angles[g, j]) + x * x)
                        total = total + tr_chi * tr_sigma / (n * den)
                    else:
                        total = total + tr_chi * tr_sigma / n
    finally:
        free(powers)
        free(zs)
        free(phase)
    return complex(total)
