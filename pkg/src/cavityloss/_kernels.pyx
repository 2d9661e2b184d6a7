# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Hermite-Gauss tables and the per-mode overlap sums."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, cos, M_PI

cnp.import_array()


def hermite_table(double[::1] u, int nmax):
    """psi_n(u_i) for n = 0..nmax, unit-L2-normalised Hermite functions."""
    cdef Py_ssize_t npts = u.shape[0]
    cdef Py_ssize_t i
    cdef int n
    out = np.empty((nmax + 1, npts), dtype=np.float64)
    cdef double[:, ::1] t = out
    cdef double c0 = M_PI ** -0.25
    cdef double a, b
    # row by row so every pass is contiguous; same arithmetic order as the numpy path
    for i in range(npts):
        t[0, i] = c0 * exp(-0.5 * u[i] * u[i])
    if nmax >= 1:
        a = sqrt(2.0)
        for i in range(npts):
            t[1, i] = a * u[i] * t[0, i]
    for n in range(2, nmax + 1):
        a = sqrt(2.0 / n)
        b = sqrt((n - 1.0) / n)
        for i in range(npts):
            t[n, i] = a * u[i] * t[n - 1, i] - b * t[n - 2, i]
    return out


def mode_overlaps(double[:, ::1] psi_x, double[:, ::1] psi_y, double[::1] theta,
                  double[::1] chi, double[::1] amp, int qmax):
    """S[k] = sum_i amp_i psi_n(x_i) psi_m(y_i) cos(theta_i - q chi_i).

    Modes are enumerated by order q = n + m, then n ascending.
    """
    cdef Py_ssize_t npts = amp.shape[0]
    cdef Py_ssize_t nmodes = (qmax + 1) * (qmax + 2) // 2
    out = np.zeros(nmodes, dtype=np.float64)
    cdef double[::1] s = out
    cdef double[::1] ac = np.empty(npts, dtype=np.float64)
    cdef Py_ssize_t i, k = 0
    cdef int q, n
    cdef double acc
    for q in range(qmax + 1):
        for i in range(npts):
            ac[i] = amp[i] * cos(theta[i] - q * chi[i])
        for n in range(q + 1):
            acc = 0.0
            for i in range(npts):
                acc += ac[i] * psi_x[n, i] * psi_y[q - n, i]
            s[k] = acc
            k += 1
    return out
