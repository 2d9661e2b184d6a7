"""Numpy implementations of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def hermite_table(u, nmax):
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty((nmax + 1, u.size))
    out[0] = np.pi**-0.25 * np.exp(-0.5 * u * u)
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for n in range(2, nmax + 1):
        out[n] = np.sqrt(2.0 / n) * u * out[n - 1] - np.sqrt((n - 1.0) / n) * out[n - 2]
    return out


def mode_overlaps(psi_x, psi_y, theta, chi, amp, qmax):
    out = np.empty((qmax + 1) * (qmax + 2) // 2)
    k = 0
    for q in range(qmax + 1):
        ac = amp * np.cos(theta - q * chi)
        # rows n = 0..q paired with m = q..0
        out[k:k + q + 1] = (psi_x[: q + 1] * psi_y[q::-1]) @ ac
        k += q + 1
    return out
