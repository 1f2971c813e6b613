# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled equalizer loop; mirrors ``_dfe_py.dfe_run`` exactly.

See the pure-Python module for the update equations.  Any semantic change
must land in both implementations.
"""

import numpy as np


def dfe_run(x, desired, Py_ssize_t n_train, ff, fb, double mu, Py_ssize_t delay):
    """Run the decision-feedback loop; see ``_dfe_py.dfe_run``."""
    cdef double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef double[::1] dv = np.ascontiguousarray(desired, dtype=np.float64)
    cdef double complex[::1] ffv = ff
    cdef double complex[::1] fbv = fb
    cdef Py_ssize_t n_sym = dv.shape[0]
    cdef Py_ssize_t n_ff = ffv.shape[0]
    cdef Py_ssize_t n_fb = fbv.shape[0]
    cdef Py_ssize_t n_x = xv.shape[0]
    if n_x < n_sym + delay:
        raise ValueError("received stream shorter than len(desired) + delay")
    dec_arr = np.zeros(n_sym)
    err_arr = np.zeros(n_sym)
    cdef double[::1] dec = dec_arr
    cdef double[::1] err2 = err_arr
    cdef double two_mu = 2.0 * mu
    cdef Py_ssize_t k, s, i, j
    cdef double complex z, e, g
    cdef double d, ref
    for k in range(delay, delay + n_sym):
        s = k - delay
        z = 0
        for i in range(n_ff):
            j = k - i
            if j >= 0:
                z = z + ffv[i] * xv[j]
        for i in range(n_fb):
            j = s - 1 - i
            if j >= 0:
                z = z - fbv[i] * dec[j]
        d = 1.0 if z.real >= 0.0 else -1.0
        ref = dv[s] if s < n_train else d
        e = ref - z
        g = two_mu * e
        for i in range(n_ff):
            j = k - i
            if j >= 0:
                ffv[i] = ffv[i] + g * xv[j].conjugate()
        for i in range(n_fb):
            j = s - 1 - i
            if j >= 0:
                fbv[i] = fbv[i] - g * dec[j]
        dec[s] = d
        err2[s] = e.real * e.real + e.imag * e.imag
    return dec_arr, err_arr
