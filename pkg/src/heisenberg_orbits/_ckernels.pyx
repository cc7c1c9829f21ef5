# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels; see ``_pykernels`` for the reference semantics.

Rows are distributed over OpenMP threads when the extension is built with
OpenMP; each row is written by one thread only.
"""
import numpy as np
from cython.parallel cimport prange
from libc.math cimport exp, cos, sin


def gaussian_grid(double complex[::1] log_c, double complex[:, ::1] qu,
                  double complex[:, ::1] qv, double complex[:, :, ::1] uc,
                  double[:, ::1] V):
    cdef Py_ssize_t T = qu.shape[0], NU = qu.shape[1], NV = qv.shape[1]
    cdef Py_ssize_t nv = V.shape[1]
    cdef Py_ssize_t t, i, j, k
    cdef double er, ei, mag, base_r, base_i, cr, ci, kr, ki
    out = np.zeros((NU, NV), dtype=np.complex128)
    cdef double complex[:, ::1] K = out
    for i in prange(NU, nogil=True, schedule="static"):
        for t in range(T):
            base_r = log_c[t].real + qu[t, i].real
            base_i = log_c[t].imag + qu[t, i].imag
            for j in range(NV):
                cr = 0.0
                ci = 0.0
                for k in range(nv):
                    cr = cr + uc[t, i, k].real * V[j, k]
                    ci = ci + uc[t, i, k].imag * V[j, k]
                er = base_r + qv[t, j].real - 2.0 * cr
                ei = base_i + qv[t, j].imag - 2.0 * ci
                mag = exp(er)
                kr = K[i, j].real + mag * cos(ei)
                ki = K[i, j].imag + mag * sin(ei)
                K[i, j] = kr + 1j * ki
    return out
