# cython: language_level=3
"""Compiled twin of ``_kernels_py``: hot quadrature kernels as C loops."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cosh, exp

cnp.import_array()

BACKEND_NAME = "compiled"


def scaled_k_integrand(u, double eps, double y):
    """Even part of the scaled integrand exp(-y (cosh u - 1)) cosh(eps u)."""
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(uu)
    cdef Py_ssize_t i, n = uu.shape[0]
    for i in range(n):
        out[i] = exp(-y * (cosh(uu[i]) - 1.0)) * cosh(eps * uu[i])
    return out


def scaled_k_panel(
    double eps,
    double y,
    double u_max,
    cnp.ndarray[double, ndim=1] nodes,
    cnp.ndarray[double, ndim=1] weights,
):
    """Gauss-Legendre panel of the scaled integrand over [0, u_max]."""
    cdef double acc = 0.0
    cdef double u
    cdef Py_ssize_t i, n = nodes.shape[0]
    for i in range(n):
        u = u_max * nodes[i]
        acc += weights[i] * exp(-y * (cosh(u) - 1.0)) * cosh(eps * u)
    return acc * u_max


def scaled_k_panel_batch(
    double eps,
    ys,
    u_maxes,
    cnp.ndarray[double, ndim=1] nodes,
    cnp.ndarray[double, ndim=1] weights,
):
    """Vectorized ``scaled_k_panel`` over matching arrays of y and u_max."""
    cdef cnp.ndarray[double, ndim=1] yy = np.ascontiguousarray(ys, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] um = np.ascontiguousarray(u_maxes, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(yy)
    cdef double acc, u
    cdef Py_ssize_t i, k, n = yy.shape[0], m = nodes.shape[0]
    for i in range(n):
        acc = 0.0
        for k in range(m):
            u = um[i] * nodes[k]
            acc += weights[k] * exp(-yy[i] * (cosh(u) - 1.0)) * cosh(eps * u)
        out[i] = acc * um[i]
    return out
