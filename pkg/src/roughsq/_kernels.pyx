# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the difference-quotient quadrature.

Sums ``w_i * (q(s_i) - q(t_i))**2`` where ``q(u) = (g(x+u) - g(x)) / u``
and ``g`` is the linear interpolant of uniform samples.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


cdef inline double _interp(const double[::1] v, double x0, double h, Py_ssize_t n,
                           double y) nogil:
    cdef double u = (y - x0) / h
    cdef Py_ssize_t i
    cdef double w
    if u <= 0.0:
        return v[0]
    if u >= n - 1:
        return v[n - 1]
    i = <Py_ssize_t> floor(u)
    if i > n - 2:
        i = n - 2
    w = u - i
    return (1.0 - w) * v[i] + w * v[i + 1]


def interp_pair_sum(const double[::1] values, double x0, double h, double x,
                    const double[::1] s, const double[::1] t, const double[::1] w):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = s.shape[0]
    cdef Py_ssize_t i
    cdef double gx, qs, qt, d
    cdef double total = 0.0
    if t.shape[0] != m or w.shape[0] != m:
        raise ValueError("node arrays must have equal length")
    with nogil:
        gx = _interp(values, x0, h, n, x)
        for i in range(m):
            qs = (_interp(values, x0, h, n, x + s[i]) - gx) / s[i]
            qt = (_interp(values, x0, h, n, x + t[i]) - gx) / t[i]
            d = qs - qt
            total += w[i] * d * d
    return total
