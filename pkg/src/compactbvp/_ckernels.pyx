# cython: language_level=3
"""Compiled kernels: Thomas elimination and the compact difference stencils.

Mirrors ``_pykernels`` exactly; see that module for the contracts.
"""

import numpy as np
cimport numpy as cnp

from .errors import ZeroPivot

cnp.import_array()


def solve_tridiagonal(lower, diag, upper, rhs):
    cdef const double[::1] a = np.ascontiguousarray(lower, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(upper, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef Py_ssize_t m = b.shape[0]
    if not (a.shape[0] == m and c.shape[0] == m and d.shape[0] == m):
        raise ValueError("tridiagonal bands and rhs must have equal length")
    out = np.zeros(m)
    if m == 0:
        return out
    cdef double[::1] x = out
    cdef double[::1] cp = np.empty(m)
    cdef double[::1] dp = np.empty(m)
    cdef Py_ssize_t i
    cdef Py_ssize_t bad = -1
    cdef double piv
    with nogil:
        piv = b[0]
        if piv == 0.0:
            bad = 0
        else:
            cp[0] = c[0] / piv
            dp[0] = d[0] / piv
            for i in range(1, m):
                piv = b[i] - a[i] * cp[i - 1]
                if piv == 0.0:
                    bad = i
                    break
                cp[i] = c[i] / piv
                dp[i] = (d[i] - a[i] * dp[i - 1]) / piv
            if bad < 0:
                x[m - 1] = dp[m - 1]
                for i in range(m - 2, -1, -1):
                    x[i] = dp[i] - cp[i] * x[i + 1]
    if bad >= 0:
        raise ZeroPivot(f"zero pivot in row {bad}")
    return out


def hermitian_solve(v, double h, double left, double right):
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0] - 1
    cdef Py_ssize_t m = n - 1
    out = np.empty(n + 1)
    cdef double[::1] p = out
    cdef double[::1] cp = np.empty(m)
    cdef double[::1] dp = np.empty(m)
    cdef double sub = 1.0 / 6.0
    cdef double dia = 2.0 / 3.0
    cdef double inv2h = 0.5 / h
    cdef double piv, r
    cdef Py_ssize_t i
    with nogil:
        # forward sweep over interior rows j = i + 1, rhs built on the fly
        for i in range(m):
            r = (vv[i + 2] - vv[i]) * inv2h
            if i == 0:
                r -= left * sub
            if i == m - 1:
                r -= right * sub
            if i == 0:
                piv = dia
                dp[0] = r / piv
            else:
                piv = dia - sub * cp[i - 1]
                dp[i] = (r - sub * dp[i - 1]) / piv
            cp[i] = sub / piv
        p[0] = left
        p[n] = right
        p[m] = dp[m - 1]
        for i in range(m - 2, -1, -1):
            p[i + 1] = dp[i] - cp[i] * p[i + 2]
    return out


def compact_derivatives(u, p, double h, double d2_left, double d2_right):
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] pp = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0] - 1
    d2_arr = np.empty(n + 1)
    d3_arr = np.zeros(n + 1)
    d4_arr = np.zeros(n + 1)
    cdef double[::1] d2 = d2_arr
    cdef double[::1] d3 = d3_arr
    cdef double[::1] d4 = d4_arr
    cdef double hh = h * h
    cdef double inv2h = 0.5 / h
    cdef double twelve_hh = 12.0 / hh
    cdef double dd_u, d_p, dd_p
    cdef Py_ssize_t j
    with nogil:
        d2[0] = d2_left
        d2[n] = d2_right
        for j in range(1, n):
            dd_u = (uu[j + 1] - 2.0 * uu[j] + uu[j - 1]) / hh
            d_p = (pp[j + 1] - pp[j - 1]) * inv2h
            d2[j] = 2.0 * dd_u - d_p
            d4[j] = twelve_hh * (d_p - dd_u)
        for j in range(1, n):
            dd_p = (pp[j + 1] - 2.0 * pp[j] + pp[j - 1]) / hh
            d3[j] = 2.0 * dd_p - (d2[j + 1] - d2[j - 1]) * inv2h
    return d2_arr, d3_arr, d4_arr
