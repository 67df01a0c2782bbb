"""Pure-Python/NumPy versions of the compiled kernels in ``_ckernels.pyx``.

Same signatures and semantics; used when the extension is not built or when
``COMPACTBVP_FORCE_PYTHON`` is set.
"""

import numpy as np

from .errors import ZeroPivot


def solve_tridiagonal(lower, diag, upper, rhs):
    """Thomas algorithm for ``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``.

    ``lower[0]`` and ``upper[-1]`` are ignored. No pivoting.
    """
    a = np.asarray(lower, dtype=float).tolist()
    b = np.asarray(diag, dtype=float).tolist()
    c = np.asarray(upper, dtype=float).tolist()
    d = np.asarray(rhs, dtype=float).tolist()
    m = len(b)
    if not (len(a) == len(c) == len(d) == m):
        raise ValueError("tridiagonal bands and rhs must have equal length")
    if m == 0:
        return np.zeros(0)
    cp = [0.0] * m
    dp = [0.0] * m
    piv = b[0]
    if piv == 0.0:
        raise ZeroPivot("zero pivot in row 0")
    cp[0] = c[0] / piv
    dp[0] = d[0] / piv
    for i in range(1, m):
        piv = b[i] - a[i] * cp[i - 1]
        if piv == 0.0:
            raise ZeroPivot(f"zero pivot in row {i}")
        cp[i] = c[i] / piv
        dp[i] = (d[i] - a[i] * dp[i - 1]) / piv
    x = [0.0] * m
    x[m - 1] = dp[m - 1]
    for i in range(m - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.array(x)


def hermitian_solve(v, h, left, right):
    """Hermitian derivative: solve ``sigma p = delta v`` on the interior nodes.

    ``p[0] = left`` and ``p[n] = right`` are prescribed and their Simpson
    weight is moved to the right-hand side.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0] - 1
    rhs = (v[2:] - v[:-2]) / (2.0 * h)
    rhs[0] -= left / 6.0
    rhs[-1] -= right / 6.0
    m = n - 1
    sub = np.full(m, 1.0 / 6.0)
    dia = np.full(m, 2.0 / 3.0)
    p = np.empty(n + 1)
    p[0] = left
    p[n] = right
    p[1:n] = solve_tridiagonal(sub, dia, sub, rhs)
    return p


def compact_derivatives(u, p, h, d2_left, d2_right):
    """Second, third and fourth compact differences of ``u`` given its Hermitian derivative.

    Returns ``(d2, d3, d4)``. ``d2`` carries ``d2_left``/``d2_right`` in its
    endpoint slots (``d3`` reads them at the near-boundary nodes); the endpoint
    slots of ``d3`` and ``d4`` are zero and left for the caller to fill.
    """
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    n = u.shape[0] - 1
    hh = h * h
    dd_u = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / hh
    d_p = (p[2:] - p[:-2]) / (2.0 * h)
    dd_p = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / hh

    d2 = np.empty(n + 1)
    d2[1:n] = 2.0 * dd_u - d_p
    d2[0] = d2_left
    d2[n] = d2_right

    d3 = np.zeros(n + 1)
    d3[1:n] = 2.0 * dd_p - (d2[2:] - d2[:-2]) / (2.0 * h)

    d4 = np.zeros(n + 1)
    d4[1:n] = (12.0 / hh) * (d_p - dd_u)
    return d2, d3, d4
