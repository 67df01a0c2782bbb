"""Boundary closure: second, third and fourth derivatives at the endpoints.

At each endpoint three equations tie the closure values ``(d2, d3, d4)`` to
interior data:

1. the differential equation itself,
2. Simpson's rule for the integral of ``u''''`` over the two cells next to
   the endpoint,
3. a combination of two second-difference formulas for ``u''`` at the
   near-boundary node.

At the right endpoint the node indices are reflected (``j -> n - j``), which
flips the sign of every odd-order difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sp

from .calculus import StencilRow, compact_derivatives, operator_matrices, rows_to_stencils
from .errors import SolvabilityViolation
from .grid import Grid, GridFunction
from .model import BoundaryData, CoefficientSet

__all__ = [
    "SOLVABILITY_RTOL",
    "BoundaryTriple",
    "ClosureMatrix",
    "solvability_quantity",
    "alpha_matrix",
    "closed_form_inverse",
    "closure_matrix",
    "closure_rhs",
    "close_boundary",
    "closure_rows_extended",
    "emit_closure_rows",
]

SOLVABILITY_RTOL = 1e-8


def _sign(side: str) -> float:
    if side == "left":
        return 1.0
    if side == "right":
        return -1.0
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass(frozen=True)
class BoundaryTriple:
    d2: float
    d3: float
    d4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d2, self.d3, self.d4])

    def __iter__(self):
        return iter((self.d2, self.d3, self.d4))


def solvability_quantity(a_val: float, d_val: float, h: float, side: str) -> float:
    """``12 - 4 D h + A h^2`` on the left, ``12 + 4 D h + A h^2`` on the right."""
    return 12.0 - 4.0 * _sign(side) * d_val * h + a_val * h * h


def alpha_matrix(a_val: float, d_val: float, h: float, side: str) -> np.ndarray:
    s = _sign(side)
    return np.array(
        [
            [a_val, d_val, 1.0],
            [0.0, s / (2.0 * h), 1.0 / 6.0],
            [2.0 / h**2, s / (2.0 * h), 0.0],
        ]
    )


def closed_form_inverse(a_val: float, d_val: float, h: float, side: str) -> np.ndarray:
    """Analytic inverse of :func:`alpha_matrix`."""
    s = _sign(side)
    q = solvability_quantity(a_val, d_val, h, side)
    h2, h3 = h * h, h**3
    adj = np.array(
        [
            [h2, -6.0 * h2, 6.0 * h2 - 2.0 * s * d_val * h3],
            [-4.0 * s * h, 24.0 * s * h, 2.0 * s * a_val * h3],
            [12.0, -24.0 * s * d_val * h + 6.0 * a_val * h2, -6.0 * a_val * h2],
        ]
    )
    return adj / q


@dataclass(frozen=True)
class ClosureMatrix:
    alpha: np.ndarray
    side: str
    h: float
    a_val: float
    d_val: float

    @property
    def quantity(self) -> float:
        return solvability_quantity(self.a_val, self.d_val, self.h, self.side)

    def inverse(self) -> np.ndarray:
        return closed_form_inverse(self.a_val, self.d_val, self.h, self.side)


def _check_solvable(a_val, d_val, h, side):
    q = solvability_quantity(a_val, d_val, h, side)
    threshold = SOLVABILITY_RTOL * (12.0 + abs(4.0 * d_val * h) + abs(a_val * h * h))
    if not abs(q) >= threshold:
        raise SolvabilityViolation(side, q, threshold)


def _endpoint(grid: Grid, side: str) -> float:
    _sign(side)
    return grid.a if side == "left" else grid.b


def closure_matrix(coeffs: CoefficientSet, grid: Grid, side: str) -> ClosureMatrix:
    """The 3x3 closure matrix at one endpoint; raises if it is (nearly) singular."""
    vals = coeffs.at(_endpoint(grid, side))
    h = grid.h
    _check_solvable(vals["A"], vals["D"], h, side)
    alpha = alpha_matrix(vals["A"], vals["D"], h, side)
    alpha.setflags(write=False)
    return ClosureMatrix(alpha, side, h, vals["A"], vals["D"])


def closure_rhs(u: GridFunction, p: GridFunction, coeffs: CoefficientSet, side: str, f0: Optional[float] = None) -> np.ndarray:
    """Right-hand side ``b`` of the closure system from interior values of ``(u, p)``.

    The equation row subtracts the prescribed lower-order boundary terms
    ``(A' + H) u'`` and ``B u`` using the endpoint values of ``p`` and ``u``.
    """
    s = _sign(side)
    grid = u.grid
    n, h = grid.n, grid.h
    x = _endpoint(grid, side)
    vals = coeffs.at(x)
    if f0 is None:
        if coeffs.f is None:
            raise ValueError("no forcing value: pass f0 or set coeffs.f")
        f0 = vals["f"]
    # the closure slots of d2 do not reach j = 2 or j = n - 2
    d2, d3, d4 = compact_derivatives(u, p)
    j0, j1, j2 = (0, 1, 2) if side == "left" else (n, n - 1, n - 2)
    return np.array(
        [
            f0 - (vals["Aprime"] + vals["H"]) * p.v[j0] - vals["B"] * u.v[j0],
            s * d3.v[j2] / (2.0 * h) - (4.0 * d4.v[j1] + d4.v[j2]) / 6.0,
            d4.v[j1] - 2.0 * (d2.v[j2] - 2.0 * d2.v[j1]) / h**2 + s * d3.v[j2] / (2.0 * h),
        ]
    )


def close_boundary(u: GridFunction, p: GridFunction, coeffs: CoefficientSet, side: str, f0: Optional[float] = None) -> BoundaryTriple:
    """Solve the closure system at one endpoint for ``(d2, d3, d4)``.

    ``p`` must be the Hermitian derivative of ``u``. ``f0`` defaults to the
    forcing evaluated at the endpoint.
    """
    u._check(p)
    cm = closure_matrix(coeffs, u.grid, side)
    b = closure_rhs(u, p, coeffs, side, f0)
    return BoundaryTriple(*np.linalg.solve(cm.alpha, b))


def closure_rows_extended(coeffs: CoefficientSet, grid: Grid, side: str):
    """The three closure equations over the extended space.

    Returns ``(M, target)`` with ``M`` a ``3 x ext_size`` sparse matrix and
    ``target`` the forcing part of the right-hand side, so that
    ``M @ ext - target == alpha @ U - b``.
    """
    s = _sign(side)
    mats = operator_matrices(grid)
    lay = mats.layout
    n, h = grid.n, grid.h
    x = _endpoint(grid, side)
    vals = coeffs.at(x)
    _check_solvable(vals["A"], vals["D"], h, side)
    m = lay.ext_size
    j0, j1, j2 = (0, 1, 2) if side == "left" else (n, n - 1, n - 2)

    def e(idx):
        return sp.csr_matrix(([1.0], ([0], [idx])), shape=(1, m))

    c2, c3, c4 = (e(lay.ext_closure(side, k)) for k in (2, 3, 4))
    D2, D3, D4 = mats.d2, mats.d3, mats.d4
    ode = vals["A"] * c2 + vals["D"] * c3 + c4 + (vals["Aprime"] + vals["H"]) * mats.p[j0] + vals["B"] * mats.u[j0]
    simpson = s * c3 / (2.0 * h) + c4 / 6.0 - (s * D3[j2] / (2.0 * h) - (4.0 * D4[j1] + D4[j2]) / 6.0)
    lincomb = 2.0 * c2 / h**2 + s * c3 / (2.0 * h) - (
        D4[j1] - 2.0 * (D2[j2] - 2.0 * D2[j1]) / h**2 + s * D3[j2] / (2.0 * h)
    )
    M = sp.vstack([ode, simpson, lincomb], format="csr")
    M.eliminate_zeros()
    f0 = vals.get("f", 0.0)
    return M, np.array([f0, 0.0, 0.0])


def emit_closure_rows(coeffs: CoefficientSet, grid: Grid, side: str, boundary: Optional[BoundaryData] = None) -> List[StencilRow]:
    """The closure equations as :class:`StencilRow` objects over the unknown layout.

    ``row.apply(z)`` equals the residual ``alpha @ U - b`` of
    :func:`close_boundary` for the unknown vector ``z``.
    """
    boundary = boundary or BoundaryData()
    M, target = closure_rows_extended(coeffs, grid, side)
    known = (boundary.u_left, boundary.u_right, boundary.du_left, boundary.du_right)
    return rows_to_stencils(M, operator_matrices(grid).layout, known, shift=target)
