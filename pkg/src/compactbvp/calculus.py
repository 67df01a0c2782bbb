"""Discrete difference operators on uniform grids.

Two independent routes are provided for every operator:

* direct application to a known grid function (``sigma``, ``delta1``,
  ``delta2``, ``hermitian_derivative``, ``tilde_delta2``, ``delta3``,
  ``delta4``), backed by the kernels in :mod:`compactbvp.kernels`;
* linear-form emission (:func:`operator_matrices`, :func:`emit_stencils`),
  which composes sparse matrices over the extended unknown space and is what
  the global assembly consumes.

The interior-only operators ``delta1`` and ``delta2`` return zero in their
endpoint slots and ``sigma`` passes the endpoint values through; those slots
carry no meaning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp

from . import kernels
from .grid import Grid, GridFunction
from .layout import UnknownLayout
from .model import BoundaryData

__all__ = [
    "EndpointPair",
    "StencilRow",
    "sigma",
    "delta1",
    "delta2",
    "hermitian_derivative",
    "tilde_delta2",
    "delta3",
    "delta4",
    "compact_derivatives",
    "OperatorMatrices",
    "operator_matrices",
    "emit_stencils",
    "OPERATORS",
]


@dataclass(frozen=True)
class EndpointPair:
    """Values of a derived quantity prescribed at ``j = 0`` and ``j = n``."""

    left: float = 0.0
    right: float = 0.0

    def __post_init__(self):
        for name in ("left", "right"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"endpoint value {name}={value} is not finite")
            object.__setattr__(self, name, value)


ZERO = EndpointPair()


@dataclass(frozen=True)
class StencilRow:
    """One linear equation over the unknown layout.

    The row stands for ``sum_k coefficients[k] * z[k] - rhs_shift``;
    ``rhs_shift`` collects what known boundary data (and, for closure rows,
    the forcing) contribute once moved to the right-hand side.
    """

    coefficients: Dict[int, float] = field(default_factory=dict)
    rhs_shift: float = 0.0

    def apply(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(sum(w * z[k] for k, w in self.coefficients.items()) - self.rhs_shift)


def _pair(bc) -> EndpointPair:
    if bc is None:
        return ZERO
    if isinstance(bc, EndpointPair):
        return bc
    left, right = bc
    return EndpointPair(left, right)


def _same_grid(*fs: GridFunction) -> Grid:
    grid = fs[0].grid
    for g in fs[1:]:
        fs[0]._check(g)
    return grid


# ---------------------------------------------------------------------------
# direct application
# ---------------------------------------------------------------------------

def sigma(u: GridFunction) -> GridFunction:
    """Simpson average ``(u_{j-1} + 4 u_j + u_{j+1}) / 6`` at interior nodes."""
    v = u.v.copy()
    v[1:-1] = (u.v[:-2] + 4.0 * u.v[1:-1] + u.v[2:]) / 6.0
    return GridFunction(u.grid, v)


def delta1(u: GridFunction) -> GridFunction:
    """Central first difference at interior nodes."""
    v = np.zeros_like(u.v)
    v[1:-1] = (u.v[2:] - u.v[:-2]) / (2.0 * u.grid.h)
    return GridFunction(u.grid, v)


def delta2(u: GridFunction) -> GridFunction:
    """Central second difference at interior nodes."""
    v = np.zeros_like(u.v)
    v[1:-1] = (u.v[2:] - 2.0 * u.v[1:-1] + u.v[:-2]) / u.grid.h**2
    return GridFunction(u.grid, v)


def hermitian_derivative(u: GridFunction, bc: Optional[EndpointPair] = None) -> GridFunction:
    """Compact fourth-order first derivative ``p`` with ``sigma p = delta1 u``.

    ``bc`` prescribes ``p_0`` and ``p_n`` (homogeneous by default). The
    Simpson system is strictly diagonally dominant and is eliminated without
    pivoting; :class:`~compactbvp.errors.ZeroPivot` is raised if a pivot
    vanishes anyway.
    """
    bc = _pair(bc)
    p = kernels.hermitian_solve(u.v, u.grid.h, bc.left, bc.right)
    return GridFunction(u.grid, p)


def tilde_delta2(u: GridFunction, p: GridFunction, bc2: Optional[EndpointPair] = None) -> GridFunction:
    """``2 delta2 u - delta1 p`` inside, ``bc2`` at the endpoints."""
    grid = _same_grid(u, p)
    bc2 = _pair(bc2)
    h = grid.h
    v = np.empty_like(u.v)
    v[1:-1] = 2.0 * (u.v[2:] - 2.0 * u.v[1:-1] + u.v[:-2]) / h**2 - (p.v[2:] - p.v[:-2]) / (2.0 * h)
    v[0], v[-1] = bc2.left, bc2.right
    return GridFunction(grid, v)


def delta3(u: GridFunction, p: GridFunction, d2: GridFunction, bc3: Optional[EndpointPair] = None) -> GridFunction:
    """``2 delta2 p - delta1 d2`` inside, ``bc3`` at the endpoints.

    The near-boundary rows read ``d2`` at ``j = 0`` and ``j = n``, so ``d2``
    must already carry the closed boundary values.
    """
    grid = _same_grid(u, p, d2)
    bc3 = _pair(bc3)
    h = grid.h
    v = np.empty_like(u.v)
    v[1:-1] = 2.0 * (p.v[2:] - 2.0 * p.v[1:-1] + p.v[:-2]) / h**2 - (d2.v[2:] - d2.v[:-2]) / (2.0 * h)
    v[0], v[-1] = bc3.left, bc3.right
    return GridFunction(grid, v)


def delta4(u: GridFunction, p: GridFunction, bc4: Optional[EndpointPair] = None) -> GridFunction:
    """Discrete biharmonic ``(12/h^2) (delta1 p - delta2 u)`` inside, ``bc4`` at the endpoints."""
    grid = _same_grid(u, p)
    bc4 = _pair(bc4)
    h = grid.h
    v = np.empty_like(u.v)
    v[1:-1] = (12.0 / h**2) * (
        (p.v[2:] - p.v[:-2]) / (2.0 * h) - (u.v[2:] - 2.0 * u.v[1:-1] + u.v[:-2]) / h**2
    )
    v[0], v[-1] = bc4.left, bc4.right
    return GridFunction(grid, v)


def compact_derivatives(u: GridFunction, p: GridFunction, bc2=None, bc3=None, bc4=None):
    """``(tilde_delta2, delta3, delta4)`` of ``u`` in one pass through the kernel."""
    grid = _same_grid(u, p)
    bc2, bc3, bc4 = _pair(bc2), _pair(bc3), _pair(bc4)
    d2, d3, d4 = kernels.compact_derivatives(u.v, p.v, grid.h, bc2.left, bc2.right)
    d3[0], d3[-1] = bc3.left, bc3.right
    d4[0], d4[-1] = bc4.left, bc4.right
    return GridFunction(grid, d2), GridFunction(grid, d3), GridFunction(grid, d4)


# ---------------------------------------------------------------------------
# linear-form emission
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrices:
    """Every operator as a sparse ``(n+1) x ext_size`` matrix.

    Row ``j`` of each matrix gives the value at node ``j`` as a linear form
    over the extended vector (all nodal ``u``, all nodal ``p`` and the six
    closure values). Rows ``0`` and ``n`` of ``d2``, ``d3``, ``d4`` select the
    closure values; the other operators have empty endpoint rows except the
    selectors ``u`` and ``p``.
    """

    layout: UnknownLayout
    h: float
    u: sp.csr_matrix
    p: sp.csr_matrix
    sigma_u: sp.csr_matrix
    sigma_p: sp.csr_matrix
    delta1_u: sp.csr_matrix
    delta1_p: sp.csr_matrix
    delta2_u: sp.csr_matrix
    delta2_p: sp.csr_matrix
    d2: sp.csr_matrix
    d3: sp.csr_matrix
    d4: sp.csr_matrix

    @property
    def simpson(self) -> sp.csr_matrix:
        """Hermitian-derivative constraint ``sigma p - delta1 u``."""
        return (self.sigma_p - self.delta1_u).tocsr()


def _interior_tridiagonal(n: int, lo: float, mid: float, hi: float) -> sp.csr_matrix:
    j = np.arange(1, n)
    rows = np.repeat(j, 3)
    cols = (j[:, None] + np.array([-1, 0, 1])).ravel()
    vals = np.tile([lo, mid, hi], n - 1)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n + 1, n + 1))


@lru_cache(maxsize=64)
def operator_matrices(grid: Grid) -> OperatorMatrices:
    n, h = grid.n, grid.h
    lay = UnknownLayout(n)
    N, m = n + 1, lay.ext_size
    eye = sp.identity(N, format="csr")
    U = sp.hstack([eye, sp.csr_matrix((N, m - N))], format="csr")
    P = sp.hstack([sp.csr_matrix((N, N)), eye, sp.csr_matrix((N, 6))], format="csr")

    S = _interior_tridiagonal(n, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0)
    D1 = _interior_tridiagonal(n, -0.5 / h, 0.0, 0.5 / h)
    D2 = _interior_tridiagonal(n, 1.0 / h**2, -2.0 / h**2, 1.0 / h**2)

    interior = sp.diags(np.r_[0.0, np.ones(n - 1), 0.0])

    def closed(M, order):
        ends = sp.csr_matrix(
            ([1.0, 1.0], ([0, n], [lay.ext_closure("left", order), lay.ext_closure("right", order)])),
            shape=(N, m),
        )
        return (interior @ M + ends).tocsr()

    d2 = closed(2.0 * (D2 @ U) - D1 @ P, 2)
    d3 = closed(2.0 * (D2 @ P) - D1 @ d2, 3)
    d4 = closed((12.0 / h**2) * (D1 @ P - D2 @ U), 4)

    def mats(*ms):
        out = [m_.tocsr() for m_ in ms]
        for m_ in out:
            m_.eliminate_zeros()
        return out

    su, sp_, d1u, d1p, d2u, d2p = mats(S @ U, S @ P, D1 @ U, D1 @ P, D2 @ U, D2 @ P)
    d2, d3, d4 = mats(d2, d3, d4)
    return OperatorMatrices(lay, h, U, P, su, sp_, d1u, d1p, d2u, d2p, d2, d3, d4)


OPERATORS = ("sigma", "delta1", "delta2", "hermitian", "tilde_delta2", "delta3", "delta4")


def _select(mats: OperatorMatrices, op: str, block: str) -> sp.csr_matrix:
    if block not in ("u", "p"):
        raise ValueError(f"block must be 'u' or 'p', got {block!r}")
    table = {
        "sigma": mats.sigma_u if block == "u" else mats.sigma_p,
        "delta1": mats.delta1_u if block == "u" else mats.delta1_p,
        "delta2": mats.delta2_u if block == "u" else mats.delta2_p,
        "hermitian": mats.simpson,
        "tilde_delta2": mats.d2,
        "delta3": mats.d3,
        "delta4": mats.d4,
    }
    try:
        return table[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}") from None


def rows_to_stencils(M: sp.csr_matrix, layout: UnknownLayout, known_values, shift=None) -> List[StencilRow]:
    """Split extended-space rows into unknown weights and a right-hand-side shift.

    ``known_values`` are ``(u_0, u_n, p_0, p_n)``; ``shift`` adds a constant
    per row to the right-hand side (e.g. forcing).
    """
    M = sp.csr_matrix(M)
    ext_known = layout.ext_known
    mapping = layout.ext_to_unknown
    known_vec = np.zeros(layout.ext_size)
    known_vec[ext_known] = known_values
    moved = -(M @ known_vec)
    if shift is not None:
        moved = moved + np.asarray(shift, dtype=float)
    rows = []
    for i in range(M.shape[0]):
        start, stop = M.indptr[i], M.indptr[i + 1]
        coeffs = {}
        for col, w in zip(M.indices[start:stop], M.data[start:stop]):
            k = int(mapping[col])
            if k >= 0 and w != 0.0:
                coeffs[k] = coeffs.get(k, 0.0) + float(w)
        rows.append(StencilRow(coeffs, float(moved[i])))
    return rows


def emit_stencils(grid: Grid, op: str, boundary: Optional[BoundaryData] = None, block: str = "u") -> List[StencilRow]:
    """Interior rows (``j = 1..n-1``) of ``op`` as linear forms over the unknown layout.

    ``block`` picks the argument of the plain operators ``sigma``, ``delta1``
    and ``delta2``; the compact operators always act on ``(u, p)``.
    """
    boundary = boundary or BoundaryData()
    mats = operator_matrices(grid)
    M = _select(mats, op, block)[1:-1]
    known = (boundary.u_left, boundary.u_right, boundary.du_left, boundary.du_right)
    return rows_to_stencils(M, mats.layout, known)
