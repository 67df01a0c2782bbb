"""Assembly and solution of the coupled compact scheme.

Unknowns are the interior values of ``u``, the interior values of its
Hermitian derivative ``p`` and the six closure values (see
:class:`~compactbvp.layout.UnknownLayout`). Rows are, in order:

* ``n - 1`` scheme rows
  ``d4 + D d3 + A d2 + (A' + H) p + B u = f`` at ``x_1..x_{n-1}``,
* ``n - 1`` Simpson rows ``sigma p - delta1 u = 0``,
* three closure rows per endpoint.

The raw matrix mixes rows scaled like ``h^-5`` with rows of order one, so it
is row- and column-equilibrated before factorisation; the reciprocal
condition number is reported for the equilibrated matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .calculus import compact_derivatives, operator_matrices
from .closure import BoundaryTriple, close_boundary, closure_matrix, closure_rows_extended
from .errors import AssemblyError, SampleError, SelfConsistencyError, SingularSystem, SolvabilityViolation
from .grid import GridFunction, norm_h, sample
from .layout import UnknownLayout
from .model import BoundaryData, CoefficientSet, ProblemSpec

__all__ = [
    "RCOND_MIN",
    "DENSE_LIMIT",
    "UnknownLayout",
    "SparseSystem",
    "LinearSolution",
    "DiscreteSolution",
    "ProblemSpec",
    "assemble",
    "solve",
    "solve_bvp",
]

log = logging.getLogger(__name__)

RCOND_MIN = 1e-14
DENSE_LIMIT = 512
CONSISTENCY_RTOL = 1e-9
# observed mismatches stay below 1.2 eps on the backward-error scale
CONSISTENCY_ROUNDOFF = 32.0
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SparseSystem:
    """Square sparse system ``matrix @ z = rhs`` over ``layout``."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    layout: UnknownLayout

    def __post_init__(self):
        m = self.layout.size
        if self.matrix.shape != (m, m) or self.rhs.shape != (m,):
            raise ValueError(f"inconsistent system dimensions {self.matrix.shape}, {self.rhs.shape}, layout {m}")
        empty = np.flatnonzero(np.diff(self.matrix.indptr) == 0)
        if empty.size:
            raise ValueError(f"rows without entries: {empty.tolist()}")

    @property
    def dimension(self) -> int:
        return self.layout.size

    def entries(self) -> Iterator[Tuple[int, int, float]]:
        coo = self.matrix.tocoo()
        for i, j, w in zip(coo.row, coo.col, coo.data):
            yield int(i), int(j), float(w)

    def residual(self, z) -> np.ndarray:
        return self.matrix @ np.asarray(z, dtype=float) - self.rhs


@dataclass(frozen=True)
class LinearSolution:
    values: np.ndarray
    rcond: float


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    """Computed solution with its discrete derivatives.

    ``d2``, ``d3``, ``d4`` carry the closure values in their endpoint slots;
    ``u`` and ``p`` carry the prescribed boundary data.
    """

    u: GridFunction
    p: GridFunction
    d2: GridFunction
    d3: GridFunction
    d4: GridFunction
    left: BoundaryTriple
    right: BoundaryTriple
    rcond: float

    @property
    def grid(self):
        return self.u.grid

    @property
    def fields(self) -> dict:
        return {"u": self.u, "d1": self.p, "d2": self.d2, "d3": self.d3, "d4": self.d4}

    @property
    def norm_d4(self) -> float:
        return norm_h(self.d4)


def _coefficient_samples(coeffs: CoefficientSet, grid):
    out = {}
    for name in ("A", "Aprime", "B", "D", "H", "f"):
        try:
            out[name] = sample(getattr(coeffs, name), grid).v
        except SampleError as exc:
            raise AssemblyError(f"coefficient {name}: {exc}") from exc
    return out


def assemble(spec: ProblemSpec) -> SparseSystem:
    grid, coeffs, bd = spec.grid, spec.coeffs, spec.boundary
    n = grid.n
    # sampling first turns evaluation failures into AssemblyError; the
    # closure check then runs before any matrix work
    c = _coefficient_samples(coeffs, grid)
    closure_matrix(coeffs, grid, "left")
    closure_matrix(coeffs, grid, "right")
    mats = operator_matrices(grid)
    lay = mats.layout

    def diag(v):
        return sp.diags(v)

    scheme = (
        mats.d4
        + diag(c["D"]) @ mats.d3
        + diag(c["A"]) @ mats.d2
        + diag(c["Aprime"] + c["H"]) @ mats.p
        + diag(c["B"]) @ mats.u
    )[1:n]
    simpson = mats.simpson[1:n]
    left, t_left = closure_rows_extended(coeffs, grid, "left")
    right, t_right = closure_rows_extended(coeffs, grid, "right")
    M = sp.vstack([scheme, simpson, left, right], format="csr")
    target = np.concatenate([c["f"][1:n], np.zeros(n - 1), t_left, t_right])

    known = np.zeros(lay.ext_size)
    known[lay.ext_known] = (bd.u_left, bd.u_right, bd.du_left, bd.du_right)
    rhs = target - M @ known
    keep = lay.ext_to_unknown >= 0
    A = M[:, keep].tocsr()
    A.eliminate_zeros()
    A.sort_indices()
    return SparseSystem(A, rhs, lay)


def _equilibrate(A):
    """Row then column max-norm scaling: returns ``(R, C)`` with ``R A C`` balanced."""
    A = sp.csr_matrix(A)
    row = abs(A).max(axis=1).toarray().ravel()
    if np.any(row == 0):
        raise SingularSystem("matrix has an all-zero row", rcond=0.0)
    R = 1.0 / row
    AR = sp.diags(R) @ A
    col = abs(AR).max(axis=0).toarray().ravel()
    if np.any(col == 0):
        raise SingularSystem("matrix has an all-zero column", rcond=0.0)
    C = 1.0 / col
    return R, C


def solve(system: SparseSystem, method: str = "sparse") -> LinearSolution:
    """Direct solve of the assembled system.

    ``method="sparse"`` uses a sparse LU factorisation (SuperLU) and a
    deterministic one-norm estimate of the inverse for the reciprocal
    condition number. ``method="dense"`` (``n <= DENSE_LIMIT``) uses LAPACK and
    the exact one-norm condition number; it exists as a cross-check.
    """
    R, C = _equilibrate(system.matrix)
    As = (sp.diags(R) @ system.matrix @ sp.diags(C)).tocsc()
    b = R * system.rhs
    anorm = spla.norm(As, 1)

    if method == "sparse":
        try:
            lu = spla.splu(As, permc_spec="COLAMD")
        except RuntimeError as exc:
            raise SingularSystem(f"sparse factorisation failed: {exc}", rcond=0.0) from exc
        m = As.shape[0]
        inv = spla.LinearOperator(
            (m, m),
            matvec=lambda v: lu.solve(np.asarray(v, dtype=float).ravel()),
            rmatvec=lambda v: lu.solve(np.asarray(v, dtype=float).ravel(), trans="T"),
            dtype=float,
        )
        ainv_norm = spla.onenormest(inv, t=1)
        y = lu.solve(b)
        # one refinement step against the same factors
        y = y + lu.solve(b - As @ y)
    elif method == "dense":
        if system.layout.n > DENSE_LIMIT:
            raise ValueError(f"dense path is limited to n <= {DENSE_LIMIT}")
        Ad = As.toarray()
        try:
            lu_piv = sla.lu_factor(Ad, check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SingularSystem(f"dense factorisation failed: {exc}", rcond=0.0) from exc
        if np.any(np.diag(lu_piv[0]) == 0):
            raise SingularSystem("dense factorisation hit a zero pivot", rcond=0.0)
        ainv_norm = np.linalg.norm(np.linalg.inv(Ad), 1)
        y = sla.lu_solve(lu_piv, b)
        y = y + sla.lu_solve(lu_piv, b - Ad @ y)
    else:
        raise ValueError(f"unknown method {method!r}")

    rcond = float(1.0 / (anorm * ainv_norm)) if ainv_norm > 0 else 0.0
    if not np.all(np.isfinite(y)):
        raise SingularSystem("solution is not finite", rcond=rcond)
    if not rcond >= RCOND_MIN:
        raise SingularSystem(f"reciprocal condition {rcond:.3e} below {RCOND_MIN:.0e}", rcond=rcond)
    return LinearSolution(C * y, rcond)


def _triple_close(solved: BoundaryTriple, redone: BoundaryTriple, tol: np.ndarray) -> bool:
    diff = np.abs(solved.as_array() - redone.as_array())
    return bool(np.all(diff <= tol))


def solve_bvp(spec: ProblemSpec, method: str = "sparse") -> DiscreteSolution:
    """Assemble, solve and unpack into a :class:`DiscreteSolution`.

    The derived fields are recomputed from ``(u, p)`` and the closure values
    are re-derived from the direct closure solve; a mismatch raises
    :class:`~compactbvp.errors.SelfConsistencyError`.
    """
    grid, bd = spec.grid, spec.boundary
    system = assemble(spec)
    sol = solve(system, method=method)
    lay = system.layout
    z = sol.values

    u = np.empty(grid.n + 1)
    p = np.empty(grid.n + 1)
    u[1:-1], p[1:-1] = z[lay.u_block], z[lay.p_block]
    u[0], u[-1] = bd.u_left, bd.u_right
    p[0], p[-1] = bd.du_left, bd.du_right
    closure = z[lay.closure_block]
    left = BoundaryTriple(*closure[:3])
    right = BoundaryTriple(*closure[3:])

    ug, pg = GridFunction(grid, u), GridFunction(grid, p)
    ext = lay.extend(z, bd.u_left, bd.u_right, bd.du_left, bd.du_right)
    d2, d3, d4 = compact_derivatives(
        ug, pg, (left.d2, right.d2), (left.d3, right.d3), (left.d4, right.d4)
    )

    for side, solved in (("left", left), ("right", right)):
        redone = close_boundary(ug, pg, spec.coeffs, side)
        j = slice(0, 4) if side == "left" else slice(-4, None)
        near = np.array(
            [
                max(abs(solved.d2), np.max(np.abs(d2.v[j]))),
                max(abs(solved.d3), np.max(np.abs(d3.v[j]))),
                max(abs(solved.d4), np.max(np.abs(d4.v[j]))),
            ]
        )
        # closure rows carry O(h^-4) weights on u; their backward error
        # mapped through alpha^-1 bounds the roundoff on fine grids
        rows, target = closure_rows_extended(spec.coeffs, grid, side)
        inv = closure_matrix(spec.coeffs, grid, side).inverse()
        backward = np.abs(inv) @ (abs(rows) @ np.abs(ext) + np.abs(target))
        if not _triple_close(solved, redone, CONSISTENCY_RTOL * near + CONSISTENCY_ROUNDOFF * _EPS * backward):
            raise SelfConsistencyError(
                f"{side} closure values {solved} disagree with re-derivation {redone}"
            )

    log.debug("solved n=%d rcond=%.3e", grid.n, sol.rcond)
    return DiscreteSolution(ug, pg, d2, d3, d4, left, right, sol.rcond)


# re-exported for convenience
__all__ += ["BoundaryData", "SolvabilityViolation"]
