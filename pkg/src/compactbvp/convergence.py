"""Grid-convergence studies.

A *truncation* study applies the discrete operators to samples of an exact
solution; an *accuracy* study compares solver output with those samples.
Both produce a :class:`ConvergenceReport` holding per-``n`` error norms for
the five fields ``u, d1, d2, d3, d4`` and rates between consecutive grids.
Per-node rates between two nested grids come from :func:`pointwise_rates`.

Error norms include the endpoint slots by default for accuracy studies and
exclude them for truncation studies, where the endpoint slots only echo the
closure and would otherwise dominate the low-order fields.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .calculus import EndpointPair, compact_derivatives, hermitian_derivative
from .closure import close_boundary
from .grid import Grid, GridFunction, norm_h, norm_sup, sample
from .model import CoefficientSet, ExactSolution
from .solver import solve_bvp

__all__ = [
    "FIELDS",
    "EXACT_THRESHOLD",
    "ErrorRecord",
    "RateRecord",
    "PointwiseRate",
    "FieldErrors",
    "ConvergenceReport",
    "rate",
    "truncation_errors",
    "accuracy_errors",
    "truncation_study",
    "accuracy_study",
    "pointwise_rates",
]

FIELDS = ("u", "d1", "d2", "d3", "d4")
NORMS = ("l2h", "sup")
EXACT_THRESHOLD = 1e-15


@dataclass(frozen=True)
class ErrorRecord:
    n: int
    field: str
    norm_h: float
    norm_sup: float

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"unknown field {self.field!r}")
        if not (self.norm_h >= 0 and self.norm_sup >= 0):
            raise ValueError("error norms must be non-negative")


@dataclass(frozen=True)
class RateRecord:
    """Observed order between grids ``n1 < n2``; ``None`` marks the exactness regime."""

    n1: int
    n2: int
    field: str
    rate_h: Optional[float]
    rate_sup: Optional[float]


@dataclass(frozen=True)
class PointwiseRate:
    x: float
    j: int
    field: str
    slope: Optional[float]

    @property
    def exact(self) -> bool:
        return self.slope is None


@dataclass(frozen=True, eq=False)
class FieldErrors:
    """Signed nodal errors of every field on one grid."""

    grid: Grid
    errors: Dict[str, GridFunction]

    def record(self, name: str, include_endpoints: bool = True) -> ErrorRecord:
        e = self.errors[name]
        if not include_endpoints:
            e = e.with_endpoints(0.0, 0.0)
        return ErrorRecord(self.grid.n, name, norm_h(e), norm_sup(e))


@dataclass(frozen=True)
class ConvergenceReport:
    kind: str
    problem: str
    ns: Tuple[int, ...]
    records: Tuple[ErrorRecord, ...]
    rates: Tuple[RateRecord, ...]
    pointwise: Tuple[PointwiseRate, ...] = field(default=())
    include_endpoints: bool = True

    def error(self, n: int, name: str, norm: str = "l2h") -> float:
        for r in self.records:
            if r.n == n and r.field == name:
                return r.norm_h if norm == "l2h" else r.norm_sup
        raise KeyError((n, name))

    def rate(self, n1: int, n2: int, name: str, norm: str = "l2h") -> Optional[float]:
        for r in self.rates:
            if (r.n1, r.n2, r.field) == (n1, n2, name):
                return r.rate_h if norm == "l2h" else r.rate_sup
        raise KeyError((n1, n2, name))

    def errors(self, name: str, norm: str = "l2h") -> List[float]:
        return [self.error(n, name, norm) for n in self.ns]

    def slope_at(self, j: int, name: str) -> Optional[float]:
        for r in self.pointwise:
            if r.j == j and r.field == name:
                return r.slope
        raise KeyError((j, name))


def rate(e1: float, e2: float, n1: int, n2: int) -> Optional[float]:
    """``log(e1 / e2) / log(n2 / n1)``, or ``None`` if either error is at roundoff level."""
    if not n2 > n1:
        raise ValueError(f"rate needs n2 > n1, got {n1}, {n2}")
    if e1 < 0 or e2 < 0:
        raise ValueError("errors must be non-negative")
    if e1 <= EXACT_THRESHOLD or e2 <= EXACT_THRESHOLD:
        return None
    return math.log(e1 / e2) / math.log(n2 / n1)


def _validate_ns(ns: Sequence[int]) -> Tuple[int, ...]:
    ns = tuple(int(n) for n in ns)
    if not ns:
        raise ValueError("need at least one grid size")
    if any(n < 4 for n in ns):
        raise ValueError(f"grid sizes must be >= 4, got {ns}")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"grid sizes must be strictly ascending, got {ns}")
    return ns


def _exact_samples(exact: ExactSolution, grid: Grid) -> List[GridFunction]:
    return [sample(exact.derivative(k), grid) for k in range(5)]


def truncation_errors(exact: ExactSolution, coeffs: CoefficientSet, grid: Grid) -> FieldErrors:
    """Operators applied to exact samples, minus exact derivatives.

    ``p`` uses the exact endpoint derivatives; the endpoint slots of the
    higher derivatives come from the closure solved on the exact samples
    with the exact forcing.
    """
    ex = _exact_samples(exact, grid)
    u = ex[0]
    p = hermitian_derivative(u, EndpointPair(ex[1].v[0], ex[1].v[-1]))
    left = close_boundary(u, p, coeffs, "left")
    right = close_boundary(u, p, coeffs, "right")
    d2, d3, d4 = compact_derivatives(
        u, p, (left.d2, right.d2), (left.d3, right.d3), (left.d4, right.d4)
    )
    approx = (u, p, d2, d3, d4)
    return FieldErrors(grid, {name: a - e for name, a, e in zip(FIELDS, approx, ex)})


def accuracy_errors(problem, n: int) -> FieldErrors:
    """Solver output on ``n`` cells minus exact derivative samples."""
    sol = solve_bvp(problem.spec(n))
    ex = _exact_samples(problem.exact, sol.grid)
    return FieldErrors(sol.grid, {name: sol.fields[name] - e for name, e in zip(FIELDS, ex)})


def _run(fn: Callable[[int], FieldErrors], ns: Tuple[int, ...], workers: Optional[int]) -> List[FieldErrors]:
    workers = workers or min(len(ns), os.cpu_count() or 1)
    if workers <= 1:
        return [fn(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so the reduction below is deterministic
        return list(pool.map(fn, ns))


def _report(kind, problem, results: Sequence[FieldErrors], pointwise, include_endpoints: bool) -> ConvergenceReport:
    ns = tuple(r.grid.n for r in results)
    records = tuple(r.record(name, include_endpoints) for r in results for name in FIELDS)
    by_key = {(r.n, r.field): r for r in records}
    rates = []
    for n1, n2 in zip(ns, ns[1:]):
        for name in FIELDS:
            a, b = by_key[(n1, name)], by_key[(n2, name)]
            rates.append(
                RateRecord(n1, n2, name, rate(a.norm_h, b.norm_h, n1, n2), rate(a.norm_sup, b.norm_sup, n1, n2))
            )
    return ConvergenceReport(kind, problem, ns, records, tuple(rates), tuple(pointwise), include_endpoints)


def _pointwise_for(results: Sequence[FieldErrors], pair: Optional[Tuple[int, int]], align: str):
    if pair is None:
        return ()
    by_n = {r.grid.n: r for r in results}
    try:
        return pointwise_rates(by_n[pair[0]], by_n[pair[1]], align)
    except KeyError:
        raise ValueError(f"pointwise pair {pair} is not among the studied grids {sorted(by_n)}") from None


def truncation_study(
    exact: ExactSolution,
    coeffs: CoefficientSet,
    interval: Tuple[float, float],
    ns: Iterable[int],
    *,
    pointwise_pair: Optional[Tuple[int, int]] = None,
    pointwise_align: str = "nodes",
    name: str = "custom",
    include_endpoints: bool = False,
    workers: Optional[int] = None,
) -> ConvergenceReport:
    """Truncation errors and rates on ``Grid(*interval, n)`` for every ``n``."""
    ns = _validate_ns(ns)
    a, b = interval
    results = _run(lambda n: truncation_errors(exact, coeffs, Grid(a, b, n)), ns, workers)
    return _report("truncation", name, results, _pointwise_for(results, pointwise_pair, pointwise_align), include_endpoints)


def accuracy_study(
    problem,
    ns: Iterable[int],
    *,
    pointwise_pair: Optional[Tuple[int, int]] = None,
    pointwise_align: str = "nodes",
    include_endpoints: bool = True,
    workers: Optional[int] = None,
) -> ConvergenceReport:
    """Solver errors and rates for a :class:`~compactbvp.problems.Problem`."""
    if problem.exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution")
    ns = _validate_ns(ns)
    results = _run(lambda n: accuracy_errors(problem, n), ns, workers)
    return _report("accuracy", problem.name, results, _pointwise_for(results, pointwise_pair, pointwise_align), include_endpoints)


def pointwise_rates(coarse: FieldErrors, fine: FieldErrors, align: str = "nodes") -> Tuple[PointwiseRate, ...]:
    """Per-node slopes between two nested grids, reported at the coarse nodes.

    ``align="nodes"`` compares errors at the same physical point (coarse
    node ``j`` against fine node ``r j``). ``align="index"`` compares the
    ``k``-th node from the nearer endpoint on both grids; this is the sense
    in which near-boundary stencil orders are stated, because ``x_1 = a + h``
    moves with ``h``.
    """
    gc, gf = coarse.grid, fine.grid
    if gf.n <= gc.n or gf.n % gc.n or gc.a != gf.a or gc.b != gf.b:
        raise ValueError(f"grids with n={gc.n} and n={gf.n} on the same interval are not nested")
    r = gf.n // gc.n
    j = np.arange(gc.n + 1)
    if align == "nodes":
        fine_j = r * j
    elif align == "index":
        fine_j = np.where(j <= gc.n // 2, j, gf.n - (gc.n - j))
    else:
        raise ValueError(f"align must be 'nodes' or 'index', got {align!r}")
    out = []
    for name in FIELDS:
        ec = np.abs(coarse.errors[name].v)
        ef = np.abs(fine.errors[name].v[fine_j])
        for k, x in enumerate(gc.nodes):
            out.append(PointwiseRate(float(x), k, name, rate(float(ec[k]), float(ef[k]), gc.n, gf.n)))
    return tuple(out)
