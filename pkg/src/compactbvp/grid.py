"""Uniform grids, grid functions and the discrete l2_h geometry."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import GridMismatch, SampleError

__all__ = [
    "Grid",
    "GridFunction",
    "NormReport",
    "sample",
    "inner_product",
    "norm_h",
    "norm_sup",
    "norms",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_j = a + j h`` on ``[a, b]`` with ``n`` cells."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.b > self.a:
            raise ValueError(f"need finite a < b, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < 4:
            raise ValueError(f"need an integer n >= 4, got {self.n}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.a + self.h * np.arange(self.n + 1, dtype=float)
        x[0] = self.a
        x[-1] = self.b
        x.setflags(write=False)
        return x

    def refine(self, factor: int = 2) -> "Grid":
        return Grid(self.a, self.b, self.n * factor)

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros(self.n + 1))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values ``v_j`` of a scalar function at the nodes of ``grid``.

    The value array is copied on construction and frozen, so instances can be
    shared freely.
    """

    grid: Grid
    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float, copy=True)
        if v.shape != (self.grid.n + 1,):
            raise ValueError(
                f"grid function needs {self.grid.n + 1} values, got shape {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def __len__(self):
        return self.v.shape[0]

    def __getitem__(self, j):
        return self.v[j]

    def __array__(self, dtype=None, copy=None):
        return self.v if dtype is None else self.v.astype(dtype)

    def _check(self, other: "GridFunction"):
        if self.grid != other.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.v + other.v)
        return GridFunction(self.grid, self.v + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.v - other.v)
        return GridFunction(self.grid, self.v - other)

    def __mul__(self, scalar):
        if isinstance(scalar, GridFunction):
            return NotImplemented
        return GridFunction(self.grid, self.v * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.v)

    def abs(self) -> "GridFunction":
        return GridFunction(self.grid, np.abs(self.v))

    def is_homogeneous(self) -> bool:
        """Membership in l2_{h,0}: both endpoint values vanish."""
        return self.v[0] == 0.0 and self.v[-1] == 0.0

    def with_endpoints(self, left: float, right: float) -> "GridFunction":
        v = self.v.copy()
        v[0], v[-1] = left, right
        return GridFunction(self.grid, v)


@dataclass(frozen=True)
class NormReport:
    l2h: float
    sup: float


def sample(f: Callable, grid: Grid) -> GridFunction:
    """Grid function ``f*_j = f(x_j)``.

    ``f`` is first called on the whole node array; if that fails the nodes
    are visited one by one so the error names the offending abscissa.
    """
    x = grid.nodes
    try:
        with np.errstate(divide="raise", over="raise", invalid="raise"):
            values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
        if np.all(np.isfinite(values)):
            return GridFunction(grid, values)
    except Exception:  # noqa: BLE001 - narrowed below node by node
        pass
    values = np.empty_like(x)
    for j, xj in enumerate(x):
        try:
            with np.errstate(divide="raise", over="raise", invalid="raise"):
                values[j] = float(f(float(xj)))
        except Exception as exc:
            raise SampleError(xj, exc) from exc
        if not np.isfinite(values[j]):
            raise SampleError(xj, ValueError(f"non-finite value {values[j]!r}"))
    return GridFunction(grid, values)


def inner_product(u: GridFunction, w: GridFunction) -> float:
    """``(u, w)_h = h * sum_{j=0}^{n} u_j w_j``."""
    u._check(w)
    return float(u.grid.h * np.dot(u.v, w.v))


def norm_h(u: GridFunction) -> float:
    return float(np.sqrt(inner_product(u, u)))


def norm_sup(u: GridFunction) -> float:
    return float(np.max(np.abs(u.v)))


def norms(u: GridFunction) -> NormReport:
    return NormReport(norm_h(u), norm_sup(u))
