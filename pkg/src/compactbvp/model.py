"""Plain data types describing a boundary-value problem.

The equation is

    u'''' + D u''' + A u'' + (A' + H) u' + B u = f    on [a, b]

with u and u' prescribed at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .grid import Grid

__all__ = ["constant", "CoefficientSet", "ExactSolution", "BoundaryData", "ProblemSpec"]

Func = Callable[[np.ndarray], np.ndarray]


def constant(value: float) -> Func:
    """Vectorised constant function."""
    value = float(value)

    def const(x):
        return np.full(np.shape(x), value) if np.ndim(x) else value

    const.value = value
    return const


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficient functions of the operator plus the right-hand side.

    ``Aprime`` must be the analytic derivative of ``A``; nothing here
    differentiates numerically.
    """

    A: Func
    Aprime: Func
    B: Func
    D: Func
    H: Func
    f: Optional[Func] = None

    @classmethod
    def constants(cls, A=0.0, B=0.0, D=0.0, H=0.0, f=None) -> "CoefficientSet":
        return cls(constant(A), constant(0.0), constant(B), constant(D), constant(H), f)

    def with_rhs(self, f: Func) -> "CoefficientSet":
        return replace(self, f=f)

    def at(self, x: float) -> dict:
        """Scalar values of all coefficients (and f, when set) at ``x``."""
        x = float(x)
        out = {
            "A": float(self.A(x)),
            "Aprime": float(self.Aprime(x)),
            "B": float(self.B(x)),
            "D": float(self.D(x)),
            "H": float(self.H(x)),
        }
        if self.f is not None:
            out["f"] = float(self.f(x))
        return out


@dataclass(frozen=True)
class ExactSolution:
    """A solution and its derivatives through order four."""

    u: Func
    u1: Func
    u2: Func
    u3: Func
    u4: Func

    def derivative(self, k: int) -> Func:
        return (self.u, self.u1, self.u2, self.u3, self.u4)[k]

    def derivatives(self, x) -> tuple:
        return tuple(np.asarray(g(x), dtype=float) for g in (self.u, self.u1, self.u2, self.u3, self.u4))


@dataclass(frozen=True)
class BoundaryData:
    """Prescribed ``u(a), u'(a), u(b), u'(b)``."""

    u_left: float = 0.0
    du_left: float = 0.0
    u_right: float = 0.0
    du_right: float = 0.0

    def __post_init__(self):
        for name in ("u_left", "du_left", "u_right", "du_right"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"boundary value {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_exact(cls, exact: ExactSolution, a: float, b: float) -> "BoundaryData":
        return cls(float(exact.u(a)), float(exact.u1(a)), float(exact.u(b)), float(exact.u1(b)))


@dataclass(frozen=True)
class ProblemSpec:
    grid: Grid
    coeffs: CoefficientSet
    boundary: BoundaryData = BoundaryData()

    def __post_init__(self):
        if self.coeffs.f is None:
            raise ValueError("ProblemSpec needs a right-hand side f")
