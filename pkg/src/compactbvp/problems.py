"""Benchmark problems with known exact solutions.

``problem1``
    constant coefficients on ``[0.3, 1.4]``, ``u = exp(x) cos(2 pi x)``,
    non-homogeneous boundary data.
``problem2``
    oscillatory coefficients on ``[0, 1]``,
    ``u = x^2 (1-x)^2 sin(1 / ((x - 1/2)^2 + eps))``, homogeneous data.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .grid import Grid
from .model import BoundaryData, CoefficientSet, ExactSolution, ProblemSpec, constant

__all__ = [
    "Problem",
    "manufactured_rhs",
    "problem1",
    "problem2",
    "polynomial_exact",
    "polynomial_problem",
    "zero_problem",
    "PROBLEMS",
    "get_problem",
    "PROBLEM1_REFERENCE_BOUNDARY",
]


@dataclass(frozen=True)
class Problem:
    """A named problem: interval, coefficients (with ``f``) and exact solution."""

    name: str
    a: float
    b: float
    coeffs: CoefficientSet
    exact: Optional[ExactSolution]
    boundary: BoundaryData

    def grid(self, n: int) -> Grid:
        return Grid(self.a, self.b, n)

    def spec(self, n: int) -> ProblemSpec:
        return ProblemSpec(self.grid(n), self.coeffs, self.boundary)

    __call__ = spec


def manufactured_rhs(exact: ExactSolution, coeffs: CoefficientSet) -> Callable:
    """``f = u'''' + D u''' + A u'' + (A' + H) u' + B u`` evaluated pointwise."""

    def f(x):
        u0, u1, u2, u3, u4 = exact.derivatives(x)
        return (
            u4
            + coeffs.D(x) * u3
            + coeffs.A(x) * u2
            + (coeffs.Aprime(x) + coeffs.H(x)) * u1
            + coeffs.B(x) * u0
        )

    return f


# ---------------------------------------------------------------------------
# problem 1
# ---------------------------------------------------------------------------

PROBLEM1_REFERENCE_BOUNDARY = BoundaryData(-0.417129, -8.48343, -3.28073, -18.2572)
_P1 = dict(D=10.0, A=1e2, H=1e3, B=1e4)


def _problem1_exact() -> ExactSolution:
    tp = 2.0 * np.pi
    pi2 = np.pi**2

    def u(x):
        return np.exp(x) * np.cos(tp * x)

    def u1(x):
        return np.exp(x) * (np.cos(tp * x) - tp * np.sin(tp * x))

    def u2(x):
        return np.exp(x) * ((1 - 4 * pi2) * np.cos(tp * x) - 4 * np.pi * np.sin(tp * x))

    def u3(x):
        return np.exp(x) * ((1 - 12 * pi2) * np.cos(tp * x) + tp * (4 * pi2 - 3) * np.sin(tp * x))

    def u4(x):
        return np.exp(x) * (
            (1 - 24 * pi2 + 16 * pi2**2) * np.cos(tp * x) + 8 * np.pi * (4 * pi2 - 1) * np.sin(tp * x)
        )

    return ExactSolution(u, u1, u2, u3, u4)


def problem1_closed_form_rhs(D=_P1["D"], A=_P1["A"], H=_P1["H"], B=_P1["B"]) -> Callable:
    """Closed-form forcing for ``u = exp(x) cos(2 pi x)`` with constant coefficients."""
    pi2 = np.pi**2
    cos_c = 1 - 24 * pi2 + 16 * pi2**2 + D * (1 - 12 * pi2) + A * (1 - 4 * pi2) + H + B
    sin_c = 4 - 16 * pi2 + D * (3 - 4 * pi2) + 2 * A + H

    def f(x):
        return (np.cos(2 * np.pi * x) * cos_c - 2 * np.pi * np.sin(2 * np.pi * x) * sin_c) * np.exp(x)

    return f


def problem1(**overrides: float) -> Problem:
    """Constant coefficients ``D=10, A=100, H=1000, B=1e4`` on ``[0.3, 1.4]``.

    Keyword overrides replace any of the four constants; the forcing follows
    so that ``exp(x) cos(2 pi x)`` stays the exact solution.
    """
    unknown = set(overrides) - set(_P1)
    if unknown:
        raise ValueError(f"problem1 has no coefficient(s) {sorted(unknown)}")
    k = {**_P1, **{key: float(v) for key, v in overrides.items()}}
    coeffs = CoefficientSet(
        A=constant(k["A"]),
        Aprime=constant(0.0),
        B=constant(k["B"]),
        D=constant(k["D"]),
        H=constant(k["H"]),
        f=problem1_closed_form_rhs(**k),
    )
    exact = _problem1_exact()
    a, b = 0.3, 1.4
    return Problem("problem1", a, b, coeffs, exact, BoundaryData.from_exact(exact, a, b))


# ---------------------------------------------------------------------------
# problem 2
# ---------------------------------------------------------------------------

_P2_EPS = 1.0 / 40.0
_P2_ALPHA, _P2_BETA, _P2_GAMMA = 1e4, 1e8, 1e2
_P2_K = 40.0 * np.pi


def _problem2_derivatives(x, eps=_P2_EPS):
    """``u = p(x) sin(g(x))`` and four derivatives via Leibniz and Faa di Bruno.

    ``p = x^2 (1-x)^2``, ``g = 1/w``, ``w = (x - 1/2)^2 + eps``.
    """
    x = np.asarray(x, dtype=float)
    p = (
        x**2 - 2 * x**3 + x**4,
        2 * x - 6 * x**2 + 4 * x**3,
        2 - 12 * x + 12 * x**2,
        -12 + 24 * x,
        np.full_like(x, 24.0),
    )
    w = (x - 0.5) ** 2 + eps
    w1 = 2.0 * (x - 0.5)
    g1 = -w1 / w**2
    g2 = -2.0 / w**2 + 2.0 * w1**2 / w**3
    g3 = 12.0 * w1 / w**3 - 6.0 * w1**3 / w**4
    g4 = 24.0 / w**3 - 72.0 * w1**2 / w**4 + 24.0 * w1**4 / w**5
    S, C = np.sin(1.0 / w), np.cos(1.0 / w)
    s = (
        S,
        C * g1,
        -S * g1**2 + C * g2,
        -C * g1**3 - 3 * S * g1 * g2 + C * g3,
        S * g1**4 - 6 * C * g1**2 * g2 - 3 * S * g2**2 - 4 * S * g1 * g3 + C * g4,
    )
    return tuple(sum(comb(k, i) * p[i] * s[k - i] for i in range(k + 1)) for k in range(5))


def _problem2_exact() -> ExactSolution:
    return ExactSolution(*(lambda x, k=k: _problem2_derivatives(x)[k] for k in range(5)))


def problem2(**overrides: float) -> Problem:
    """Oscillatory coefficients on ``[0, 1]``; forcing is manufactured from ``u``."""
    if overrides:
        raise ValueError(f"problem2 has no constant coefficients to override: {sorted(overrides)}")
    alpha, beta, gamma, k = _P2_ALPHA, _P2_BETA, _P2_GAMMA, _P2_K
    coeffs = CoefficientSet(
        A=lambda x: alpha * (1.0 + 0.5 * np.sin(k * x)),
        Aprime=lambda x: 20.0 * np.pi * alpha * np.cos(k * x),
        B=lambda x: beta * np.sin(k * x),
        D=lambda x: gamma * np.cos(k * x),
        H=constant(0.0),
    )
    exact = _problem2_exact()

    def f(x):
        u0, u1, u2, u3, u4 = _problem2_derivatives(x)
        return u4 + coeffs.D(x) * u3 + coeffs.A(x) * u2 + coeffs.Aprime(x) * u1 + coeffs.B(x) * u0

    return Problem("problem2", 0.0, 1.0, replace(coeffs, f=f), exact, BoundaryData())


# ---------------------------------------------------------------------------
# manufactured polynomial problems
# ---------------------------------------------------------------------------

def polynomial_exact(coefficients: Sequence[float]) -> ExactSolution:
    """Exact solution for a polynomial given by ascending coefficients."""
    poly = np.polynomial.Polynomial(np.asarray(coefficients, dtype=float))
    ders = [poly] + [poly.deriv(k) for k in range(1, 5)]
    return ExactSolution(*(lambda x, q=q: q(np.asarray(x, dtype=float)) for q in ders))


def polynomial_problem(
    coefficients: Sequence[float],
    a: float = 0.0,
    b: float = 1.0,
    coeffs: Optional[CoefficientSet] = None,
    name: str = "polynomial",
) -> Problem:
    """Manufactured problem with a polynomial exact solution and exact boundary data."""
    exact = polynomial_exact(coefficients)
    coeffs = coeffs or CoefficientSet.constants()
    coeffs = coeffs.with_rhs(manufactured_rhs(exact, coeffs))
    return Problem(name, a, b, coeffs, exact, BoundaryData.from_exact(exact, a, b))


def zero_problem(a: float = 0.0, b: float = 1.0, coeffs: Optional[CoefficientSet] = None) -> Problem:
    """``f = 0`` with homogeneous data; the exact solution is zero."""
    return polynomial_problem([0.0], a, b, coeffs, name="zero")


PROBLEMS: Dict[str, Callable[..., Problem]] = {
    "problem1": problem1,
    "problem2": problem2,
}


def get_problem(name: str, **overrides: float) -> Problem:
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(PROBLEMS)}") from None
    return factory(**overrides)
