"""Compact Hermitian finite differences for fourth-order boundary-value problems.

Solves ``u'''' + D u''' + A u'' + (A' + H) u' + B u = f`` on ``[a, b]`` with
``u`` and ``u'`` prescribed at both ends, to fourth order in the mesh size.
"""

from .calculus import (
    EndpointPair,
    compact_derivatives,
    delta1,
    delta2,
    delta3,
    delta4,
    emit_stencils,
    hermitian_derivative,
    sigma,
    tilde_delta2,
)
from .closure import BoundaryTriple, close_boundary, closure_matrix, emit_closure_rows
from .convergence import (
    ConvergenceReport,
    accuracy_study,
    pointwise_rates,
    rate,
    truncation_study,
)
from .errors import (
    AssemblyError,
    CompactBVPError,
    GridMismatch,
    SampleError,
    SelfConsistencyError,
    SingularSystem,
    SolvabilityViolation,
    ZeroPivot,
)
from .grid import Grid, GridFunction, inner_product, norm_h, norm_sup, norms, sample
from .kernels import BACKEND
from .model import BoundaryData, CoefficientSet, ExactSolution, ProblemSpec, constant
from .problems import get_problem, manufactured_rhs, polynomial_problem, problem1, problem2
from .solver import DiscreteSolution, assemble, solve, solve_bvp

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AssemblyError",
    "BoundaryData",
    "BoundaryTriple",
    "CoefficientSet",
    "CompactBVPError",
    "ConvergenceReport",
    "DiscreteSolution",
    "EndpointPair",
    "ExactSolution",
    "Grid",
    "GridFunction",
    "GridMismatch",
    "ProblemSpec",
    "SampleError",
    "SelfConsistencyError",
    "SingularSystem",
    "SolvabilityViolation",
    "ZeroPivot",
    "accuracy_study",
    "assemble",
    "close_boundary",
    "closure_matrix",
    "compact_derivatives",
    "constant",
    "delta1",
    "delta2",
    "delta3",
    "delta4",
    "emit_closure_rows",
    "emit_stencils",
    "get_problem",
    "hermitian_derivative",
    "inner_product",
    "manufactured_rhs",
    "norm_h",
    "norm_sup",
    "norms",
    "pointwise_rates",
    "polynomial_problem",
    "problem1",
    "problem2",
    "rate",
    "sample",
    "sigma",
    "solve",
    "solve_bvp",
    "tilde_delta2",
    "truncation_study",
]
