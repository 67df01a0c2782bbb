import numpy as np
import pytest

from compactbvp.model import CoefficientSet, ExactSolution
from compactbvp.problems import (
    PROBLEM1_REFERENCE_BOUNDARY,
    PROBLEMS,
    get_problem,
    manufactured_rhs,
    polynomial_exact,
    polynomial_problem,
    problem1,
    problem2,
    zero_problem,
)


def test_problem1_closed_form_rhs_matches_manufactured(rng):
    prob = problem1()
    x = rng.uniform(prob.a, prob.b, 1000)
    reference = prob.coeffs.f(x)
    made = manufactured_rhs(prob.exact, prob.coeffs)(x)
    np.testing.assert_allclose(reference, made, rtol=1e-10, atol=1e-10 * np.abs(made).max())


def test_problem1_overrides_keep_exact_solution(rng):
    prob = problem1(D=-3.0, B=7.0)
    x = rng.uniform(prob.a, prob.b, 50)
    made = manufactured_rhs(prob.exact, prob.coeffs)(x)
    np.testing.assert_allclose(prob.coeffs.f(x), made, rtol=1e-10, atol=1e-10 * np.abs(made).max())
    with pytest.raises(ValueError):
        problem1(Q=1.0)


def test_problem1_boundary_values():
    prob = problem1()
    assert (prob.a, prob.b) == (0.3, 1.4)
    got = prob.boundary
    for name in ("u_left", "du_left", "u_right", "du_right"):
        want = getattr(PROBLEM1_REFERENCE_BOUNDARY, name)
        assert getattr(got, name) == pytest.approx(want, rel=5e-6)
    assert got.u_left == pytest.approx(-0.417129, abs=5e-7)


def test_problem1_fourth_derivative_at_zero():
    assert problem1().exact.u4(0.0) == pytest.approx(1 - 24 * np.pi**2 + 16 * np.pi**4, rel=1e-14)


def test_problem1_derivative_chain(rng):
    ex = problem1().exact
    x = rng.uniform(0.3, 1.4, 100)
    step = 1e-6
    for k in range(1, 5):
        fd = (ex.derivative(k - 1)(x + step) - ex.derivative(k - 1)(x - step)) / (2 * step)
        want = ex.derivative(k)(x)
        assert np.max(np.abs(fd - want)) <= 1e-6 * np.abs(want).max()


def test_problem2_homogeneous_boundary():
    prob = problem2()
    ex = prob.exact
    for x in (0.0, 1.0):
        assert ex.u(x) == 0.0 and ex.u1(x) == 0.0
    b = prob.boundary
    assert (b.u_left, b.du_left, b.u_right, b.du_right) == (0.0, 0.0, 0.0, 0.0)


def test_problem2_derivatives_against_finite_differences(rng):
    ex = problem2().exact
    x = rng.uniform(0.0, 1.0, 100)
    step = 1e-6
    for k in range(1, 5):
        fd = (ex.derivative(k - 1)(x + step) - ex.derivative(k - 1)(x - step)) / (2 * step)
        want = ex.derivative(k)(x)
        rel = np.abs(fd - want) / np.maximum(np.abs(want), 1e-3 * np.abs(want).max())
        assert rel.max() <= 1e-6, k


def test_problem2_coefficients():
    c = problem2().coeffs
    x = np.linspace(0, 1, 7)
    k = 40 * np.pi
    np.testing.assert_allclose(c.A(x), 1e4 * (1 + 0.5 * np.sin(k * x)))
    # the derivative of A is supplied analytically
    step = 1e-7
    np.testing.assert_allclose(c.Aprime(x), (c.A(x + step) - c.A(x - step)) / (2 * step), rtol=1e-5, atol=1e-2)
    np.testing.assert_allclose(c.B(x), 1e8 * np.sin(k * x), atol=1e-3)
    np.testing.assert_allclose(c.D(x), 1e2 * np.cos(k * x))
    assert not np.any(c.H(x))
    with pytest.raises(ValueError):
        problem2(A=1.0)


def test_problem2_term_balance():
    prob = problem2()
    x = prob.grid(512).nodes[1:-1]
    ratio = np.abs(prob.coeffs.B(x) * prob.exact.u(x)).max() / np.abs(prob.exact.u4(x)).max()
    assert 1e-2 <= ratio <= 1e2


def test_manufactured_rhs_trivial_cases():
    zero = CoefficientSet.constants()
    f = manufactured_rhs(polynomial_exact([1.0, 2.0, 0.0, -1.0, 0.5]), zero)
    np.testing.assert_allclose(f(np.linspace(0, 1, 5)), 24 * 0.5)
    nothing = ExactSolution(*(lambda x: 0 * x,) * 5)
    assert not np.any(manufactured_rhs(nothing, CoefficientSet.constants(A=3, B=4))(np.linspace(0, 1, 5)))


def test_polynomial_problem_boundary():
    prob = polynomial_problem([1.0, -1.0, 0.0, 0.0, 2.0], -1.0, 1.0)
    assert prob.boundary.u_left == pytest.approx(1 + 1 + 2)
    assert prob.boundary.du_right == pytest.approx(-1 + 8)
    assert zero_problem().exact.u(0.3) == 0.0


def test_registry():
    assert set(PROBLEMS) == {"problem1", "problem2"}
    assert get_problem("problem1", H=0.0).coeffs.H(0.5) == 0.0
    with pytest.raises(KeyError):
        get_problem("problem3")


def test_problem_spec_shape():
    spec = problem1().spec(32)
    assert spec.grid.n == 32 and spec.grid.h == pytest.approx(1.1 / 32)
    assert problem1()(16).grid.n == 16
