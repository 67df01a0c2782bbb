import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from compactbvp.errors import GridMismatch, SampleError
from compactbvp.grid import Grid, GridFunction, inner_product, norm_h, norm_sup, norms, sample


def test_grid_nodes_exact_endpoints():
    g = Grid(0.3, 1.4, 7)
    assert g.nodes[0] == 0.3 and g.nodes[-1] == 1.4
    assert np.all(np.diff(g.nodes) > 0)
    assert g.h == pytest.approx(1.1 / 7)


@pytest.mark.parametrize("a,b,n", [(1.0, 1.0, 8), (1.0, 0.0, 8), (0.0, 1.0, 3), (0.0, 1.0, 4.5), (0.0, np.inf, 8)])
def test_grid_rejects_invalid(a, b, n):
    with pytest.raises(ValueError):
        Grid(a, b, n)


def test_grid_immutable():
    g = Grid(0.0, 1.0, 8)
    with pytest.raises(Exception):
        g.n = 16
    with pytest.raises(ValueError):
        g.nodes[1] = 5.0
    assert g.refine().n == 16


def test_grid_function_copies_and_freezes():
    g = Grid(0.0, 1.0, 4)
    raw = np.arange(5.0)
    u = GridFunction(g, raw)
    raw[0] = 99.0
    assert u[0] == 0.0
    with pytest.raises(ValueError):
        u.v[1] = 1.0
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(4))


def test_mixed_grid_arithmetic_is_detected():
    u = Grid(0.0, 1.0, 4).zeros()
    w = Grid(0.0, 1.0, 8).zeros()
    with pytest.raises(GridMismatch):
        u + w
    with pytest.raises(GridMismatch):
        inner_product(u, w)


def test_homogeneous_predicate():
    g = Grid(0.0, 1.0, 4)
    assert g.zeros().is_homogeneous()
    assert not GridFunction(g, [1, 0, 0, 0, 0]).is_homogeneous()
    assert GridFunction(g, [1, 2, 3, 4, 5]).with_endpoints(0, 0).is_homogeneous()


def test_sample_identity_and_zero():
    g = Grid(0.0, 1.0, 4)
    np.testing.assert_array_equal(sample(lambda x: x, g).v, [0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_array_equal(sample(lambda x: 0.0, g).v, np.zeros(5))


def test_sample_problem1_boundary_value():
    g = Grid(0.3, 1.4, 11)
    u = sample(lambda x: np.exp(x) * np.cos(2 * np.pi * x), g)
    assert f"{u[0]:.6g}" == "-0.417129"


def test_sample_scalar_only_function():
    g = Grid(0.0, 1.0, 4)
    u = sample(lambda x: math.sin(x), g)
    np.testing.assert_allclose(u.v, np.sin(g.nodes))


def test_sample_reports_offending_abscissa():
    g = Grid(0.0, 1.0, 4)
    with pytest.raises(SampleError) as info:
        sample(lambda x: 1.0 / (x - 0.5), g)
    assert info.value.x == 0.5


def test_inner_product_examples():
    g = Grid(0.0, 1.0, 10)
    one = sample(lambda x: 1.0, g)
    assert inner_product(one, one) == pytest.approx(1.1)
    assert inner_product(g.zeros(), one) == 0.0
    x = sample(lambda x: x, Grid(0.0, 1.0, 4))
    # 0.25 * (0 + 1/16 + 1/4 + 9/16 + 1)
    assert inner_product(x, x) == pytest.approx(0.46875, rel=1e-15)


def test_norm_examples():
    g = Grid(0.0, 1.0, 10)
    one = sample(lambda x: 1.0, g)
    assert norm_h(one) == pytest.approx(math.sqrt(1.1))
    assert norm_sup(one) == 1.0
    r = norms(g.zeros())
    assert (r.l2h, r.sup) == (0.0, 0.0)


def test_norm_of_constant_is_exact():
    for n in (4, 7, 64):
        g = Grid(0.0, 1.0, n)
        assert norm_h(sample(lambda x: 1.0, g)) ** 2 == pytest.approx(g.h * (n + 1), rel=1e-14)


vec = arrays(np.float64, 9, elements=st.floats(-1e3, 1e3, allow_nan=False))


@settings(max_examples=60, deadline=None)
@given(vec, vec, vec, st.floats(-10, 10), st.floats(-10, 10))
def test_inner_product_bilinear_symmetric(a, b, c, s, t):
    g = Grid(-1.0, 2.0, 8)
    u, v, w = (GridFunction(g, z) for z in (a, b, c))
    lhs = inner_product(s * u + t * v, w)
    rhs = s * inner_product(u, w) + t * inner_product(v, w)
    scale = (abs(s) * norm_h(u) + abs(t) * norm_h(v)) * norm_h(w) + 1e-300
    assert abs(lhs - rhs) <= 1e-13 * scale
    assert inner_product(u, w) == inner_product(w, u)


@settings(max_examples=60, deadline=None)
@given(vec)
def test_norm_identities(a):
    g = Grid(0.0, 1.0, 8)
    u = GridFunction(g, a)
    assert norm_h(u) ** 2 == pytest.approx(inner_product(u, u), rel=1e-12, abs=1e-300)
    assert norm_h(u) ** 2 == pytest.approx(g.h * np.sum(a**2), rel=1e-12, abs=1e-300)
    z = u.with_endpoints(0.0, 0.0)
    assert norm_h(z) ** 2 == pytest.approx(g.h * np.sum(a[1:-1] ** 2), rel=1e-12, abs=1e-300)
