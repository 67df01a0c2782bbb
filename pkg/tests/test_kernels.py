import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from compactbvp import kernels
from compactbvp._pykernels import compact_derivatives as py_derivatives
from compactbvp._pykernels import hermitian_solve as py_hermitian
from compactbvp._pykernels import solve_tridiagonal as py_tridiagonal
from compactbvp.errors import ZeroPivot

BACKENDS = kernels.available_backends()


def test_backend_is_named():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_tridiagonal_matches_dense(name, rng):
    mod = BACKENDS[name]
    m = 17
    lo, up = rng.uniform(-1, 1, m), rng.uniform(-1, 1, m)
    dg = 3.0 + rng.uniform(0, 1, m)
    rhs = rng.standard_normal(m)
    x = mod.solve_tridiagonal(lo, dg, up, rhs)
    M = np.diag(dg) + np.diag(lo[1:], -1) + np.diag(up[:-1], 1)
    np.testing.assert_allclose(M @ x, rhs, atol=1e-13)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_tridiagonal_zero_pivot(name):
    with pytest.raises(ZeroPivot):
        BACKENDS[name].solve_tridiagonal([0, 1, 1], [0, 1, 1], [1, 1, 0], [1, 2, 3])


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_tridiagonal_length_mismatch(name):
    with pytest.raises(ValueError):
        BACKENDS[name].solve_tridiagonal([0, 1], [1, 1, 1], [1, 1, 0], [1, 2, 3])


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_kernels_accept_read_only_input(name):
    u = np.linspace(0, 1, 9)
    u.setflags(write=False)
    BACKENDS[name].hermitian_solve(u, 0.125, 0.0, 0.0)
    BACKENDS[name].compact_derivatives(u, u, 0.125, 0.0, 0.0)


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
@settings(max_examples=50, deadline=None)
@given(
    arrays(np.float64, st.integers(5, 40), elements=st.floats(-1e3, 1e3, allow_nan=False)),
    st.floats(1e-3, 1.0),
    st.floats(-10, 10),
    st.floats(-10, 10),
)
def test_backends_agree(u, h, left, right):
    c = BACKENDS["cython"]
    scale = 1.0 + np.max(np.abs(u)) / h + abs(left) + abs(right)
    np.testing.assert_allclose(c.hermitian_solve(u, h, left, right), py_hermitian(u, h, left, right), atol=1e-12 * scale)
    p = py_hermitian(u, h, left, right)
    for a, b in zip(c.compact_derivatives(u, p, h, left, right), py_derivatives(u, p, h, left, right)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.max(np.abs(b), initial=1.0))
    m = u.size
    args = (np.full(m, 1 / 6), np.full(m, 2 / 3), np.full(m, 1 / 6), u)
    np.testing.assert_allclose(c.solve_tridiagonal(*args), py_tridiagonal(*args), rtol=1e-12, atol=1e-12 * scale)
