import numpy as np
import pytest

from compactbvp import kernels

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Route every kernel call through one backend for the duration of a test."""
    mod = BACKENDS[request.param]
    for name in ("solve_tridiagonal", "hermitian_solve", "compact_derivatives"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
