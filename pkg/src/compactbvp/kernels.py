"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when importable; otherwise, or
when the environment variable ``COMPACTBVP_FORCE_PYTHON`` is set to a
non-empty value other than ``0``, the NumPy fallback ``_pykernels`` is used.
``BACKEND`` names the active choice.
"""

import os

from . import _pykernels

_force_python = os.environ.get("COMPACTBVP_FORCE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

solve_tridiagonal = _impl.solve_tridiagonal
hermitian_solve = _impl.hermitian_solve
compact_derivatives = _impl.compact_derivatives


def available_backends():
    """Mapping of backend name to kernel module, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
