"""Index bookkeeping for the coupled linear system.

Two coordinate spaces are used:

* the *extended* space holds every nodal value, known or not:
  ``u_0..u_n``, ``p_0..p_n`` and the six closure values
  ``(d2, d3, d4)`` at the left then the right endpoint;
* the *unknown* space drops the four prescribed values ``u_0, u_n, p_0, p_n``.
  It is ordered as interior ``u``, interior ``p``, then the closure block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CLOSURE_ORDERS = (2, 3, 4)
SIDES = ("left", "right")


@dataclass(frozen=True)
class UnknownLayout:
    n: int

    # extended space -------------------------------------------------------
    @property
    def ext_size(self) -> int:
        return 2 * (self.n + 1) + 6

    def ext_u(self, j: int) -> int:
        return j

    def ext_p(self, j: int) -> int:
        return self.n + 1 + j

    def ext_closure(self, side: str, order: int) -> int:
        return 2 * (self.n + 1) + 3 * SIDES.index(side) + CLOSURE_ORDERS.index(order)

    @property
    def ext_known(self) -> np.ndarray:
        """Extended indices of u_0, u_n, p_0, p_n (in that order)."""
        n = self.n
        return np.array([self.ext_u(0), self.ext_u(n), self.ext_p(0), self.ext_p(n)])

    # unknown space --------------------------------------------------------
    @property
    def size(self) -> int:
        return 2 * (self.n - 1) + 6

    @property
    def u_block(self) -> slice:
        return slice(0, self.n - 1)

    @property
    def p_block(self) -> slice:
        return slice(self.n - 1, 2 * self.n - 2)

    @property
    def closure_block(self) -> slice:
        return slice(2 * self.n - 2, 2 * self.n + 4)

    def u_index(self, j: int) -> int:
        if not 1 <= j <= self.n - 1:
            raise IndexError(f"u_{j} is not an unknown")
        return j - 1

    def p_index(self, j: int) -> int:
        if not 1 <= j <= self.n - 1:
            raise IndexError(f"p_{j} is not an unknown")
        return self.n - 2 + j

    def closure_index(self, side: str, order: int) -> int:
        return 2 * self.n - 2 + 3 * SIDES.index(side) + CLOSURE_ORDERS.index(order)

    @property
    def ext_to_unknown(self) -> np.ndarray:
        """Map extended index -> unknown index, -1 for prescribed values."""
        out = np.full(self.ext_size, -1, dtype=np.int64)
        keep = np.setdiff1d(np.arange(self.ext_size), self.ext_known)
        out[keep] = np.arange(keep.size)
        return out

    def pack(self, u, p, left, right) -> np.ndarray:
        """Unknown vector from full nodal arrays and two closure triples."""
        z = np.empty(self.size)
        z[self.u_block] = np.asarray(u, dtype=float)[1:-1]
        z[self.p_block] = np.asarray(p, dtype=float)[1:-1]
        z[self.closure_block] = np.concatenate([np.asarray(left, float), np.asarray(right, float)])
        return z

    def extend(self, z, u_left, u_right, p_left, p_right) -> np.ndarray:
        """Extended vector from unknowns plus the four prescribed values."""
        z = np.asarray(z, dtype=float)
        full = np.empty(self.ext_size)
        full[self.ext_known] = (u_left, u_right, p_left, p_right)
        full[self.ext_to_unknown >= 0] = z
        return full
