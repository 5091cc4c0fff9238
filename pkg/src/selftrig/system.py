"""Constrained discrete-time linear system x(k+1) = A x(k) + B u(k)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotACSetError
from .polytope import HPolytope, bounding_box


@dataclass
class LinearSystem:
    """Dynamics (A, B) with polytopic state and input constraint C-sets.

    X and U must be bounded and contain the origin in their interiors;
    boundedness of X is what makes the set-enlargement loop terminate.
    """

    A: np.ndarray
    B: np.ndarray
    X: HPolytope
    U: HPolytope

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.atleast_2d(np.asarray(self.B, dtype=float))
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise DimensionError("A must be square")
        if self.B.shape[0] != n:
            raise DimensionError("B must have as many rows as A")
        if self.X.dim != n:
            raise DimensionError(f"X dimension {self.X.dim} != state dimension {n}")
        if self.U.dim != self.B.shape[1]:
            raise DimensionError(
                f"U dimension {self.U.dim} != input dimension {self.B.shape[1]}")
        if not self.X.is_cset:
            raise NotACSetError("X must contain the origin in its interior")
        if not self.U.is_cset:
            raise NotACSetError("U must contain the origin in its interior")
        bounding_box(self.X)
        bounding_box(self.U)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def step(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return self.A @ x + self.B @ u
