"""Dense linear algebra helpers and a self-contained two-phase simplex solver.

Every optimization in the synthesis pipeline (set enlargement, input
selection, redundancy removal, containment tests) reduces to small dense
linear programs, so the solver favors determinism and robustness over
large-scale performance: Bland's rule for anti-cycling, no perturbation,
no warm starts. Identical inputs give bitwise-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

FEAS_TOL = 1e-9
SINGULAR_TOL = 1e-12
_PIVOT_TOL = 1e-11
_MAX_PIVOTS = 50000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """min c @ z  subject to  G @ z <= g  (and optionally A_eq @ z == b_eq).

    Variables are free (unrestricted in sign).
    """

    c: np.ndarray
    G: np.ndarray
    g: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.atleast_1d(np.asarray(self.c, dtype=float))
        self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
        self.g = np.atleast_1d(np.asarray(self.g, dtype=float))
        if self.A_eq is not None:
            self.A_eq = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
            self.b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float))
        n = self.c.shape[0]
        if self.G.shape[1] != n or self.G.shape[0] != self.g.shape[0]:
            raise DimensionError(
                f"constraint shape {self.G.shape} incompatible with "
                f"{n} variables / {self.g.shape[0]} bounds"
            )
        if self.A_eq is not None:
            if self.A_eq.shape[1] != n or self.A_eq.shape[0] != self.b_eq.shape[0]:
                raise DimensionError("equality rows incompatible with variable count")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.G))
                and np.all(np.isfinite(self.g))):
            raise ValueError("LP data must be finite")


@dataclass
class LpOutcome:
    status: str
    x: np.ndarray | None
    value: float

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _bland(T: np.ndarray, basis: list[int], rc_tol: float) -> str:
    """Run simplex iterations on tableau T in place until optimal/unbounded.

    Bland's rule: entering = smallest column index with reduced cost < -rc_tol,
    leaving = among minimum-ratio rows, the one whose basic variable index is
    smallest. Guarantees termination on degenerate problems.
    """
    m = T.shape[0] - 1
    for _ in range(_MAX_PIVOTS):
        reduced = T[-1, :-1]
        neg = np.nonzero(reduced < -rc_tol)[0]
        if neg.size == 0:
            return OPTIMAL
        col = int(neg[0])
        colvals = T[:m, col]
        rows = np.nonzero(colvals > _PIVOT_TOL)[0]
        if rows.size == 0:
            return UNBOUNDED
        ratios = T[rows, -1] / colvals[rows]
        best = ratios.min()
        ties = rows[ratios == best]
        row = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, row, col)
        basis[row] = col
    raise RuntimeError("simplex exceeded pivot limit")


def lp_solve(lp: LinearProgram, feas_tol: float = FEAS_TOL) -> LpOutcome:
    """Solve an LP with free variables by two-phase simplex.

    Returns an LpOutcome whose optimizer (when optimal) satisfies all
    constraints within feas_tol. Infeasible means no point satisfies the
    constraints within feas_tol.
    """
    n = lp.c.shape[0]
    G, g = lp.G, lp.g
    n_ineq = G.shape[0]
    if lp.A_eq is not None:
        rows = np.vstack([G, lp.A_eq])
        rhs = np.concatenate([g, lp.b_eq])
        is_ineq = np.concatenate([np.ones(n_ineq, bool), np.zeros(lp.A_eq.shape[0], bool)])
    else:
        rows = G
        rhs = g
        is_ineq = np.ones(n_ineq, bool)
    m = rows.shape[0]

    # Standard form: z = zp - zn with zp, zn >= 0, one slack per inequality.
    n_std = 2 * n + n_ineq
    A = np.zeros((m, n_std))
    A[:, :n] = rows
    A[:, n:2 * n] = -rows
    slack_col = {}
    k = 0
    for i in range(m):
        if is_ineq[i]:
            A[i, 2 * n + k] = 1.0
            slack_col[i] = 2 * n + k
            k += 1
    b = rhs.astype(float).copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Initial basis: slacks with +1 coefficient; artificials elsewhere.
    basis = [-1] * m
    art_rows = []
    for i in range(m):
        if is_ineq[i] and not flip[i]:
            basis[i] = slack_col[i]
        else:
            art_rows.append(i)
    n_art = len(art_rows)
    n_total = n_std + n_art
    T = np.zeros((m + 1, n_total + 1))
    T[:m, :n_std] = A
    T[:m, -1] = b
    for j, i in enumerate(art_rows):
        T[i, n_std + j] = 1.0
        basis[i] = n_std + j

    if n_art > 0:
        # Phase 1: minimize the sum of artificial variables.
        T[-1, n_std:n_total] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        status = _bland(T, basis, feas_tol)
        if status != OPTIMAL:
            raise RuntimeError("phase-1 simplex cannot be unbounded")
        if -T[-1, -1] > feas_tol:
            return LpOutcome(INFEASIBLE, None, np.inf)
        # Drive leftover artificials out of the basis or drop redundant rows.
        keep = np.ones(m, bool)
        for i in range(m):
            if basis[i] >= n_std:
                pivots = np.nonzero(np.abs(T[i, :n_std]) > _PIVOT_TOL)[0]
                if pivots.size == 0:
                    keep[i] = False
                else:
                    _pivot(T, i, int(pivots[0]))
                    basis[i] = int(pivots[0])
        T = np.hstack([T[:, :n_std], T[:, -1:]])
        T = np.vstack([T[:-1][keep], T[-1:]])
        basis = [basis[i] for i in range(m) if keep[i]]
        m = len(basis)
    else:
        T = np.hstack([T[:, :n_std], T[:, -1:]])

    # Phase 2: restore the true objective over the standard-form variables.
    c_std = np.zeros(n_std + 1)
    c_std[:n] = lp.c
    c_std[n:2 * n] = -lp.c
    T[-1] = c_std
    for i in range(m):
        cj = c_std[basis[i]]
        if cj != 0.0:
            T[-1] -= cj * T[i]
    status = _bland(T, basis, feas_tol)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, None, -np.inf)

    x_std = np.zeros(n_std)
    for i in range(m):
        x_std[basis[i]] = T[i, -1]
    x = x_std[:n] - x_std[n:2 * n]
    return LpOutcome(OPTIMAL, x, float(lp.c @ x))


def solve_lp(c, G, g, A_eq=None, b_eq=None, feas_tol: float = FEAS_TOL) -> LpOutcome:
    return lp_solve(LinearProgram(c, G, g, A_eq, b_eq), feas_tol)


def power_sum(A: np.ndarray, B: np.ndarray, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (A**j, sum_{i=1..j} A**(i-1) @ B) for a j-step constant input.

    The pair gives the state after holding one input for j steps:
    x(k+j) = A**j x(k) + S_j u.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if j < 1:
        raise ValueError(f"step count must be >= 1, got {j}")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("A must be square")
    if B.ndim != 2 or B.shape[0] != A.shape[0]:
        raise DimensionError("B row count must match A")
    P = np.eye(A.shape[0])
    S = np.zeros_like(B)
    for _ in range(j):
        S = S + P @ B
        P = P @ A
    return P, S


def lin_solve(M: np.ndarray, b: np.ndarray,
              singular_tol: float = SINGULAR_TOL) -> np.ndarray | None:
    """Solve M z = b for square M, or None when M is singular within tolerance."""
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError("M must be square")
    if abs(np.linalg.det(M)) < singular_tol:
        return None
    return np.linalg.solve(M, b)
