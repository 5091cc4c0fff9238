"""Iterative enlargement of the domain of attraction per step count.

For every inter-event step count j the largest scaled copy a*P0 is grown
such that each scaled vertex can be driven back into the previous copy by
holding one admissible input for j steps. The result is a ragged grid of
scale factors a[j][l] (a[j][0] = 1) whose gaps are at least the acceptance
threshold a_bar, which is what bounds the number of iterations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateError, OutsideDomainError
from .lp import INFEASIBLE, OPTIMAL, power_sum, solve_lp
from .polytope import MEM_TOL, contains, gauge, scale
from .contractive import TargetSet
from .system import LinearSystem

STRICT_TOL = 1e-9


@dataclass
class ScaledFamily:
    """The grid {a[j][l]} of scaling factors produced by the enlargement loop.

    scalings[j-1] lists a_{j,0} = 1 < a_{j,1} < ... < a_{j,l_j} for step
    count j; witness_controls[(j, l)] holds the per-vertex inputs that
    certify the transition from a_{j,l}*P0 into a_{j,l-1}*P0.
    """

    target: TargetSet
    j_max: int
    a_bar: float
    scalings: list[list[float]]
    witness_controls: dict[tuple[int, int], np.ndarray] = field(repr=False)
    a_max: float = 0.0
    strict_intermediate: bool = False

    def __post_init__(self):
        if self.a_max == 0.0:
            self.a_max = max(a for chain in self.scalings for a in chain)

    def levels(self, j: int) -> int:
        """l_j, the index of the largest set in chain j."""
        return len(self.scalings[j - 1]) - 1

    def a(self, j: int, ell: int) -> float:
        return self.scalings[j - 1][ell]

    def nodes(self):
        """All (j, l) pairs in deterministic (j, l)-lexicographic order."""
        for j in range(1, self.j_max + 1):
            for ell in range(self.levels(j) + 1):
                yield (j, ell)


def _enlarge_lp(sys: LinearSystem, target: TargetSet, j: int, a_cur: float,
                Aj: np.ndarray, Sj: np.ndarray, strict_tol: float,
                strict_intermediate: bool):
    """Assemble and solve  max a  over (a, u_1..u_N)  subject to
    a >= a_cur + strict_tol, a*v_n in X, u_n in U, and the j-step endpoint
    of every scaled vertex landing in a_cur*P0."""
    verts = target.vertices
    N = verts.shape[0]
    m = sys.m
    H0, h0 = target.P0.H, target.P0.h
    Hx, hx = sys.X.H, sys.X.h
    Hu, hu = sys.U.H, sys.U.h
    nvar = 1 + N * m

    rows = [np.zeros((1, nvar))]
    rows[0][0, 0] = -1.0
    rhs = [np.array([-(a_cur + strict_tol)])]
    for n in range(N):
        cols = slice(1 + n * m, 1 + (n + 1) * m)
        blk = np.zeros((Hx.shape[0], nvar))
        blk[:, 0] = Hx @ verts[n]
        rows.append(blk)
        rhs.append(hx)
        blk = np.zeros((Hu.shape[0], nvar))
        blk[:, cols] = Hu
        rows.append(blk)
        rhs.append(hu)
        blk = np.zeros((H0.shape[0], nvar))
        blk[:, 0] = H0 @ (Aj @ verts[n])
        blk[:, cols] = H0 @ Sj
        rows.append(blk)
        rhs.append(a_cur * h0)
        if strict_intermediate:
            for i in range(1, j):
                Ai, Si = power_sum(sys.A, sys.B, i)
                blk = np.zeros((Hx.shape[0], nvar))
                blk[:, 0] = Hx @ (Ai @ verts[n])
                blk[:, cols] = Hx @ Si
                rows.append(blk)
                rhs.append(hx)
    c = np.zeros(nvar)
    c[0] = -1.0
    return solve_lp(c, np.vstack(rows), np.concatenate(rhs))


def enlarge_step(sys: LinearSystem, target: TargetSet, j: int, a_cur: float,
                 strict_tol: float = STRICT_TOL,
                 strict_intermediate: bool = False):
    """One enlargement LP: the largest a > a_cur whose scaled vertices all
    admit a j-step constant input back into a_cur*P0, with the per-vertex
    inputs. Returns None when no enlargement is feasible."""
    if j < 1:
        raise ValueError(f"step count must be >= 1, got {j}")
    if a_cur < 1.0:
        raise ValueError(f"a_cur must be >= 1, got {a_cur}")
    Aj, Sj = power_sum(sys.A, sys.B, j)
    out = _enlarge_lp(sys, target, j, a_cur, Aj, Sj, strict_tol,
                      strict_intermediate)
    if out.status == INFEASIBLE:
        return None
    if out.status != OPTIMAL:
        raise RuntimeError(
            "enlargement LP unbounded; X was supposed to bound the scaling")
    N = target.num_vertices
    a_star = float(out.x[0])
    controls = out.x[1:].reshape(N, sys.m).copy()
    return a_star, controls


def build_family(sys: LinearSystem, target: TargetSet, j_max: int,
                 a_bar: float, strict_tol: float = STRICT_TOL,
                 strict_intermediate: bool = False) -> ScaledFamily:
    """Run the enlargement loop for every j in 1..j_max.

    A solution a* is accepted only when it improves on the current scale by
    at least a_bar; otherwise (or when infeasible) the chain for that j
    terminates. Chains may stay trivial (l_j = 0).
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    if a_bar <= 0:
        raise ValueError("a_bar must be positive")
    scalings: list[list[float]] = []
    witnesses: dict[tuple[int, int], np.ndarray] = {}
    for j in range(1, j_max + 1):
        chain = [1.0]
        while True:
            res = enlarge_step(sys, target, j, chain[-1], strict_tol,
                               strict_intermediate)
            if res is None:
                break
            a_star, controls = res
            if a_star - chain[-1] < a_bar:
                break
            chain.append(a_star)
            witnesses[(j, len(chain) - 1)] = controls
        scalings.append(chain)
    return ScaledFamily(target=target, j_max=j_max, a_bar=a_bar,
                        scalings=scalings, witness_controls=witnesses,
                        strict_intermediate=strict_intermediate)


def lemma3_witness(sys: LinearSystem, family: ScaledFamily, j: int, ell: int,
                   x: np.ndarray, mem_tol: float = MEM_TOL):
    """Concrete transition witness for a state x in a_{j,l}*P0, l >= 1.

    Writes x as a convex combination of the scaled vertices and blends the
    stored per-vertex inputs with the same weights; the propagated j-step
    endpoint is guaranteed to land in a_{j,l-1}*P0 and is checked before
    returning (u, endpoint).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    x = np.asarray(x, dtype=float)
    target = family.target
    a_here = family.a(j, ell)
    if gauge(target.P0, x) > a_here + mem_tol:
        raise OutsideDomainError(
            f"state has gauge {gauge(target.P0, x):.6g} > a[{j}][{ell}] = {a_here:.6g}")
    verts = a_here * target.vertices
    N = verts.shape[0]
    # weights mu >= 0 with sum 1 reproducing x
    A_eq = np.vstack([verts.T, np.ones((1, N))])
    b_eq = np.concatenate([x, [1.0]])
    out = solve_lp(np.zeros(N), -np.eye(N), np.zeros(N), A_eq=A_eq, b_eq=b_eq)
    if out.status != OPTIMAL:
        raise CertificateError("convex-combination LP infeasible inside the set")
    mu = out.x
    u = mu @ family.witness_controls[(j, ell)]
    Aj, Sj = power_sum(sys.A, sys.B, j)
    x_next = Aj @ x + Sj @ u
    lower = scale(target.P0, family.a(j, ell - 1))
    if not contains(lower, x_next, mem_tol):
        raise CertificateError("propagated endpoint missed the smaller set")
    return u, x_next
