"""Halfspace polytopes and the geometry primitives built on them.

Everything downstream works on convex polytopes in H-representation
{x : H x <= h}. Scaling a C-set is O(1) here (multiply h), which is the
dominant operation when working with families of scaled copies of one
target set. Vertices are enumerated on demand and cached.

Suitable for desk-scale problems (dimension <= 4, tens of rows); no
double-description method, no rational arithmetic.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import (
    DimensionError,
    EmptyPolytopeError,
    NotACSetError,
    UnboundedPolytopeError,
)
from .lp import FEAS_TOL, INFEASIBLE, OPTIMAL, UNBOUNDED, lin_solve, solve_lp

MEM_TOL = 1e-7
DEDUPE_TOL = 1e-7
RED_TOL = 1e-9
_ZERO_ROW_TOL = 1e-10


class HPolytope:
    """Convex polytope {x : H x <= h} with an optional cached vertex list.

    Rows are normalized to unit Euclidean norm on construction so that all
    tolerance comparisons share one scale (normalization is skipped for rows
    already within 1e-9 of unit norm, making it idempotent and keeping
    save/load round trips bit-exact). Zero rows with nonnegative offset are
    dropped; a zero row with negative offset proves emptiness and raises.

    Instances are immutable after construction except for one-time vertex
    caching (compute-then-publish, idempotent under concurrent reads).
    """

    __slots__ = ("H", "h", "_vertices")

    def __init__(self, H, h, vertices=None):
        H = np.atleast_2d(np.asarray(H, dtype=float))
        h = np.atleast_1d(np.asarray(h, dtype=float))
        if H.shape[0] != h.shape[0]:
            raise DimensionError(f"{H.shape[0]} rows vs {h.shape[0]} offsets")
        if not (np.all(np.isfinite(H)) and np.all(np.isfinite(h))):
            raise ValueError("polytope data must be finite")
        norms = np.linalg.norm(H, axis=1)
        zero = norms < _ZERO_ROW_TOL
        if np.any(h[zero] < -FEAS_TOL):
            raise EmptyPolytopeError("contradictory zero row: 0 <= negative")
        if np.any(zero):
            H, h, norms = H[~zero], h[~zero], norms[~zero]
        scale_rows = np.abs(norms - 1.0) > 1e-9
        if np.any(scale_rows):
            H = H.copy()
            h = h.copy()
            H[scale_rows] /= norms[scale_rows, None]
            h[scale_rows] /= norms[scale_rows]
        self.H = H
        self.h = h
        self._vertices = None if vertices is None else np.asarray(vertices, dtype=float)

    @property
    def dim(self) -> int:
        return self.H.shape[1]

    @property
    def num_rows(self) -> int:
        return self.H.shape[0]

    @property
    def is_cset(self) -> bool:
        """True when the origin is strictly inside (all offsets positive)."""
        return bool(np.all(self.h > 0))

    @property
    def vertices(self) -> np.ndarray:
        if self._vertices is None:
            self._vertices = enumerate_vertices(self)
        return self._vertices

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, rows={self.num_rows})"


def box(lo, hi) -> HPolytope:
    """Axis-aligned box {x : lo <= x <= hi}."""
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = lo.shape[0]
    I = np.eye(n)
    return HPolytope(np.vstack([I, -I]), np.concatenate([hi, -lo]))


def gauge(P: HPolytope, x) -> float:
    """Minkowski gauge of a C-set: the smallest mu >= 0 with x in mu*P."""
    if not P.is_cset:
        raise NotACSetError("gauge requires all offsets strictly positive")
    x = np.asarray(x, dtype=float)
    if x.shape != (P.dim,):
        raise DimensionError(f"point of dim {x.shape} vs polytope dim {P.dim}")
    return float(max(np.max((P.H @ x) / P.h), 0.0))


def contains(P: HPolytope, x, mem_tol: float = MEM_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (P.dim,):
        raise DimensionError(f"point of dim {x.shape} vs polytope dim {P.dim}")
    return bool(np.all(P.H @ x <= P.h + mem_tol))


def scale(P: HPolytope, gamma: float) -> HPolytope:
    """Scaled copy gamma*P = {gamma*x : x in P} of a C-set, gamma > 0."""
    if gamma <= 0:
        raise ValueError(f"scale factor must be positive, got {gamma}")
    verts = None if P._vertices is None else gamma * P._vertices
    return HPolytope(P.H, gamma * P.h, vertices=verts)


def is_empty(P: HPolytope, feas_tol: float = FEAS_TOL) -> bool:
    if P.num_rows == 0:
        return False
    out = solve_lp(np.zeros(P.dim), P.H, P.h, feas_tol=feas_tol)
    return out.status == INFEASIBLE


def reduce(P: HPolytope, red_tol: float = RED_TOL) -> HPolytope:
    """Drop redundant rows; the feasible set is unchanged.

    Row i is redundant when maximizing H_i . x over the remaining rows stays
    below h_i + red_tol; the test LP carries the relaxed row H_i . x <= h_i + 1
    so it is always bounded. Raises EmptyPolytopeError on an empty input.
    """
    if is_empty(P):
        raise EmptyPolytopeError("cannot reduce an empty polytope")
    H, h = P.H, P.h
    nc = P.num_rows
    keep = np.ones(nc, bool)
    for i in range(nc):
        others = keep.copy()
        others[i] = False
        if not np.any(others):
            continue
        G = np.vstack([H[others], H[i]])
        g = np.concatenate([h[others], [h[i] + 1.0]])
        out = solve_lp(-H[i], G, g)
        if out.status == OPTIMAL and -out.value <= h[i] + red_tol:
            keep[i] = False
    return HPolytope(H[keep], h[keep])


def intersect(P: HPolytope, Q: HPolytope) -> HPolytope:
    """Intersection by row concatenation followed by redundancy removal."""
    if P.dim != Q.dim:
        raise DimensionError(f"dim {P.dim} vs {Q.dim}")
    return reduce(HPolytope(np.vstack([P.H, Q.H]), np.concatenate([P.h, Q.h])))


def project_out(P: HPolytope, u_dims: int) -> HPolytope:
    """Fourier-Motzkin elimination of the last u_dims coordinates.

    Computes the exact shadow {x : exists u, (x, u) in P}. Redundancy is
    removed after every single-variable elimination to bound the usual
    quadratic row blowup.
    """
    if u_dims < 1:
        raise ValueError("u_dims must be >= 1")
    if u_dims >= P.dim:
        raise DimensionError("cannot eliminate every coordinate")
    H, h = P.H, P.h
    for _ in range(u_dims):
        col = H.shape[1] - 1
        coef = H[:, col]
        pos = np.nonzero(coef > 1e-12)[0]
        neg = np.nonzero(coef < -1e-12)[0]
        zero = np.nonzero(np.abs(coef) <= 1e-12)[0]
        rows = [H[i, :col] for i in zero]
        rhs = [h[i] for i in zero]
        for i in pos:
            for k in neg:
                # (-coef[k]) * row_i + coef[i] * row_k cancels the last column.
                rows.append((-coef[k]) * H[i, :col] + coef[i] * H[k, :col])
                rhs.append((-coef[k]) * h[i] + coef[i] * h[k])
        if not rows:
            H, h = np.zeros((0, col)), np.zeros(0)
            continue
        reduced = reduce(HPolytope(np.array(rows), np.array(rhs)))
        H, h = reduced.H, reduced.h
    return HPolytope(H, h)


def bounding_box(P: HPolytope) -> tuple[np.ndarray, np.ndarray]:
    """Tight axis-aligned bounds, or UnboundedPolytopeError."""
    n = P.dim
    lo = np.empty(n)
    hi = np.empty(n)
    for c in range(n):
        e = np.zeros(n)
        e[c] = 1.0
        for sign, dest in ((1.0, hi), (-1.0, lo)):
            out = solve_lp(-sign * e, P.H, P.h)
            if out.status == UNBOUNDED:
                raise UnboundedPolytopeError(f"unbounded along coordinate {c}")
            if out.status == INFEASIBLE:
                raise EmptyPolytopeError("cannot bound an empty polytope")
            dest[c] = sign * -out.value
    return lo, hi


def _in_hull(x: np.ndarray, points: np.ndarray, tol: float) -> bool:
    """Whether x is within tol of the convex hull of the given points."""
    if points.shape[0] == 0:
        return False
    k, n = points.shape
    # variables mu >= 0, sum mu = 1, |points^T mu - x| <= tol
    G = np.vstack([-np.eye(k), points.T, -points.T])
    g = np.concatenate([np.zeros(k), x + tol, -x + tol])
    out = solve_lp(np.zeros(k), G, g, A_eq=np.ones((1, k)), b_eq=np.ones(1))
    return out.status == OPTIMAL


def enumerate_vertices(P: HPolytope, mem_tol: float = MEM_TOL,
                       dedupe_tol: float = DEDUPE_TOL) -> np.ndarray:
    """All vertices of a bounded polytope by combinatorial basis search.

    Every n-subset of rows with an invertible submatrix is solved; feasible
    solutions are basic feasible points, i.e. vertices. Near-duplicates are
    merged and any point that falls inside the hull of the rest (possible
    only through degeneracy at tolerance level) is dropped.
    """
    n = P.dim
    bounding_box(P)  # raises when unbounded or empty
    cands = []
    for idx in combinations(range(P.num_rows), n):
        sub = P.H[list(idx)]
        z = lin_solve(sub, P.h[list(idx)])
        if z is None:
            continue
        if contains(P, z, mem_tol):
            cands.append(z)
    kept: list[np.ndarray] = []
    for z in cands:
        if not any(np.max(np.abs(z - w)) <= dedupe_tol for w in kept):
            kept.append(z)
    if len(kept) > n + 1:
        mask = np.ones(len(kept), bool)
        for i in range(len(kept)):
            others = [kept[j] for j in range(len(kept)) if mask[j] and j != i]
            if others and _in_hull(kept[i], np.array(others), dedupe_tol):
                mask[i] = False
        kept = [kept[i] for i in range(len(kept)) if mask[i]]
    if not kept:
        raise EmptyPolytopeError("polytope has no vertices")
    return np.array(kept)
