"""Synthesis and verification of lambda-contractive target sets.

A set P is lambda-contractive when every state in P admits a one-step
control keeping A x + B u inside the shrunk copy lambda*P. The synthesis
iterates the one-step controllable-predecessor map intersected with the
seed set until successive iterates coincide up to a small relative
inflation, then certifies the result vertex by vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPolytopeError, NotACSetError, SynthesisError
from .lp import FEAS_TOL, OPTIMAL, solve_lp
from .polytope import (
    MEM_TOL,
    HPolytope,
    contains,
    enumerate_vertices,
    intersect,
    project_out,
    reduce,
    scale,
)
from .system import LinearSystem


@dataclass
class ContractiveSpec:
    """Inputs for target-set synthesis inside the seed C-set S0."""

    lam: float
    S0: HPolytope
    convergence_eps: float = 1e-6
    max_iters: int = 200

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam}")
        if not self.S0.is_cset:
            raise NotACSetError("S0 must contain the origin in its interior")
        if self.convergence_eps <= 0:
            raise ValueError("convergence_eps must be positive")


@dataclass
class TargetSet:
    """A verified lambda-contractive C-set with vertices and vertex controls.

    witness_controls[n] is an admissible input mapping vertex n into
    lam * P0 in one step; convexity extends the certificate to all of P0.
    """

    P0: HPolytope
    vertices: np.ndarray
    lam: float
    witness_controls: np.ndarray = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]


def qmap(sys: LinearSystem, D: HPolytope, lam: float) -> HPolytope:
    """One-step controllable predecessor {x in X : exists u in U, Ax+Bu in lam*D}.

    Built by stacking the constraints over the lifted (x, u) space and
    projecting the input coordinates out again; the existential quantifier
    is exactly a Fourier-Motzkin projection.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    n, m = sys.n, sys.m
    HD, hD = D.H, D.h
    Hx, hx = sys.X.H, sys.X.h
    Hu, hu = sys.U.H, sys.U.h
    lifted_H = np.vstack([
        np.hstack([HD @ sys.A, HD @ sys.B]),
        np.hstack([np.zeros((Hu.shape[0], n)), Hu]),
        np.hstack([Hx, np.zeros((Hx.shape[0], m))]),
    ])
    lifted_h = np.concatenate([lam * hD, hu, hx])
    return project_out(HPolytope(lifted_H, lifted_h), m)


def verify_contractive(sys: LinearSystem, P: HPolytope, lam: float,
                       vertices: np.ndarray | None = None,
                       tol: float = 10 * FEAS_TOL):
    """Check lambda-contractiveness of P on its vertices.

    For each vertex v the LP  min eps  s.t.  u in U, A v + B u in eps*P
    is solved; the set passes when every optimum satisfies eps <= lam + tol.
    Returns (ok, witness_controls) with the per-vertex minimizers; the
    witnesses are meaningful only when ok is True.
    """
    verts = P.vertices if vertices is None else np.asarray(vertices, dtype=float)
    if not P.is_cset:
        raise NotACSetError("contractiveness is defined for C-sets only")
    m = sys.m
    HP, hP = P.H, P.h
    Hu, hu = sys.U.H, sys.U.h
    # variables z = (u, eps)
    c = np.zeros(m + 1)
    c[-1] = 1.0
    G = np.vstack([
        np.hstack([HP @ sys.B, -hP[:, None]]),
        np.hstack([Hu, np.zeros((Hu.shape[0], 1))]),
    ])
    witnesses = np.zeros((verts.shape[0], m))
    ok = True
    for i, v in enumerate(verts):
        g = np.concatenate([-HP @ (sys.A @ v), hu])
        out = solve_lp(c, G, g)
        if out.status != OPTIMAL or out.x[-1] > lam + tol:
            ok = False
            break
        witnesses[i] = out.x[:m]
    return ok, (witnesses if ok else None)


def synth_target(sys: LinearSystem, spec: ContractiveSpec) -> TargetSet:
    """Iterate Omega_{k+1} = qmap(Omega_k) /\\ S0 down to a contractive fixed point.

    Stops when the previous iterate fits inside (1 + convergence_eps) times
    the next one (the next iterate always fits inside the previous by
    monotonicity) and the candidate passes vertex verification. Raises
    SynthesisError when an iterate goes empty, loses the origin from its
    interior, or the budget runs out.
    """
    omega = reduce(spec.S0)
    # Tolerance consistent with stopping at a (1+eps)-approximate fixed point:
    # vertices then certify contraction only up to lam * (1 + eps).
    verify_tol = spec.lam * spec.convergence_eps + 10 * FEAS_TOL
    for _ in range(spec.max_iters):
        try:
            nxt = intersect(qmap(sys, omega, spec.lam), spec.S0)
        except EmptyPolytopeError as exc:
            raise SynthesisError("contractive iterate became empty") from exc
        if np.any(nxt.h <= MEM_TOL):
            raise SynthesisError("contractive iterate lost the origin from its interior")
        inflated = scale(nxt, 1.0 + spec.convergence_eps)
        if all(contains(inflated, v) for v in omega.vertices):
            verts = enumerate_vertices(nxt)
            ok, witnesses = verify_contractive(sys, nxt, spec.lam, verts,
                                               tol=verify_tol)
            if ok:
                nxt._vertices = verts
                return TargetSet(P0=nxt, vertices=verts, lam=spec.lam,
                                 witness_controls=witnesses)
        omega = nxt
    raise SynthesisError(
        f"no contractive fixed point within {spec.max_iters} iterations")


def check_scaling(sys: LinearSystem, target: TargetSet, gamma: float,
                  witnesses: np.ndarray | None = None,
                  mem_tol: float = MEM_TOL) -> bool:
    """Scaling certificate: gamma*P0 stays lambda-contractive when
    every scaled vertex remains in X and every scaled witness control in U."""
    if gamma <= 1.0:
        raise ValueError(f"gamma must exceed 1, got {gamma}")
    w = target.witness_controls if witnesses is None else witnesses
    return all(contains(sys.U, gamma * u, mem_tol) for u in w) and \
        all(contains(sys.X, gamma * v, mem_tol) for v in target.vertices)
