"""Bounds and certificates for Schmidt-restricted and cone operator norms.

For PSD X on H_n (x) H_m the S(k) norm is the largest value of <v|X|v> over
unit vectors of Schmidt rank at most k.  Lower bounds come from a truncated
power iteration (every iterate is feasible, so any value reached is valid);
upper bounds come from the SDPs of :mod:`sknorms.sdp` whose feasible sets
relax the Schmidt-rank ball, one SDP per k-positive map.  The two sides
together also decide k-block positivity: Y is k-block positive exactly when
||cI - Y||_S(k) <= c for any c >= lambda_max(Y).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import sdp as _sdp
from .qops import (
    HermitianOperator,
    MapRep,
    _as_matrix,
    _dims_pair,
    reduction_map,
    transpose_map,
)
from .schmidt import random_rank_k_state, schmidt_decompose

__all__ = [
    "NormBound",
    "Verdict",
    "Certification",
    "sk_lower_bound_seesaw",
    "sk_upper_bound",
    "sk_bracket",
    "sk_exact_small",
    "cone_norm",
    "is_k_block_positive",
    "dual_char_spotcheck",
    "default_maps",
]

SEESAW_VALUE_TOL = 1e-10


@dataclass
class NormBound:
    """One- or two-sided estimate of a restricted norm.

    ``upper_certificate`` is a pair (lambda, Z) with Z block positive of the
    matching order and lambda >= lambda_max(X + Z) up to solver tolerance;
    ``lower_witness`` is a unit vector of Schmidt rank <= k attaining
    ``lower``.
    """

    lower: float | None = None
    upper: float | None = None
    lower_witness: np.ndarray | None = None
    upper_certificate: tuple | None = None
    maps_used: str = ""
    solver_stats: dict | None = None

    def merged(self, other: "NormBound") -> "NormBound":
        out = NormBound(
            lower=self.lower,
            upper=self.upper,
            lower_witness=self.lower_witness,
            upper_certificate=self.upper_certificate,
            maps_used=self.maps_used,
            solver_stats=self.solver_stats,
        )
        if other.lower is not None and (out.lower is None or other.lower > out.lower):
            out.lower = other.lower
            out.lower_witness = other.lower_witness
        if other.upper is not None and (out.upper is None or other.upper < out.upper):
            out.upper = other.upper
            out.upper_certificate = other.upper_certificate
        if other.solver_stats is not None:
            out.solver_stats = other.solver_stats
        parts = [p for p in (self.maps_used, other.maps_used) if p]
        out.maps_used = ";".join(parts)
        return out


class Verdict(enum.Enum):
    CertifiedYes = "CertifiedYes"
    CertifiedNo = "CertifiedNo"
    Unknown = "Unknown"


@dataclass
class Certification:
    verdict: Verdict
    evidence: dict = field(default_factory=dict)


def default_maps(k: int, m: int):
    """Library maps valid for S(k) upper bounds: transpose and reduction are
    1-positive, so only k = 1 gets them; larger k falls back to the
    unconstrained SDP (operator norm)."""
    if k == 1:
        return [transpose_map(m), reduction_map(m)]
    return []


def _truncate_rank_k(y: np.ndarray, n: int, m: int, k: int):
    M = y.reshape(n, m)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] <= 1e-300:
        return None
    Mk = (U[:, :k] * s[:k]) @ Vh[:k]
    v = Mk.reshape(n * m)
    nrm = np.linalg.norm(v)
    if nrm <= 1e-300:
        return None
    return v / nrm


def sk_lower_bound_seesaw(
    X,
    k: int,
    dims=None,
    restarts: int = 20,
    max_iters: int = 500,
    seed: int = 0,
) -> NormBound:
    """Lower-bound the S(k) norm by truncated power iteration.

    Each restart iterates v <- normalize(rank-k truncation of X v); the
    quadratic form is nondecreasing along the iteration for PSD X and every
    iterate has Schmidt rank <= k, so the best value seen is a valid lower
    bound.  One deterministic start (truncated top eigenvector) plus
    ``restarts`` seeded random starts; fully reproducible for a fixed seed.
    """
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    Xm = _as_matrix(X)
    if Xm.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {Xm.shape}")
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= {m}, got {k}")
    kk = min(k, n, m)

    starts = []
    top = np.linalg.eigh(Xm)[1][:, -1]
    smart = _truncate_rank_k(top, n, m, kk)
    if smart is not None:
        starts.append(smart)
    for r in range(restarts):
        starts.append(
            random_rank_k_state((n, m), kk, seed=np.random.default_rng([seed, r])).amplitudes
        )

    best_val = -np.inf
    best_v = None
    for v in starts:
        prev = -np.inf
        for _ in range(max_iters):
            y = Xm @ v
            vn = _truncate_rank_k(y, n, m, kk)
            if vn is None:
                break
            v = vn
            val = float(np.real(np.vdot(v, Xm @ v)))
            if val > best_val:
                best_val = val
                best_v = v
            if abs(val - prev) <= SEESAW_VALUE_TOL:
                break
            prev = val
    if best_v is None:
        # X v vanished on every start: X = 0 on the rank-k set
        best_val = 0.0
        best_v = starts[-1]
    return NormBound(lower=best_val, lower_witness=best_v, maps_used=f"seesaw(k={k})")


def sk_upper_bound(X, k: int, maps, dims=None, opts=None) -> NormBound:
    """Upper-bound the S(k) norm as the minimum over map SDP optima.

    Every map supplied must be k-positive (this is the caller's assertion;
    a map that is not k-positive invalidates the upper-bound semantics but
    still produces a well-defined cone norm).  The dual certificate of the
    minimizing map is retained.
    """
    if not maps:
        raise ValueError("at least one k-positive map is required")
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= {m}, got {k}")
    best = None
    for phi in maps:
        p = _sdp.build_sk_sdp(X, phi, (n, m))
        res = _sdp.solve_general(p, opts)
        if res.status is not _sdp.SolveStatus.Optimal:
            raise _sdp.SdpSolverError(
                f"SDP for map {phi.name or '?'} finished with status {res.status.value}"
            )
        val = float(res.dual_obj)
        if best is None or val < best[0]:
            best = (val, phi, p, res)
    val, phi, p, res = best
    lam, Z = _sdp.extract_certificate(p, res)
    used = opts if opts is not None else _sdp.SolverOptions()
    return NormBound(
        upper=val,
        upper_certificate=(lam, Z),
        maps_used=",".join(phi.name or "custom" for phi in maps),
        solver_stats={
            "tol": used.tol,
            "iterations": res.iterations,
            "status": res.status.value,
        },
    )


def cone_norm(X, cone_maps, dims=None, opts=None) -> NormBound:
    """Norm of PSD X over the cone of states obeying every map constraint.

    The SDP computes this cone norm exactly, so the primal and dual
    objectives bracket it at solver accuracy: lower = primal, upper = dual.
    An empty map list gives lambda_max(X).  Solver failures propagate.
    """
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    p = _sdp.build_cone_sdp(X, cone_maps, (n, m))
    res = _sdp.solve_general(p, opts)
    if res.status is not _sdp.SolveStatus.Optimal:
        raise _sdp.SdpSolverError(f"cone norm SDP finished with status {res.status.value}")
    cert = None
    if len(p.cone_maps) == 1:
        cert = _sdp.extract_certificate(p, res)
    names = ",".join(phi.name or "custom" for phi in cone_maps) or "unconstrained"
    used = opts if opts is not None else _sdp.SolverOptions()
    return NormBound(
        lower=float(res.primal_obj),
        upper=float(res.dual_obj),
        upper_certificate=cert,
        maps_used=names,
        solver_stats={
            "tol": used.tol,
            "iterations": res.iterations,
            "status": res.status.value,
        },
    )


def sk_bracket(
    X,
    k: int,
    dims=None,
    maps=None,
    restarts: int = 20,
    seed: int = 0,
    opts=None,
) -> NormBound:
    """Two-sided S(k) estimate: see-saw below, map SDPs above.

    ``maps=None`` selects the library defaults for k (transpose and
    reduction at k = 1, the unconstrained operator-norm SDP otherwise).
    """
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    if maps is None:
        maps = default_maps(k, m)
    lower = sk_lower_bound_seesaw(X, k, (n, m), restarts=restarts, seed=seed)
    if maps:
        upper = sk_upper_bound(X, k, maps, (n, m), opts=opts)
    else:
        upper = cone_norm(X, [], (n, m), opts=opts)
        upper.lower = None
    return lower.merged(upper)


def sk_exact_small(X, dims=None, opts=None) -> float:
    """Exact S(1) norm on 2 (x) 2 or 3 (x) 2 via the transpose-map SDP.

    On these dimensions the transpose map alone characterizes Schmidt-rank-1
    states, so the SDP value is the norm itself (midpoint of the primal/dual
    pair, which agree to solver tolerance).
    """
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    if m != 2 or n > 3:
        raise ValueError(f"exact evaluation requires m = 2 and n <= 3, got {n} (x) {m}")
    p = _sdp.build_sk_sdp(X, transpose_map(m), (n, m))
    res = _sdp.solve_general(p, opts)
    if res.status is not _sdp.SolveStatus.Optimal:
        raise _sdp.SdpSolverError(f"SDP finished with status {res.status.value}")
    return 0.5 * (float(res.primal_obj) + float(res.dual_obj))


def is_k_block_positive(
    Y,
    k: int,
    dims=None,
    maps=None,
    opts=None,
    restarts: int = 20,
    seed: int = 0,
    decision_tol: float = 1e-8,
) -> Certification:
    """Certify whether <v|Y|v> >= 0 for all vectors of Schmidt rank <= k.

    Shifts to X = cI - Y with c = lambda_max(Y) + 1 (PSD by construction)
    and compares S(k) bounds of X against c: an upper bound <= c + tol
    certifies yes; a see-saw witness with value > c + tol certifies no and
    is returned in the evidence (its <v|Y|v> is negative).  Otherwise the
    verdict is Unknown with both bounds reported.
    """
    if dims is None and isinstance(Y, HermitianOperator):
        dims = Y.bipartite
    n, m = _dims_pair(dims)
    Ym = _as_matrix(Y)
    if Ym.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {Ym.shape}")
    if opts is None:
        opts = _sdp.SolverOptions(tol=1e-9)
    c = float(np.linalg.eigvalsh(Ym)[-1]) + 1.0
    X = c * np.eye(Ym.shape[0]) - Ym
    if maps is None:
        maps = default_maps(k, m)
    if maps:
        ub = sk_upper_bound(X, k, maps, (n, m), opts=opts)
    else:
        ub = cone_norm(X, [], (n, m), opts=opts)
    evidence = {"shift": c, "upper": ub.upper, "maps": ub.maps_used}
    if ub.upper <= c + decision_tol:
        return Certification(Verdict.CertifiedYes, evidence)
    lb = sk_lower_bound_seesaw(X, k, (n, m), restarts=restarts, seed=seed)
    evidence["lower"] = lb.lower
    if lb.lower > c + decision_tol:
        v = lb.lower_witness
        evidence["witness"] = v
        evidence["witness_value"] = float(np.real(np.vdot(v, Ym @ v)))
        return Certification(Verdict.CertifiedNo, evidence)
    return Certification(Verdict.Unknown, evidence)


def dual_char_spotcheck(X, k: int, Z, dims=None, maps=None, opts=None) -> bool:
    """Check the additive dual characterization on one instance.

    The S(k) norm of PSD X never exceeds ||X + Z|| for k-block positive Z.
    This compares the computed SDP upper bound against that operator norm
    and returns whether the inequality holds within 1e-6; the comparison is
    guaranteed whenever Z lies in the dual cone the SDP optimizes over
    (PSD matrices and extracted certificates qualify).
    """
    if dims is None and isinstance(X, HermitianOperator):
        dims = X.bipartite
    n, m = _dims_pair(dims)
    if maps is None:
        maps = default_maps(k, m)
    if maps:
        ub = sk_upper_bound(X, k, maps, (n, m), opts=opts).upper
    else:
        ub = cone_norm(X, [], (n, m), opts=opts).upper
    shifted = _as_matrix(X) + _as_matrix(Z)
    opnorm = float(np.abs(np.linalg.eigvalsh(shifted)).max())
    return ub <= opnorm + 1e-6
