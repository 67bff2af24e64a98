"""Semidefinite programs for restricted operator norms.

Two problem layers live here.  The general layer states

    maximize   Tr(A X)
    subject to Phi_b(X) <= B_b          (constraint blocks)
               (id (x) Psi_t)(X) >= 0   (cone maps on the second factor)
               X >= 0

over Hermitian X.  The standard layer is the inequality form

    maximize   c . x
    subject to sum_l x_l F_l <= D      (block diagonal, real symmetric)

with dual  minimize Tr(D W)  s.t.  Tr(F_l W) = c_l, W >= 0.

The conversion expands X in an orthonormal Hermitian basis {H_l} and embeds
every complex block through ``realify``, so the solver works entirely in
real symmetric arithmetic.  The realified pairing doubles traces, hence dual
blocks convert back to complex certificates with a factor 2 (see
:func:`sknorms.qops.unrealify`).

The embedded solver is an infeasible-start primal-dual path-following
interior-point method with the HKM scaling direction and a Mehrotra
predictor-corrector step.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .qops import HermitianOperator, MapRep, _as_matrix, _dims_pair, realify, unrealify

__all__ = [
    "SdpSolverError",
    "SolveStatus",
    "SolverOptions",
    "SolveResult",
    "GeneralSDP",
    "StandardSDP",
    "SdpBlock",
    "BlockInfo",
    "hermitian_basis_size",
    "hermitian_basis_triplets",
    "basis_project",
    "basis_expand",
    "build_sk_sdp",
    "build_cone_sdp",
    "to_standard_form",
    "psi_apply",
    "psi_adjoint_apply",
    "solve",
    "solve_general",
    "extract_certificate",
    "dump_standard_form",
]


class SdpSolverError(RuntimeError):
    """Solver failed to produce a usable optimum."""


class SolveStatus(enum.Enum):
    Optimal = "Optimal"
    MaxIterations = "MaxIterations"
    NumericalFailure = "NumericalFailure"
    Infeasible = "Infeasible"


# ---------------------------------------------------------------------------
# Orthonormal Hermitian basis
#
# Order: N diagonal units e_ll, then for each index pair (i < j, row-major)
# the symmetric unit (e_ij + e_ji)/sqrt2 followed by all antisymmetric units
# i(e_ij - e_ji)/sqrt2.  Orthonormal w.r.t. Tr(H_a H_b).


def hermitian_basis_size(N: int) -> int:
    return N * N


def hermitian_basis_triplets(N: int):
    """Sparse triplet form [(row, col, value), ...] for each basis element."""
    s = 1.0 / math.sqrt(2.0)
    triplets = [[(l, l, 1.0 + 0j)] for l in range(N)]
    iu, ju = np.triu_indices(N, 1)
    for i, j in zip(iu, ju):
        triplets.append([(int(i), int(j), s + 0j), (int(j), int(i), s + 0j)])
    for i, j in zip(iu, ju):
        triplets.append([(int(i), int(j), 1j * s), (int(j), int(i), -1j * s)])
    return triplets


def basis_project(A) -> np.ndarray:
    """Coordinates x with A = sum_l x_l H_l, real for Hermitian A."""
    A = _as_matrix(A)
    N = A.shape[0]
    iu, ju = np.triu_indices(N, 1)
    s = math.sqrt(2.0)
    return np.concatenate(
        [np.diag(A).real, s * A[iu, ju].real, s * A[iu, ju].imag]
    )


def basis_expand(x, N: int) -> np.ndarray:
    """Inverse of :func:`basis_project`."""
    x = np.asarray(x, dtype=float)
    if x.size != N * N:
        raise ValueError(f"coordinate vector of length {x.size}, expected {N * N}")
    A = np.zeros((N, N), dtype=complex)
    np.fill_diagonal(A, x[:N])
    iu, ju = np.triu_indices(N, 1)
    npairs = iu.size
    s = 1.0 / math.sqrt(2.0)
    vals = s * (x[N : N + npairs] + 1j * x[N + npairs :])
    A[iu, ju] = vals
    A[ju, iu] = vals.conj()
    return A


# ---------------------------------------------------------------------------
# Problem containers


@dataclass(frozen=True)
class GeneralSDP:
    """General-form problem data.

    ``constraints`` is a list of (MapRep, B) pairs meaning Phi(X) <= B where
    Phi acts on the full space of X.  ``cone_maps`` act on the second tensor
    factor: X must satisfy (id (x) Phi_t)(X) >= 0 for each, in addition to
    X >= 0.  ``dims`` is required whenever cone maps are present.
    """

    A: np.ndarray
    constraints: tuple
    cone_maps: tuple
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        A = np.array(_as_matrix(self.A))
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "cone_maps", tuple(self.cone_maps))
        N = A.shape[0]
        for phi, B in self.constraints:
            if phi.in_dim != N:
                raise ValueError(f"constraint map acts on {phi.in_dim}, variable has {N}")
            B = _as_matrix(B)
            if B.shape[0] != phi.out_dim:
                raise ValueError("constraint right-hand side does not match map output")
        if self.cone_maps:
            if self.dims is None:
                raise ValueError("dims required when cone maps are present")
            n, m = _dims_pair(self.dims)
            if n * m != N:
                raise ValueError(f"dims {self.dims} incompatible with dimension {N}")
            for phi in self.cone_maps:
                if phi.in_dim != m:
                    raise ValueError(f"cone map acts on {phi.in_dim}, second factor has {m}")

    @property
    def var_dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class BlockInfo:
    """Provenance of one standard-form block: which part of Psi produced it."""

    kind: str  # "constraint" | "cone" | "psd"
    complex_dim: int
    index: int | None = None


@dataclass
class SdpBlock:
    dim: int              # realified block dimension
    D: np.ndarray         # (dim, dim) symmetric right-hand side
    F: sp.csr_matrix      # (nvar, dim*dim), row l = row-major vec of F_l

    def dense_F(self, l: int) -> np.ndarray:
        return self.F[l].toarray().reshape(self.dim, self.dim)


@dataclass
class StandardSDP:
    """Inequality-form data c, D, {F_l} in block-diagonal real symmetric form."""

    c: np.ndarray
    blocks: list
    layout: list = field(default_factory=list)

    @property
    def nvar(self) -> int:
        return self.c.size


@dataclass
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 200
    step_frac: float = 0.98
    verbose: bool = False


@dataclass
class SolveResult:
    x: np.ndarray
    Y_blocks: list
    primal_obj: float
    dual_obj: float
    gap: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: SolveStatus
    std: StandardSDP | None = None

    @property
    def Y(self) -> np.ndarray:
        """Dual variable assembled as one block-diagonal matrix."""
        return scipy.linalg.block_diag(*self.Y_blocks)


# ---------------------------------------------------------------------------
# Problem builders

PSD_ATOL = 1e-9


def _check_psd(X, what="operator"):
    vals = np.linalg.eigvalsh(_as_matrix(X))
    if vals[0] < -PSD_ATOL:
        raise ValueError(f"{what} must be positive semidefinite, min eigenvalue {vals[0]:.3e}")


def _trace_constraints(N: int):
    """Normalization encoded as the single 1x1 inequality block Tr(rho) <= 1.

    For PSD objectives this is equivalent to Tr(rho) = 1: every feasibility
    constraint is homogeneous, so a feasible point with trace s < 1 scales to
    s = 1 without decreasing the objective.  Splitting the equality into
    opposing inequalities instead leaves the dual optimal face unbounded,
    which in practice wrecks the conditioning of the Schur complement just
    before convergence; the one-sided form keeps the dual multiplier unique.
    """
    E = np.zeros((N, 1, N), dtype=complex)
    F = np.zeros((N, N, 1), dtype=complex)
    for i in range(N):
        E[i, 0, i] = 1.0
        F[i, i, 0] = 1.0
    tr = MapRep(E, F, name="trace")
    one = np.ones((1, 1))
    return [(tr, one)]


def build_sk_sdp(X, phi_k: MapRep, dims) -> GeneralSDP:
    """SDP whose optimum upper-bounds the S(k) norm of PSD X.

    maximize Tr(X rho) over states rho with (id (x) phi_k)(rho) >= 0.  When
    phi_k is k-positive the feasible set contains every state of Schmidt
    number <= k, so the optimum dominates the S(k) norm; for the transpose
    map on a 2 (x) 2 or 2 (x) 3 split the value is exact at k = 1.
    """
    n, m = _dims_pair(dims)
    Xm = _as_matrix(X)
    if Xm.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {Xm.shape}")
    _check_psd(Xm, "norm argument")
    if phi_k.in_dim != m:
        raise ValueError(f"map acts on dimension {phi_k.in_dim}, second factor has {m}")
    return GeneralSDP(
        A=Xm,
        constraints=_trace_constraints(n * m),
        cone_maps=(phi_k,),
        dims=(n, m),
    )


def build_cone_sdp(X, cone_maps, dims) -> GeneralSDP:
    """Norm of PSD X over states satisfying every (id (x) Phi_t)(rho) >= 0.

    An empty map list leaves plain states, so the optimum is lambda_max(X).
    """
    n, m = _dims_pair(dims)
    Xm = _as_matrix(X)
    if Xm.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {Xm.shape}")
    _check_psd(Xm, "norm argument")
    return GeneralSDP(
        A=Xm,
        constraints=_trace_constraints(n * m),
        cone_maps=tuple(cone_maps),
        dims=(n, m),
    )


# ---------------------------------------------------------------------------
# Conversion to standard form


def _realify_triplets(row, col, val, q):
    """Real triplets of realify(e_{row,col} * val) inside a 2q block."""
    out = []
    re, im = val.real, val.imag
    if re != 0.0:
        out.append((row, col, re))
        out.append((row + q, col + q, re))
    if im != 0.0:
        out.append((row + q, col, im))
        out.append((row, col + q, -im))
    return out


def _block_from_complex_triplets(nvar, q, entries):
    """CSR of realified rows from per-variable complex triplet lists."""
    rows, cols, vals = [], [], []
    two_q = 2 * q
    for l, ts in entries:
        for r, c, v in ts:
            for rr, cc, vv in _realify_triplets(r, c, v, q):
                rows.append(l)
                cols.append(rr * two_q + cc)
                vals.append(vv)
    F = sp.csr_matrix(
        (np.asarray(vals, dtype=float), (np.asarray(rows), np.asarray(cols))),
        shape=(nvar, two_q * two_q),
    )
    F.sum_duplicates()
    return F


def to_standard_form(p: GeneralSDP) -> StandardSDP:
    """Expand the Hermitian variable in the orthonormal basis and realify.

    Produces one realified block per constraint, one per cone map (negated,
    right-hand side zero), and a final negated-identity block enforcing
    X >= 0.  Values are preserved: the standard-form optimum equals the
    general-form optimum, and the standard dual optimum Tr(D W) equals the
    general dual optimum.
    """
    N = p.var_dim
    nvar = hermitian_basis_size(N)
    triplets = hermitian_basis_triplets(N)
    c = basis_project(p.A)
    blocks: list[SdpBlock] = []
    layout: list[BlockInfo] = []

    for bi, (phi, B) in enumerate(p.constraints):
        q = phi.out_dim
        rep = phi.matrix_rep()
        entries = []
        for l, ts in enumerate(triplets):
            img = np.zeros(q * q, dtype=complex)
            for r, cc, v in ts:
                img += v * rep[:, r * N + cc]
            img = img.reshape(q, q)
            tl = [
                (int(u), int(vv), img[u, vv])
                for u, vv in zip(*np.nonzero(np.abs(img) > 1e-15))
            ]
            entries.append((l, tl))
        F = _block_from_complex_triplets(nvar, q, entries)
        blocks.append(SdpBlock(dim=2 * q, D=realify(_as_matrix(B)), F=F))
        layout.append(BlockInfo("constraint", q, bi))

    if p.cone_maps:
        n, m = _dims_pair(p.dims)
        for ti, phi in enumerate(p.cone_maps):
            rep = phi.matrix_rep()  # (m'^2, m^2) on the second factor
            q_small = phi.out_dim
            col_nz = []
            for ab in range(m * m):
                col = rep[:, ab]
                nz = np.nonzero(np.abs(col) > 1e-15)[0]
                col_nz.append([(int(uv) // q_small, int(uv) % q_small, col[uv]) for uv in nz])
            entries = []
            for l, ts in enumerate(triplets):
                tl = []
                for g, h, v in ts:
                    i, a = divmod(g, m)
                    j, b = divmod(h, m)
                    for u, w, cv in col_nz[a * m + b]:
                        tl.append((i * q_small + u, j * q_small + w, -v * cv))
                entries.append((l, tl))
            q = n * q_small
            F = _block_from_complex_triplets(nvar, q, entries)
            blocks.append(SdpBlock(dim=2 * q, D=np.zeros((2 * q, 2 * q)), F=F))
            layout.append(BlockInfo("cone", q, ti))

    entries = [(l, [(r, cc, -v) for r, cc, v in ts]) for l, ts in enumerate(triplets)]
    F = _block_from_complex_triplets(nvar, N, entries)
    blocks.append(SdpBlock(dim=2 * N, D=np.zeros((2 * N, 2 * N)), F=F))
    layout.append(BlockInfo("psd", N, None))
    return StandardSDP(c=c, blocks=blocks, layout=layout)


def psi_apply(p: GeneralSDP, X) -> list:
    """Blocks of the combined constraint map Psi(X) with Psi(X) <= D."""
    Xm = _as_matrix(X)
    out = [phi.apply(Xm) for phi, _ in p.constraints]
    if p.cone_maps:
        from .qops import apply_map_second

        n, m = _dims_pair(p.dims)
        out.extend(-apply_map_second(Xm, phi, (n, m)) for phi in p.cone_maps)
    out.append(-Xm)
    return out


def psi_adjoint_apply(p: GeneralSDP, W_blocks) -> np.ndarray:
    """Adjoint of :func:`psi_apply`: Tr(Psi(X) . W) = Tr(X . Psi_adj(W))."""
    from .qops import adjoint_map, apply_map_second

    ncon = len(p.constraints)
    ncone = len(p.cone_maps)
    if len(W_blocks) != ncon + ncone + 1:
        raise ValueError(f"expected {ncon + ncone + 1} dual blocks, got {len(W_blocks)}")
    N = p.var_dim
    acc = np.zeros((N, N), dtype=complex)
    for (phi, _), W in zip(p.constraints, W_blocks[:ncon]):
        acc += adjoint_map(phi).apply(_as_matrix(W))
    if ncone:
        n, m = _dims_pair(p.dims)
        for phi, W in zip(p.cone_maps, W_blocks[ncon : ncon + ncone]):
            acc -= apply_map_second(_as_matrix(W), adjoint_map(phi), (n, phi.out_dim))
    acc -= _as_matrix(W_blocks[-1])
    return acc


def dump_standard_form(s: StandardSDP, path) -> None:
    """Serialize a standard-form problem to JSON for external cross-checks.

    Dense per-variable F matrices; intended for small instances only.
    """
    doc = {
        "c": s.c.tolist(),
        "blocks": [
            {
                "dim": b.dim,
                "D": b.D.tolist(),
                "F": [b.dense_F(l).tolist() for l in range(s.nvar)],
            }
            for b in s.blocks
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


# ---------------------------------------------------------------------------
# Interior-point solver


def _padded_triplets(block: SdpBlock):
    """Per-row padded (cols_i, cols_j, vals) arrays for the Schur assembly."""
    F = block.F
    d = block.dim
    nvar = F.shape[0]
    counts = np.diff(F.indptr)
    S = max(1, int(counts.max()) if counts.size else 1)
    R = np.zeros((nvar, S), dtype=np.int64)
    C = np.zeros((nvar, S), dtype=np.int64)
    A = np.zeros((nvar, S))
    idx = F.indices
    dat = F.data
    for l in range(nvar):
        lo, hi = F.indptr[l], F.indptr[l + 1]
        k = hi - lo
        flat = idx[lo:hi]
        R[l, :k] = flat // d
        C[l, :k] = flat % d
        A[l, :k] = dat[lo:hi]
    return R, C, A


def _min_eig_scaled(Xchol, dX):
    """Minimum eigenvalue of L^-1 dX L^-T for X = L L^T."""
    L = Xchol
    A = scipy.linalg.solve_triangular(L, dX, lower=True)
    S = scipy.linalg.solve_triangular(L, A.T, lower=True)
    S = (S + S.T) / 2
    return float(np.linalg.eigvalsh(S)[0])


def _step_length(chols, mats, dmats, frac):
    alpha = 1.0
    for L, _, dX in zip(chols, mats, dmats):
        lam = _min_eig_scaled(L, dX)
        if lam < -1e-14:
            alpha = min(alpha, -frac / lam)
    return alpha


def solve(s: StandardSDP, opts: SolverOptions | None = None) -> SolveResult:
    """HKM predictor-corrector interior-point solve of the standard form.

    Infeasible start at x = 0, Z = W = tau * I with tau = 10 (1 + ||D||).
    Declares Optimal once the relative duality gap and both relative
    residuals drop below opts.tol.
    """
    if opts is None:
        opts = SolverOptions()
    # iterates of hopeless (e.g. infeasible) instances may overflow before the
    # explicit finiteness checks fire; the warnings carry no extra information
    errstate = np.errstate(over="ignore", invalid="ignore")
    errstate.__enter__()
    try:
        return _solve_inner(s, opts)
    finally:
        errstate.__exit__(None, None, None)


def _solve_inner(s: StandardSDP, opts: SolverOptions) -> SolveResult:
    c = np.asarray(s.c, dtype=float)
    nvar = c.size
    blocks = s.blocks
    nb = len(blocks)
    dims = [b.dim for b in blocks]
    P = sum(dims)
    Dnorm = max((float(np.linalg.norm(b.D, 2)) for b in blocks), default=0.0)
    DFro = math.sqrt(sum(float(np.sum(b.D * b.D)) for b in blocks))
    cnorm = float(np.linalg.norm(c))
    tau = 10.0 * (1.0 + Dnorm)

    x = np.zeros(nvar)
    Z = [tau * np.eye(d) for d in dims]
    W = [tau * np.eye(d) for d in dims]
    pads = [_padded_triplets(b) for b in blocks]
    chunk_elems = 4_000_000

    def sum_xF(b, xv):
        return (blocks[b].F.T @ xv).reshape(dims[b], dims[b])

    def traces_with_F(b, Q):
        # vector of Tr(F_l Q) = F @ vec(Q^T); Q need not be symmetric
        return blocks[b].F @ np.asarray(Q).T.reshape(-1)

    def current_stats():
        Rp = [blocks[b].D - sum_xF(b, x) - Z[b] for b in range(nb)]
        aw = np.zeros(nvar)
        for b in range(nb):
            aw += blocks[b].F @ W[b].reshape(-1)
        rd = c - aw
        pobj = float(c @ x)
        dobj = sum(float(np.sum(blocks[b].D * W[b])) for b in range(nb))
        pres = math.sqrt(sum(float(np.sum(R * R)) for R in Rp)) / (1.0 + DFro)
        dres = float(np.linalg.norm(rd)) / (1.0 + cnorm)
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        return Rp, rd, pobj, dobj, pres, dres, relgap

    status = SolveStatus.MaxIterations
    iters = 0
    err_hist: list[float] = []
    best_err = math.inf
    best_iterate = None

    for it in range(opts.max_iter):
        iters = it
        Rp, rd, pobj, dobj, pres, dres, relgap = current_stats()
        err = max(pres, dres, relgap)
        err_hist.append(err)
        if err < best_err:
            best_err = err
            best_iterate = (x.copy(), [Zb.copy() for Zb in Z], [Wb.copy() for Wb in W])
        if opts.verbose:
            print(f"iter {it:3d}  pobj {pobj:+.9e}  dobj {dobj:+.9e}  "
                  f"gap {relgap:.2e}  pres {pres:.2e}  dres {dres:.2e}")
        if err <= opts.tol:
            status = SolveStatus.Optimal
            break
        if it >= 30 and len(err_hist) > 30:
            recent = min(err_hist[-30:])
            before = min(err_hist[:-30])
            if recent > 0.99 * before and max(pres, dres) > math.sqrt(opts.tol):
                status = SolveStatus.Infeasible
                break

        try:
            Lz = [np.linalg.cholesky(Zb) for Zb in Z]
            Lw = [np.linalg.cholesky(Wb) for Wb in W]
        except np.linalg.LinAlgError:
            if opts.verbose:
                print("stop: slack/dual block lost positive definiteness")
            status = SolveStatus.NumericalFailure
            break
        Zinv = []
        for b in range(nb):
            ident = np.eye(dims[b])
            Zinv.append(scipy.linalg.cho_solve((Lz[b], True), ident))

        mu = sum(float(np.sum(Z[b] * W[b])) for b in range(nb)) / P

        # Schur complement M_{lk} = sum_b Tr(F_l Zinv F_k W)
        M = np.zeros((nvar, nvar))
        for b in range(nb):
            d = dims[b]
            R, C, A = pads[b]
            Svals = R.shape[1]
            step = max(1, min(nvar, chunk_elems // (d * d)))
            Fb = blocks[b].F
            Wb, Zb_inv = W[b], Zinv[b]
            for lo in range(0, nvar, step):
                hi = min(nvar, lo + step)
                # T_k = W F_k Zinv = sum_s a_s W[:, r_s] outer Zinv[c_s, :]
                Wg = Wb[:, R[lo:hi]].transpose(1, 0, 2) * A[lo:hi][:, None, :]
                Zg = Zb_inv[C[lo:hi], :]
                T = np.matmul(Wg, Zg)
                M[:, lo:hi] += Fb @ T.reshape(hi - lo, d * d).T
        M = (M + M.T) / 2

        g1 = np.zeros(nvar)
        g2 = np.zeros(nvar)
        g3 = np.zeros(nvar)
        for b in range(nb):
            Fb = blocks[b].F
            g1 += Fb @ Zinv[b].reshape(-1)
            g2 += Fb @ W[b].reshape(-1)
            g3 += traces_with_F(b, Zinv[b] @ Rp[b] @ W[b])

        # Factor the Schur complement; escalate a diagonal shift if roundoff
        # made it indefinite, and fall back to an LU solve as a last resort.
        Mfac = None
        lufac = None
        base = float(np.abs(np.diagonal(M)).max()) if nvar else 1.0
        for attempt in range(6):
            jitter = 0.0 if attempt == 0 else base * 10.0 ** (attempt - 15)
            try:
                Mfac = scipy.linalg.cho_factor(
                    M + jitter * np.eye(nvar), lower=True, check_finite=False
                )
                break
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
                continue
        if Mfac is None:
            try:
                lufac = scipy.linalg.lu_factor(M, check_finite=False)
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
                if opts.verbose:
                    print("stop: Schur complement not factorizable")
                status = SolveStatus.NumericalFailure
                break

        def msolve(rhs):
            if Mfac is not None:
                return scipy.linalg.cho_solve(Mfac, rhs, check_finite=False)
            return scipy.linalg.lu_solve(lufac, rhs, check_finite=False)

        def solve_newton(sigma_mu, corr):
            rhs = rd + g2 + g3 - sigma_mu * g1
            if corr is not None:
                gc = np.zeros(nvar)
                for b in range(nb):
                    gc += traces_with_F(b, Zinv[b] @ corr[b])
                rhs = rhs + gc
            dx = msolve(rhs)
            dZ = [Rp[b] - sum_xF(b, dx) for b in range(nb)]
            dW = []
            for b in range(nb):
                rhs_b = dZ[b] @ W[b]
                if corr is not None:
                    rhs_b = rhs_b + corr[b]
                dWb = sigma_mu * Zinv[b] - W[b] - Zinv[b] @ rhs_b
                dW.append((dWb + dWb.T) / 2)
            return dx, dZ, dW

        dx_a, dZ_a, dW_a = solve_newton(0.0, None)
        if not np.all(np.isfinite(dx_a)):
            if opts.verbose:
                print("stop: affine direction not finite")
            status = SolveStatus.NumericalFailure
            break
        ap = _step_length(Lz, Z, dZ_a, 1.0)
        ad = _step_length(Lw, W, dW_a, 1.0)
        mu_aff = sum(
            float(np.sum((Z[b] + ap * dZ_a[b]) * (W[b] + ad * dW_a[b]))) for b in range(nb)
        ) / P
        sigma = min(1.0, max(0.0, (max(mu_aff, 0.0) / mu) ** 3))

        corr = [dZ_a[b] @ dW_a[b] for b in range(nb)]
        dx, dZ, dW = solve_newton(sigma * mu, corr)
        if not np.all(np.isfinite(dx)):
            if opts.verbose:
                print("stop: corrected direction not finite")
            status = SolveStatus.NumericalFailure
            break
        ap = _step_length(Lz, Z, dZ, opts.step_frac)
        ad = _step_length(Lw, W, dW, opts.step_frac)
        if ap < 1e-10 and ad < 1e-10:
            if opts.verbose:
                print(f"stop: step lengths vanished (ap {ap:.2e}, ad {ad:.2e})")
            status = SolveStatus.NumericalFailure
            break
        x = x + ap * dx
        for b in range(nb):
            Z[b] = Z[b] + ap * dZ[b]
            W[b] = W[b] + ad * dW[b]
    else:
        iters = opts.max_iter

    _, _, pobj, dobj, pres, dres, relgap = current_stats()
    if best_iterate is not None and best_err < max(pres, dres, relgap):
        x, Z, W = best_iterate
        _, _, pobj, dobj, pres, dres, relgap = current_stats()
    if status in (SolveStatus.MaxIterations, SolveStatus.NumericalFailure) and (
        max(pres, dres, relgap) <= opts.tol
    ):
        status = SolveStatus.Optimal

    return SolveResult(
        x=x,
        Y_blocks=W,
        primal_obj=pobj,
        dual_obj=dobj,
        gap=relgap,
        primal_residual=pres,
        dual_residual=dres,
        iterations=iters,
        status=status,
    )


def solve_general(p: GeneralSDP, opts: SolverOptions | None = None) -> SolveResult:
    """Convert a general-form problem and solve it; keeps the standard form
    attached to the result so certificates can be extracted later."""
    std = to_standard_form(p)
    res = solve(std, opts)
    res.std = std
    return res


def _clip_psd(Y: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(Y)
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def extract_certificate(p: GeneralSDP, r: SolveResult):
    """Dual certificate (lambda, Z) from a solved norm SDP.

    lambda is the dual objective; Z = (id (x) phi_adj)(Y) built from the
    cone-map dual block is block positive of the same order as phi, and
    lambda >= lambda_max(X + Z) up to solver tolerance.  Requires a problem
    built by build_sk_sdp (exactly one cone map) solved to optimality.
    """
    from .qops import adjoint_map, apply_map_second

    if r.status is not SolveStatus.Optimal:
        raise SdpSolverError(f"no certificate from a solve with status {r.status.value}")
    if r.std is None:
        raise ValueError("result does not carry its standard form")
    cone_positions = [i for i, info in enumerate(r.std.layout) if info.kind == "cone"]
    if len(cone_positions) != 1:
        raise ValueError("certificate extraction expects exactly one cone map")
    pos = cone_positions[0]
    n, m = _dims_pair(p.dims)
    phi = p.cone_maps[0]
    Y = 2.0 * unrealify(r.Y_blocks[pos])
    Y = _clip_psd(Y)
    Z = apply_map_second(Y, adjoint_map(phi), (n, phi.out_dim))
    lam = float(r.dual_obj)
    return lam, HermitianOperator(Z, bipartite=(n, m))
