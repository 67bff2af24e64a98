"""Special operator families: Werner states, Bures-random density matrices,
a recursive projection family, and undistillability threshold formulas.

Werner states (I - alpha S)/(n(n - alpha)) have closed-form restricted norms,
which makes them the main calibration family for the SDP machinery.  The
recursive projections interpolate between the maximally entangled projector
and its complement and have a known S(1) norm reached by the partial
transpose spectrum.  The threshold formulas certify that r copies of a
Werner state admit no distillation protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qops import (
    HermitianOperator,
    max_entangled,
    partial_transpose,
    swap_operator,
)

__all__ = [
    "DimensionCapError",
    "WernerState",
    "ProjectionFamily",
    "UndistillabilityReport",
    "werner",
    "werner_norm_exact",
    "werner_pt_eigs",
    "werner_pt_spectrum",
    "proj_family",
    "proj_s1_exact",
    "proj_s2_upper",
    "proj_pt_max_eig",
    "p_value",
    "undistill_threshold",
    "undistill_threshold_simple",
    "check_r_undistillable",
    "haar_unitary",
    "bures_sample",
    "random_projection",
    "brandao_rhs",
]

DIMENSION_CAP = 4096


class DimensionCapError(ValueError):
    """Requested construction would materialize a matrix beyond the cap."""


def _check_cap(dim: int, cap: int):
    if dim > cap:
        raise DimensionCapError(
            f"matrix dimension {dim} exceeds the cap {cap}; "
            "raise the cap explicitly if you really want this"
        )


def _check_werner_params(n, alpha):
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")


def werner(n: int, alpha: float) -> HermitianOperator:
    """Werner state (I - alpha S)/(n(n - alpha)) on C^n (x) C^n."""
    _check_werner_params(n, alpha)
    S = np.asarray(swap_operator(n))
    mat = (np.eye(n * n) - alpha * S) / (n * (n - alpha))
    return HermitianOperator(mat, bipartite=(n, n))


def werner_norm_exact(n: int, alpha: float, k: int) -> float:
    """Closed-form S(k) norm of the Werner state.

    S(1) sees only the negative part of alpha; every k >= 2 reaches the
    swap eigenvector of eigenvalue -sign(alpha), giving (1 + |alpha|).
    """
    _check_werner_params(n, alpha)
    if int(k) != k or not 1 <= k <= n:
        raise ValueError(f"k must be an integer in [1, {n}], got {k}")
    if k == 1:
        return (1.0 + abs(min(alpha, 0.0))) / (n * (n - alpha))
    return (1.0 + abs(alpha)) / (n * (n - alpha))


@dataclass(frozen=True)
class WernerState:
    """Parameter pair (n, alpha) with its materialized state on demand."""

    n: int
    alpha: float

    def __post_init__(self):
        _check_werner_params(self.n, self.alpha)

    def matrix(self) -> HermitianOperator:
        return werner(self.n, self.alpha)

    def norm_sk(self, k: int) -> float:
        return werner_norm_exact(self.n, self.alpha, k)


def werner_pt_eigs(n: int, alpha: float, r: int, normalized: bool = False):
    """Distinct eigenvalues (1 - alpha n)^m, m = 0..r, of the partial
    transpose of the r-fold tensor power in its unnormalized (I - alpha S)
    form; ``normalized`` rescales by the state normalization (n(n-alpha))^-r.
    """
    _check_werner_params(n, alpha)
    if int(r) != r or r < 1:
        raise ValueError(f"r must be an integer >= 1, got {r}")
    _check_cap((n * n) ** r, DIMENSION_CAP)
    vals = np.array([(1.0 - alpha * n) ** m for m in range(r + 1)])
    if normalized:
        vals = vals / (n * (n - alpha)) ** r
    return vals


def _pair_to_bipartite(P: np.ndarray, n: int, r: int) -> np.ndarray:
    # factors ordered (a1 b1)(a2 b2)...(ar br) -> (a1..ar)(b1..br)
    t = P.reshape((n,) * (2 * r) * 2)
    perm = list(range(0, 2 * r, 2)) + list(range(1, 2 * r, 2))
    full = perm + [2 * r + q for q in perm]
    return t.transpose(full).reshape(n**r * n**r, n**r * n**r)


def werner_pt_spectrum(n: int, alpha: float, r: int, normalized: bool = False):
    """Eigenvalues (ascending, with multiplicity) of the explicitly built
    partial transpose of the r-fold Werner tensor power.

    Cross-checks the closed-form list from werner_pt_eigs; unnormalized
    means eigenvalues of the (I - alpha S)-tensor structure.
    """
    _check_werner_params(n, alpha)
    if int(r) != r or r < 1:
        raise ValueError(f"r must be an integer >= 1, got {r}")
    dim = (n * n) ** r
    _check_cap(dim, DIMENSION_CAP)
    rho = np.asarray(werner(n, alpha))
    if not normalized:
        rho = rho * (n * (n - alpha))
    full = rho.copy()
    for _ in range(r - 1):
        full = np.kron(full, rho)
    bip = _pair_to_bipartite(full, n, r)
    pt = np.asarray(partial_transpose(bip, (n**r, n**r)))
    return np.linalg.eigvalsh(pt)


@dataclass(frozen=True)
class ProjectionFamily:
    """Recursive projection on (C^n (x) C^n)^(x r), bipartite (n^r, n^r)."""

    n: int
    r: int
    matrix: HermitianOperator

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(np.asarray(self.matrix))))))


def proj_family(n: int, r: int, cap: int = DIMENSION_CAP) -> ProjectionFamily:
    """Build the recursion P_1 = E, P_r = (I-E)(x)P_{r-1} + E(x)(I-P_{r-1}).

    The recursion lives in pair ordering (a1 b1)...(ar br); the returned
    matrix is permuted to the bipartite split (a1..ar)(b1..br) so the
    second tensor factor is everything on the B side.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if int(r) != r or r < 1:
        raise ValueError(f"r must be an integer >= 1, got {r}")
    _check_cap((n * n) ** r, cap)
    E = np.asarray(max_entangled(n))
    P = E.copy()
    for _ in range(r - 1):
        d = P.shape[0]
        P = np.kron(np.eye(n * n) - E, P) + np.kron(E, np.eye(d) - P)
    mat = _pair_to_bipartite(P, n, r)
    return ProjectionFamily(n=n, r=r, matrix=HermitianOperator(mat, bipartite=(n**r, n**r)))


def proj_s1_exact(n: int, r: int) -> float:
    """Closed-form S(1) norm 1/2 - (1/2)(1 - 2/n)^r of the projection."""
    return 0.5 - 0.5 * (1.0 - 2.0 / n) ** r


def proj_s2_upper(n: int, r: int) -> float:
    """Upper bound 1 - (1 - 2/n)^r on the S(2) norm (vacuous at n = 2)."""
    return 1.0 - (1.0 - 2.0 / n) ** r


def proj_pt_max_eig(n: int, r: int) -> float:
    """Largest eigenvalue of the partially transposed projection.

    Coincides with proj_s1_exact: the transpose-map bound is tight on this
    family.  Returned in closed form; tests match it against the eigensolver
    on the materialized matrix.
    """
    return 0.5 - 0.5 * (1.0 - 2.0 / n) ** r


# ---------------------------------------------------------------------------
# Undistillability thresholds


def p_value(n: int, r: int) -> float:
    """p = (n-2)^r / (n^r - (n-2)^r); zero at n = 2."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if int(r) != r or r < 1:
        raise ValueError(f"r must be an integer >= 1, got {r}")
    if n == 2:
        return 0.0
    num = float(n - 2) ** r
    return num / (float(n) ** r - num)


def undistill_threshold(n: int, r: int) -> float | None:
    """Largest alpha certified r-undistillable by the eigenvalue argument.

    Defined only when p >= 1; the exponent weakens from 1/r to 1/(r-1) at
    even r (the argument pairs up negative partial-transpose eigenvalues).
    """
    p = p_value(n, r)
    if p < 1.0:
        return None
    if r % 2 == 1:
        return (p ** (1.0 / r) + 1.0) / n
    return (p ** (1.0 / (r - 1)) + 1.0) / n


def undistill_threshold_simple(n: int, r: int) -> float:
    """Dimension-free fallback threshold min{2/n, ln2/(r + 3 ln2 - 1)}."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if int(r) != r or r < 1:
        raise ValueError(f"r must be an integer >= 1, got {r}")
    return min(2.0 / n, math.log(2.0) / (r + 3.0 * math.log(2.0) - 1.0))


@dataclass(frozen=True)
class UndistillabilityReport:
    n: int
    r: int
    alpha: float
    p: float
    threshold: float | None
    simple_threshold: float
    certified: bool


def check_r_undistillable(n: int, r: int, alpha: float) -> UndistillabilityReport:
    """Certify that r copies of werner(n, alpha) cannot be distilled.

    Certification succeeds when alpha clears either threshold; a False
    verdict is inconclusive, not a distillability proof.
    """
    _check_werner_params(n, alpha)
    p = p_value(n, r)
    thr = undistill_threshold(n, r)
    simple = undistill_threshold_simple(n, r)
    certified = (thr is not None and alpha <= thr) or alpha <= simple
    return UndistillabilityReport(
        n=n, r=r, alpha=alpha, p=p, threshold=thr, simple_threshold=simple, certified=certified
    )


# ---------------------------------------------------------------------------
# Random ensembles


def _rng_of(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_unitary(n: int, seed=0) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with the phases of
    the triangular factor's diagonal absorbed into Q."""
    rng = _rng_of(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(A)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def bures_sample(dim, seed=0) -> HermitianOperator:
    """One density matrix from the Bures measure.

    rho proportional to (I + U) G G^dag (I + U)^dag with G a square standard
    complex Gaussian and U Haar; G is drawn before U from the same stream,
    so a fixed seed reproduces the sample exactly.  ``dim`` may be a
    bipartite pair (n, m), in which case the result carries the split.
    """
    bip = None
    if isinstance(dim, tuple):
        bip = (int(dim[0]), int(dim[1]))
        d = bip[0] * bip[1]
    else:
        d = int(dim)
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    rng = _rng_of(seed)
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    U = haar_unitary(d, rng)
    A = (np.eye(d) + U) @ G
    rho = A @ A.conj().T
    rho = rho / np.real(np.trace(rho))
    return HermitianOperator(rho, bipartite=bip)


def random_projection(n: int, rank: int, seed=0, cap: int = DIMENSION_CAP) -> HermitianOperator:
    """Rank-`rank` projection on C^n (x) C^n from a Haar frame: the span of
    the first `rank` columns of a Haar unitary on the product space."""
    if not 1 <= rank <= n * n:
        raise ValueError(f"rank must lie in [1, {n * n}], got {rank}")
    _check_cap(n * n, cap)
    V = haar_unitary(n * n, seed)[:, :rank]
    return HermitianOperator(V @ V.conj().T, bipartite=(n, n))


def brandao_rhs(n: int, rank_P: int, eps: float) -> float:
    """Comparison value sqrt(rank / n^(2+eps)) for S(1) norms of rank-rank_P
    projections on C^n (x) C^n."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not 1 <= rank_P <= n * n:
        raise ValueError(f"rank_P must lie in [1, {n * n}], got {rank_P}")
    return math.sqrt(rank_P / float(n) ** (2.0 + eps))
