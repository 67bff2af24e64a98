"""Schmidt decompositions of bipartite pure states.

A vector v in H_n (x) H_m is reshaped to the n x m coefficient matrix with
the amplitude of |i>(x)|j> at entry (i, j); its singular values are the
Schmidt coefficients.  For a rank-one operator |v><v| the S(k) norm is the
sum of the k largest squared Schmidt coefficients, which is what
:func:`pure_norm_sk` evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qops import _dims_pair

STATE_NORM_ATOL = 1e-10

__all__ = [
    "PureState",
    "SchmidtDecomposition",
    "schmidt_decompose",
    "schmidt_rank",
    "pure_norm_sk",
    "random_rank_k_state",
]


def _as_vector(v) -> np.ndarray:
    if isinstance(v, PureState):
        return v.amplitudes
    return np.asarray(v, dtype=complex).reshape(-1)


@dataclass(frozen=True)
class PureState:
    """Unit vector on H_n (x) H_m; norm checked to 1e-10 at construction."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n, m = _dims_pair(self.dims)
        if amps.size != n * m:
            raise ValueError(f"state has {amps.size} amplitudes, dims {self.dims} need {n * m}")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > STATE_NORM_ATOL:
            raise ValueError(f"state norm {nrm!r} differs from 1 beyond {STATE_NORM_ATOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", (n, m))

    def __array__(self, dtype=None, copy=None):
        out = np.asarray(self.amplitudes)
        return out if dtype is None else out.astype(dtype)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Coefficients (descending, >= 0) with orthonormal left/right vectors.

    Reconstruction: v = sum_i coeffs[i] * (left[:, i] (x) right[:, i]).
    """

    coeffs: np.ndarray
    left: np.ndarray   # (n, r) columns orthonormal
    right: np.ndarray  # (m, r) columns orthonormal
    dims: tuple[int, int]

    def reconstruct(self) -> np.ndarray:
        n, m = self.dims
        M = (self.left * self.coeffs) @ self.right.T
        return M.reshape(n * m)


def schmidt_decompose(v, dims=None) -> SchmidtDecomposition:
    """SVD-based Schmidt decomposition of a bipartite vector.

    Returns min(n, m) coefficients sorted descending; squared coefficients of
    a unit vector sum to 1.
    """
    if dims is None:
        if not isinstance(v, PureState):
            raise ValueError("dims required unless a PureState is given")
        dims = v.dims
    n, m = _dims_pair(dims)
    vec = _as_vector(v)
    if vec.size != n * m:
        raise ValueError(f"vector of size {vec.size} incompatible with dims {dims}")
    M = vec.reshape(n, m)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    return SchmidtDecomposition(coeffs=s, left=U, right=Vh.T, dims=(n, m))


def schmidt_rank(v, dims=None, tol: float | None = None) -> int:
    """Number of Schmidt coefficients above ``tol``.

    Default tolerance is 1e-8 relative to the largest coefficient, so a
    numerically-zero vector has rank 0.
    """
    dec = schmidt_decompose(v, dims)
    top = dec.coeffs[0] if dec.coeffs.size else 0.0
    if tol is None:
        tol = 1e-8 * top
    return int(np.count_nonzero(dec.coeffs > tol))


def pure_norm_sk(v, k: int, dims=None) -> float:
    """S(k) norm of |v><v|: the sum of the k largest squared Schmidt coeffs."""
    if dims is None and isinstance(v, PureState):
        dims = v.dims
    n, m = _dims_pair(dims)
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= {m}, got {k}")
    dec = schmidt_decompose(v, (n, m))
    return float(np.sum(dec.coeffs[:k] ** 2))


def random_rank_k_state(dims, k: int, seed=0) -> PureState:
    """Sample a unit vector of Schmidt rank <= k, deterministically per seed.

    Draws orthonormal frames on both factors from Ginibre QR and combines
    them with complex Gaussian weights.  ``seed`` is anything accepted by
    numpy's default_rng, including a Generator.
    """
    n, m = _dims_pair(dims)
    if not 1 <= k <= min(n, m):
        raise ValueError(f"k must satisfy 1 <= k <= {min(n, m)}, got {k}")
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    B = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    w = rng.normal(size=k) + 1j * rng.normal(size=k)
    M = (qa * w) @ qb.T
    vec = M.reshape(n * m)
    vec /= np.linalg.norm(vec)
    return PureState(vec, (n, m))
