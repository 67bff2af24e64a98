"""Bipartite operator algebra.

Dense complex kernels used by the rest of the library: tensor products, the
swap and maximally-entangled operators, partial transposition, linear maps in
generalized operator-sum form (pairs (E_a, F_a) acting as
X -> sum_a E_a X F_a), Hermitian eigendecomposition, and the complex-to-real
symmetric embedding consumed by the real-arithmetic SDP solver.

All containers are immutable after construction and all operations are pure
functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

HERM_ATOL = 1e-12

__all__ = [
    "HERM_ATOL",
    "HermitianOperator",
    "BipartiteDims",
    "MapRep",
    "OperatorFormatError",
    "kron",
    "swap_operator",
    "max_entangled",
    "partial_transpose",
    "apply_map_second",
    "adjoint_map",
    "transpose_map",
    "reduction_map",
    "identity_map",
    "hermitian_eig",
    "realify",
    "unrealify",
    "load_operator",
    "save_operator",
]


class OperatorFormatError(ValueError):
    """Raised when an operator file does not match the expected layout."""


def _as_matrix(X) -> np.ndarray:
    if isinstance(X, HermitianOperator):
        return X.mat
    return np.asarray(X, dtype=complex)


class BipartiteDims(NamedTuple):
    """Dimensions (n, m) of a bipartite space H_n (x) H_m, both factors >= 2."""

    n: int
    m: int

    @property
    def total(self) -> int:
        return self.n * self.m

    def validate(self) -> "BipartiteDims":
        if self.n < 2 or self.m < 2:
            raise ValueError(f"bipartite factors must each be >= 2, got {tuple(self)}")
        return self


def _dims_pair(dims) -> tuple[int, int]:
    n, m = dims
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ValueError(f"invalid bipartite dims {dims!r}")
    return n, m


@dataclass(frozen=True)
class HermitianOperator:
    """A dense complex Hermitian matrix with an optional bipartite tag.

    The constructor rejects inputs whose anti-Hermitian part exceeds 1e-12 in
    absolute value and then symmetrizes the matrix as (X + X^dag)/2, so later
    eigendecompositions never see accumulated drift.  ``bipartite`` is a pair
    (n, m) with n * m equal to the matrix dimension.
    """

    mat: np.ndarray
    bipartite: tuple[int, int] | None = None

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        dev = float(np.abs(m - m.conj().T).max()) if m.size else 0.0
        if dev > HERM_ATOL:
            raise ValueError(
                f"matrix is not Hermitian: max deviation {dev:.3e} exceeds {HERM_ATOL:.0e}"
            )
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        if self.bipartite is not None:
            n, mm = _dims_pair(self.bipartite)
            if n * mm != m.shape[0]:
                raise ValueError(
                    f"bipartite dims {self.bipartite} incompatible with dimension {m.shape[0]}"
                )
            object.__setattr__(self, "bipartite", (n, mm))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        out = np.asarray(self.mat)
        return out if dtype is None else out.astype(dtype)


def kron(A, B) -> np.ndarray:
    """Kronecker product, first factor varying slowest."""
    return np.kron(np.asarray(_as_matrix(A)), np.asarray(_as_matrix(B)))


def swap_operator(n: int) -> HermitianOperator:
    """Swap operator S = sum_ij |i><j| (x) |j><i| on H_n (x) H_n.

    Eigenvalues are +1 on the symmetric subspace (multiplicity n(n+1)/2) and
    -1 on the antisymmetric one (multiplicity n(n-1)/2).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    S = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            S[a * n + b, b * n + a] = 1.0
    return HermitianOperator(S, bipartite=(n, n))


def max_entangled(n: int) -> HermitianOperator:
    """Projection E = |omega><omega| onto omega = (1/sqrt n) sum_i |ii>."""
    if n < 1:
        raise ValueError("n must be >= 1")
    omega = np.zeros(n * n)
    omega[:: n + 1] = 1.0 / np.sqrt(n)
    return HermitianOperator(np.outer(omega, omega), bipartite=(n, n))


def partial_transpose(X, dims=None):
    """Transpose the second tensor factor of an operator on H_n (x) H_m.

    ``dims`` may be omitted when X is a HermitianOperator carrying a
    bipartite tag.  Returns the same kind of object it was given.
    """
    wrapped = isinstance(X, HermitianOperator)
    if dims is None:
        if not wrapped or X.bipartite is None:
            raise ValueError("dims required when the input carries no bipartite tag")
        dims = X.bipartite
    n, m = _dims_pair(dims)
    mat = _as_matrix(X)
    if mat.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {mat.shape}")
    out = mat.reshape(n, m, n, m).transpose(0, 3, 2, 1).reshape(n * m, n * m)
    if wrapped:
        return HermitianOperator(out, bipartite=(n, m))
    return out


@dataclass(frozen=True)
class MapRep:
    """Linear map on matrices in generalized operator-sum form.

    Represents Phi(X) = sum_a E_a X F_a with E_a of shape (out_dim, in_dim)
    and F_a of shape (in_dim, out_dim).  Construction verifies on a small
    randomized set that Phi maps Hermitian matrices to Hermitian matrices
    (tolerance 1e-10); non-Hermiticity-preserving pair lists are rejected.
    """

    E: np.ndarray  # (K, out_dim, in_dim)
    F: np.ndarray  # (K, in_dim, out_dim)
    name: str = ""

    def __post_init__(self):
        E = np.array(self.E, dtype=complex)
        F = np.array(self.F, dtype=complex)
        if E.ndim != 3 or F.ndim != 3 or E.shape[0] != F.shape[0]:
            raise ValueError("E and F must be stacks of equally many matrices")
        K, out_dim, in_dim = E.shape
        if F.shape != (K, in_dim, out_dim):
            raise ValueError(f"F shape {F.shape} incompatible with E shape {E.shape}")
        E.setflags(write=False)
        F.setflags(write=False)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "F", F)
        rng = np.random.default_rng(0x5EED)
        for _ in range(3):
            G = rng.normal(size=(in_dim, in_dim)) + 1j * rng.normal(size=(in_dim, in_dim))
            H = G + G.conj().T
            out = self.apply(H)
            if np.abs(out - out.conj().T).max() > 1e-10 * max(1.0, np.abs(out).max()):
                raise ValueError("map is not Hermiticity-preserving")

    @classmethod
    def from_pairs(cls, pairs, name: str = "") -> "MapRep":
        E = np.stack([np.asarray(e, dtype=complex) for e, _ in pairs])
        F = np.stack([np.asarray(f, dtype=complex) for _, f in pairs])
        return cls(E, F, name=name)

    @property
    def pairs(self):
        return list(zip(self.E, self.F))

    @property
    def in_dim(self) -> int:
        return self.E.shape[2]

    @property
    def out_dim(self) -> int:
        return self.E.shape[1]

    def apply(self, X) -> np.ndarray:
        X = _as_matrix(X)
        return np.einsum("kua,ab,kbv->uv", self.E, X, self.F, optimize=True)

    def matrix_rep(self) -> np.ndarray:
        """Matrix of the map w.r.t. row-major vectorization.

        Returns M of shape (out_dim^2, in_dim^2) with
        vec(Phi(X)) = M @ vec(X), vec(X) = X.reshape(-1).
        """
        out_d, in_d = self.out_dim, self.in_dim
        M = np.einsum("kua,kbv->uvab", self.E, self.F, optimize=True)
        return M.reshape(out_d * out_d, in_d * in_d)


def adjoint_map(phi: MapRep) -> MapRep:
    """Adjoint w.r.t. the trace pairing: Tr(Phi(X) Y) = Tr(X Phi_adj(Y))."""
    return MapRep(phi.F, phi.E, name=f"{phi.name}^adj" if phi.name else "")


def transpose_map(m: int) -> MapRep:
    """The transpose X -> X^T on m x m matrices, in operator-sum form."""
    units = np.zeros((m * m, m, m))
    for i in range(m):
        for j in range(m):
            units[i * m + j, i, j] = 1.0
    return MapRep(units, units, name="transpose")


def reduction_map(m: int) -> MapRep:
    """The reduction map X -> Tr(X) I - X on m x m matrices."""
    K = m * m + 1
    E = np.zeros((K, m, m), dtype=complex)
    F = np.zeros((K, m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            E[i * m + j, i, j] = 1.0
            F[i * m + j, j, i] = 1.0
    E[-1] = np.eye(m)
    F[-1] = -np.eye(m)
    return MapRep(E, F, name="reduction")


def identity_map(m: int) -> MapRep:
    return MapRep(np.eye(m)[None], np.eye(m)[None], name="identity")


def apply_map_second(X, phi: MapRep, dims) -> np.ndarray:
    """Apply id_n (x) Phi to an operator on H_n (x) H_m.

    Phi acts on the second factor; its in_dim must equal m.  The result has
    dimension n * phi.out_dim.
    """
    n, m = _dims_pair(dims)
    mat = _as_matrix(X)
    if mat.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {mat.shape}")
    if phi.in_dim != m:
        raise ValueError(f"map acts on dimension {phi.in_dim}, second factor has {m}")
    X4 = mat.reshape(n, m, n, m)
    out4 = np.einsum("kua,iajb,kbv->iujv", phi.E, X4, phi.F, optimize=True)
    q = phi.out_dim
    return out4.reshape(n * q, n * q)


def hermitian_eig(H):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Rejects inputs that fail the 1e-12 Hermiticity check rather than
    silently symmetrizing garbage.
    """
    mat = _as_matrix(H)
    if np.abs(mat - mat.conj().T).max() > HERM_ATOL * max(1.0, float(np.abs(mat).max())):
        raise ValueError("input is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(mat)
    return vals, vecs


def realify(H) -> np.ndarray:
    """Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of Hermitian H.

    Doubles every eigenvalue multiplicity and the trace; positive
    semidefiniteness is preserved in both directions.
    """
    mat = _as_matrix(H)
    return np.block([[mat.real, -mat.imag], [mat.imag, mat.real]])


def unrealify(W) -> np.ndarray:
    """Inverse of :func:`realify` on the swap-invariant average of W.

    For symmetric W of even dimension 2q this returns the Hermitian Y with
    realify(Y) = (W + J W J^T)/2 where J is the embedded multiplication by i.
    Satisfies Tr(realify(Q) @ W) = 2 Tr(Q @ unrealify(W)) for Hermitian Q, so
    callers converting dual SDP blocks back to complex form must keep the
    factor 2.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] % 2:
        raise ValueError(f"expected a square even-dimensional matrix, got {W.shape}")
    q = W.shape[0] // 2
    re = (W[:q, :q] + W[q:, q:]) / 2
    im = (W[q:, :q] - W[:q, q:]) / 2
    Y = re + 1j * im
    return (Y + Y.conj().T) / 2


def save_operator(path, X, dims=None) -> None:
    """Write an operator to the JSON interchange format.

    Layout: {"n": int, "m": int, "real": [[...]], "imag": [[...]]} with the
    matrix of dimension n*m.
    """
    if dims is None:
        if not (isinstance(X, HermitianOperator) and X.bipartite is not None):
            raise ValueError("dims required when the input carries no bipartite tag")
        dims = X.bipartite
    n, m = _dims_pair(dims)
    mat = _as_matrix(X)
    if mat.shape[0] != n * m:
        raise ValueError(f"dims {dims} incompatible with shape {mat.shape}")
    doc = {
        "n": n,
        "m": m,
        "real": mat.real.tolist(),
        "imag": mat.imag.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_operator(path) -> HermitianOperator:
    """Read an operator from the JSON interchange format.

    Raises OperatorFormatError on malformed documents and ValueError when the
    matrix fails the Hermiticity check.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise OperatorFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise OperatorFormatError("top-level JSON value must be an object")
    for key in ("n", "m", "real", "imag"):
        if key not in doc:
            raise OperatorFormatError(f"missing field {key!r}")
    try:
        n, m = int(doc["n"]), int(doc["m"])
        re = np.asarray(doc["real"], dtype=float)
        im = np.asarray(doc["imag"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise OperatorFormatError(f"malformed numeric payload: {exc}") from exc
    if n < 1 or m < 1:
        raise OperatorFormatError(f"factor dims must be positive, got ({n}, {m})")
    d = n * m
    if re.shape != (d, d) or im.shape != (d, d):
        raise OperatorFormatError(
            f"matrix blocks must have shape ({d}, {d}), got {re.shape} and {im.shape}"
        )
    return HermitianOperator(re + 1j * im, bipartite=(n, m))
