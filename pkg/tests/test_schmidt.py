"""Schmidt decomposition, rank counting, and the rank-restricted norm of
rank-one projectors (sum of the k largest squared coefficients)."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sknorms.schmidt import (
    PureState,
    pure_norm_sk,
    random_rank_k_state,
    schmidt_decompose,
    schmidt_rank,
)

DIMS = [(2, 2), (3, 2), (2, 3), (3, 3), (4, 3)]


def random_state(rng, dims):
    n, m = dims
    v = rng.standard_normal(n * m) + 1j * rng.standard_normal(n * m)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------- decompose


def test_decompose_product_state():
    v = np.kron([1, 0], [0, 1]).astype(complex)
    d = schmidt_decompose(v, (2, 2))
    assert np.allclose(d.coeffs, [1.0, 0.0])  # full spectrum, zeros kept
    assert schmidt_rank(v, (2, 2)) == 1


def test_decompose_max_entangled():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    d = schmidt_decompose(v, (2, 2))
    assert np.allclose(d.coeffs, [1 / np.sqrt(2)] * 2)
    assert schmidt_rank(v, (2, 2)) == 2


@given(st.integers(0, 2**32 - 1), st.sampled_from(DIMS))
def test_decompose_reconstructs(seed, dims):
    rng = np.random.default_rng(seed)
    v = random_state(rng, dims)
    d = schmidt_decompose(v, dims)
    assert np.linalg.norm(d.reconstruct() - v) <= 1e-9
    # coefficients descending, nonnegative, unit 2-norm
    assert np.all(np.diff(d.coeffs) <= 1e-15)
    assert np.all(d.coeffs >= 0)
    assert np.sum(d.coeffs**2) == pytest.approx(1.0)
    # orthonormal factors
    r = d.coeffs.size
    assert np.allclose(d.left.conj().T @ d.left, np.eye(r), atol=1e-10)
    assert np.allclose(d.right.conj().T @ d.right, np.eye(r), atol=1e-10)


def test_decompose_reconstructs_bulk():
    # dense sweep at fixed seed, all dims
    rng = np.random.default_rng(99)
    for _ in range(1000):
        dims = DIMS[rng.integers(len(DIMS))]
        v = random_state(rng, dims)
        d = schmidt_decompose(v, dims)
        assert np.linalg.norm(d.reconstruct() - v) <= 1e-9


def test_decompose_accepts_pure_state_objects():
    s = random_rank_k_state((3, 3), 2, seed=4)
    d = schmidt_decompose(s)
    assert d.dims == (3, 3)
    assert np.linalg.norm(d.reconstruct() - np.asarray(s)) <= 1e-9


def test_decompose_requires_dims_for_plain_vectors():
    with pytest.raises(ValueError):
        schmidt_decompose(np.ones(4) / 2)


# ---------------------------------------------------------------- rank


def test_rank_counts_with_tolerance():
    eps = 1e-12
    v = np.array([1.0, 0, 0, eps])
    v /= np.linalg.norm(v)
    assert schmidt_rank(v, (2, 2)) == 1  # default tol absorbs eps
    assert schmidt_rank(v, (2, 2), tol=1e-14) == 2


@given(st.integers(0, 2**32 - 1), st.sampled_from(DIMS), st.integers(1, 3))
def test_random_rank_k_state_has_rank_at_most_k(seed, dims, k):
    k = min(k, *dims)
    s = random_rank_k_state(dims, k, seed=seed)
    assert schmidt_rank(s) <= k
    assert np.linalg.norm(np.asarray(s)) == pytest.approx(1.0)


def test_random_rank_k_state_deterministic():
    a = random_rank_k_state((3, 3), 2, seed=7)
    b = random_rank_k_state((3, 3), 2, seed=7)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    c = random_rank_k_state((3, 3), 2, seed=8)
    assert not np.allclose(np.asarray(a), np.asarray(c))


def test_random_rank_k_state_generically_full_rank():
    rng = np.random.default_rng(0)
    for seed in rng.integers(0, 2**31, size=20):
        s = random_rank_k_state((3, 3), 3, seed=int(seed))
        assert schmidt_rank(s) == 3


def test_random_rank_k_state_rejects_bad_k():
    with pytest.raises(ValueError):
        random_rank_k_state((3, 2), 0)
    with pytest.raises(ValueError):
        random_rank_k_state((3, 2), 3)  # k > min(n, m)


# ---------------------------------------------------------------- pure norms


def test_pure_norm_sk_closed_forms():
    ent = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert pure_norm_sk(ent, 1, (2, 2)) == pytest.approx(0.5)
    assert pure_norm_sk(ent, 2, (2, 2)) == pytest.approx(1.0)
    prod = np.kron([1, 0], [1, 0]).astype(float)
    assert pure_norm_sk(prod, 1, (2, 2)) == pytest.approx(1.0)


@given(st.integers(0, 2**32 - 1), st.sampled_from(DIMS))
def test_pure_norm_sk_profile(seed, dims):
    rng = np.random.default_rng(seed)
    v = random_state(rng, dims)
    kmax = min(dims)
    vals = [pure_norm_sk(v, k, dims) for k in range(1, kmax + 1)]
    # monotone in k, >= 1/min(n,m) at k=1, exactly 1 at k=min(n,m)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[0] >= 1.0 / kmax - 1e-12
    assert vals[-1] == pytest.approx(1.0, abs=1e-10)
    # matches the explicit coefficient sum
    d = schmidt_decompose(v, dims)
    for k, val in enumerate(vals, start=1):
        assert val == pytest.approx(np.sum(d.coeffs[:k] ** 2), abs=1e-12)


def test_pure_norm_sk_k_range():
    v = np.array([1, 0, 0, 0.0])
    with pytest.raises(ValueError):
        pure_norm_sk(v, 0, (2, 2))
    with pytest.raises(ValueError):
        pure_norm_sk(v, 3, (2, 2))


def test_pure_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        PureState(np.ones(4), (2, 2))
    with pytest.raises(ValueError):
        PureState(np.zeros(4), (2, 2))
