"""State families and experiment inputs: the one-parameter unitarily
invariant family, iterated projection construction, undistillability
thresholds, and measure-based random sampling."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sknorms.qops import HermitianOperator, max_entangled, partial_transpose, swap_operator
from sknorms.states import (
    DIMENSION_CAP,
    DimensionCapError,
    ProjectionFamily,
    WernerState,
    brandao_rhs,
    bures_sample,
    check_r_undistillable,
    haar_unitary,
    p_value,
    proj_family,
    proj_pt_max_eig,
    proj_s1_exact,
    proj_s2_upper,
    random_projection,
    undistill_threshold,
    undistill_threshold_simple,
    werner,
    werner_norm_exact,
    werner_pt_eigs,
    werner_pt_spectrum,
)


# ---------------------------------------------------------------- werner family


def test_werner_at_zero_is_maximally_mixed():
    W = np.asarray(werner(2, 0.0))
    assert np.allclose(W, np.eye(4) / 4)


def test_werner_is_a_state():
    for n in (2, 3):
        for alpha in (-1, -0.5, 0, 0.5, 1):
            W = np.asarray(werner(n, alpha))
            assert np.trace(W).real == pytest.approx(1.0)
            assert np.linalg.eigvalsh(W).min() >= -1e-12


def test_werner_unitary_invariance():
    # (U (x) U) rho (U (x) U)^dag = rho for every unitary U
    rho = np.asarray(werner(3, 0.7))
    U = np.asarray(haar_unitary(3, seed=11))
    UU = np.kron(U, U)
    assert np.allclose(UU @ rho @ UU.conj().T, rho, atol=1e-12)


def test_werner_rejects_alpha_out_of_range():
    with pytest.raises(ValueError):
        werner(2, 1.5)
    with pytest.raises(ValueError):
        werner(2, -1.0001)


def test_werner_norm_exact_values():
    # closed forms: k = 1 keeps only the negative part of alpha; k >= 2 sees |alpha|
    assert werner_norm_exact(2, 0.5, 1) == pytest.approx(1 / (2 * 1.5))
    assert werner_norm_exact(2, -0.5, 1) == pytest.approx(1.5 / (2 * 2.5))
    assert werner_norm_exact(2, -0.5, 2) == pytest.approx(1.5 / (2 * 2.5))
    assert werner_norm_exact(3, 0.5, 2) == pytest.approx(1.5 / (3 * 2.5))
    assert werner_norm_exact(3, 0.0, 1) == pytest.approx(1 / 9)


@given(
    st.sampled_from([2, 3, 4]),
    st.floats(-1, 1, allow_nan=False),
    st.integers(1, 3),
)
def test_werner_norm_exact_properties(n, alpha, k):
    k = min(k, n)
    val = werner_norm_exact(n, alpha, k)
    assert val > 0
    # monotone in k, and k >= 2 values coincide
    if k + 1 <= n:
        assert werner_norm_exact(n, alpha, k + 1) >= val - 1e-15
    if k >= 2 and k + 1 <= n:
        assert werner_norm_exact(n, alpha, k + 1) == pytest.approx(val)


def test_werner_norm_exact_k_range():
    with pytest.raises(ValueError):
        werner_norm_exact(2, 0.5, 0)
    with pytest.raises(ValueError):
        werner_norm_exact(2, 0.5, 3)


def test_werner_state_dataclass():
    s = WernerState(3, -0.5)
    assert np.allclose(np.asarray(s.matrix()), np.asarray(werner(3, -0.5)))
    assert s.norm_sk(1) == pytest.approx(werner_norm_exact(3, -0.5, 1))


def test_werner_pt_eigs_closed_form():
    # r-fold tensor power of the unnormalized family has partial-transpose
    # eigenvalues (1 - alpha n)^m, m = 0..r
    got = werner_pt_eigs(3, 0.5, 2)
    assert np.allclose(sorted(got), sorted([1.0, -0.5, 0.25]))
    norm = werner_pt_eigs(3, 0.5, 2, normalized=True)
    assert np.allclose(sorted(norm), sorted(np.array([1.0, -0.5, 0.25]) / 7.5**2))


@pytest.mark.parametrize("n,alpha,r", [(2, 0.5, 1), (2, -0.5, 2), (3, 0.7, 1), (3, -1, 2)])
def test_werner_pt_spectrum_matches_eigs(n, alpha, r):
    # the explicit tensor-power construction realizes exactly the closed-form
    # eigenvalue set
    want = set(np.round(werner_pt_eigs(n, alpha, r), 10))
    got = set(np.round(werner_pt_spectrum(n, alpha, r), 10))
    assert got == want


def test_werner_pt_spectrum_normalized_sums_to_one():
    w = werner_pt_spectrum(2, 0.3, 2, normalized=True)
    assert np.sum(w) == pytest.approx(1.0)  # PT preserves trace


def test_werner_pt_eigs_cap():
    with pytest.raises(DimensionCapError):
        werner_pt_eigs(3, 0.5, 9)


# ---------------------------------------------------------------- projections


def test_proj_family_base_case():
    P = proj_family(2, 1)
    assert np.allclose(np.asarray(P.matrix), np.asarray(max_entangled(2)))
    assert P.rank == 1


def test_proj_family_is_projection():
    for n, r in [(2, 2), (2, 3), (3, 2)]:
        M = np.asarray(proj_family(n, r).matrix)
        assert np.allclose(M @ M, M, atol=1e-10)
        assert np.allclose(M, M.conj().T)


def test_proj_family_rank_recursion():
    # rank(n, r) = (n^2 - 2) rank(n, r-1) + (n^2)^(r-1), rank(n, 1) = 1
    assert proj_family(2, 1).rank == 1
    assert proj_family(2, 2).rank == 6
    assert proj_family(2, 3).rank == 28
    assert proj_family(3, 2).rank == 16


def test_proj_family_bipartite_tag():
    P = proj_family(2, 2)
    assert P.matrix.bipartite == (4, 4)


def test_proj_family_cap():
    with pytest.raises(DimensionCapError) as err:
        proj_family(2, 7)  # 4^7 = 16384 > 4096
    assert "4096" in str(err.value)
    with pytest.raises(DimensionCapError):
        proj_family(9, 3)
    # custom cap
    with pytest.raises(DimensionCapError):
        proj_family(2, 2, cap=8)


def test_proj_s1_closed_form_values():
    assert proj_s1_exact(2, 1) == pytest.approx(0.5)
    assert proj_s1_exact(2, 5) == pytest.approx(0.5)  # n = 2 stays at 1/2
    assert proj_s1_exact(3, 1) == pytest.approx(0.5 - 0.5 / 3)
    assert proj_s1_exact(4, 1) == pytest.approx(0.25)
    assert proj_s1_exact(4, 2) == pytest.approx(0.375)


@pytest.mark.parametrize("n,r", [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)])
def test_proj_pt_max_eig_matches_eigensolver(n, r):
    # closed form against a direct eigendecomposition of the partial transpose
    P = proj_family(n, r)
    lam = np.linalg.eigvalsh(np.asarray(partial_transpose(P.matrix))).max()
    assert proj_pt_max_eig(n, r) == pytest.approx(lam, abs=1e-10)
    assert proj_s1_exact(n, r) == pytest.approx(lam, abs=1e-12)


def test_proj_s2_upper_values():
    assert proj_s2_upper(2, 1) == pytest.approx(1.0)
    assert proj_s2_upper(3, 1) == pytest.approx(2 / 3)
    assert proj_s2_upper(4, 2) == pytest.approx(0.75)


def test_proj_s2_upper_tight_at_base_case():
    # at r = 1 the family member is the maximally entangled projector, whose
    # order-two value is exactly the sum of its two largest squared
    # coefficients: 2/n
    from sknorms.schmidt import pure_norm_sk

    for n in (3, 4):
        v = np.zeros(n * n, complex)
        for i in range(n):
            v[i * n + i] = 1 / np.sqrt(n)
        assert proj_s2_upper(n, 1) == pytest.approx(pure_norm_sk(v, 2, (n, n)))


# ---------------------------------------------------------------- thresholds


def test_p_value_examples():
    assert p_value(4, 1) == pytest.approx(1.0)
    assert p_value(3, 1) == pytest.approx(0.5)
    assert p_value(8, 2) == pytest.approx(36 / 28)
    assert p_value(2, 3) == 0.0


def test_threshold_examples():
    assert undistill_threshold(4, 1) == 0.5
    assert undistill_threshold(8, 2) == 2 / 7
    assert undistill_threshold(3, 1) is None  # p < 1
    assert undistill_threshold(2, 2) is None


def test_threshold_simple_examples():
    assert undistill_threshold_simple(100, 1) == 0.02
    assert abs(undistill_threshold_simple(3, 1) - 1 / 3) < 1e-15
    # r large: the log term takes over
    val = undistill_threshold_simple(4, 5)
    want = np.log(2) / (5 + 3 * np.log(2) - 1)
    assert val == pytest.approx(want)
    assert val == pytest.approx(0.11401, abs=5e-6)


@given(st.integers(2, 40), st.integers(1, 6))
def test_threshold_defined_iff_p_at_least_one(n, r):
    bound = 2 * 2 ** (1 / r) / (2 ** (1 / r) - 1)
    t = undistill_threshold(n, r)
    assert (t is not None) == (p_value(n, r) >= 1) == (n >= bound)
    if t is not None:
        assert 0 < t <= 1
        # never weaker than the closed-form simple bound
        assert t >= undistill_threshold_simple(n, r) - 1e-12


@given(st.integers(2, 30), st.integers(1, 5))
def test_threshold_simple_bounds(n, r):
    s = undistill_threshold_simple(n, r)
    assert 0 < s <= 2 / n + 1e-15


def test_check_r_undistillable_report():
    rep = check_r_undistillable(4, 1, 0.4)
    assert rep.certified
    assert rep.threshold == 0.5
    rep2 = check_r_undistillable(4, 1, 0.6)
    assert not rep2.certified
    # p < 1: fall back to the simple bound
    rep3 = check_r_undistillable(3, 1, 0.3)
    assert rep3.threshold is None
    assert rep3.certified  # 0.3 < 1/3
    assert not check_r_undistillable(3, 1, 0.34).certified


def test_check_r_undistillable_monotone_in_alpha():
    for n, r in [(4, 1), (8, 2)]:
        grid = np.linspace(0, 1, 100)
        flags = [check_r_undistillable(n, r, float(a)).certified for a in grid]
        # certified region is an initial segment of the grid
        first_false = flags.index(False) if False in flags else len(flags)
        assert all(flags[:first_false])
        assert not any(flags[first_false:])


def test_threshold_input_validation():
    with pytest.raises(ValueError):
        undistill_threshold(1, 1)
    with pytest.raises(ValueError):
        undistill_threshold(4, 0)
    with pytest.raises(ValueError):
        p_value(4, -1)


# ---------------------------------------------------------------- random sampling


def test_haar_unitary_is_unitary():
    for n in (2, 3, 9):
        U = np.asarray(haar_unitary(n, seed=3))
        assert np.allclose(U @ U.conj().T, np.eye(n), atol=1e-12)


def test_haar_unitary_deterministic():
    assert np.array_equal(
        np.asarray(haar_unitary(4, seed=9)), np.asarray(haar_unitary(4, seed=9))
    )
    assert not np.allclose(
        np.asarray(haar_unitary(4, seed=9)), np.asarray(haar_unitary(4, seed=10))
    )


def test_bures_sample_is_state():
    for dim in (2, 4, 9):
        rho = np.asarray(bures_sample(dim, seed=dim))
        assert rho.shape == (dim, dim)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(rho).min() >= -1e-12


def test_bures_sample_bipartite_tag():
    rho = bures_sample((3, 3), seed=0)
    assert rho.bipartite == (3, 3)
    assert np.asarray(rho).shape == (9, 9)


def test_bures_sample_deterministic():
    a = np.asarray(bures_sample(4, seed=123))
    b = np.asarray(bures_sample(4, seed=123))
    assert np.array_equal(a, b)


def test_bures_sample_mean_purity_qubit():
    # closed form for the qubit ensemble: E[Tr rho^2] = 7/8
    rng = np.random.default_rng(2024)
    total = 0.0
    N = 4000
    for _ in range(N):
        rho = np.asarray(bures_sample(2, seed=rng))
        total += np.trace(rho @ rho).real
    mean = total / N
    # std of purity is about 0.1, so 4000 samples give ~0.0016 standard error
    assert mean == pytest.approx(7 / 8, abs=0.01)


def test_bures_top_eigenvalue_floor():
    for seed in range(10):
        rho = np.asarray(bures_sample(9, seed=seed))
        assert np.linalg.eigvalsh(rho).max() >= 1 / 9 - 1e-12


def test_random_projection_properties():
    P = random_projection(3, 4, seed=5)
    M = np.asarray(P)
    assert np.allclose(M @ M, M, atol=1e-10)
    assert np.trace(M).real == pytest.approx(4.0)
    assert P.bipartite == (3, 3)
    assert np.array_equal(M, np.asarray(random_projection(3, 4, seed=5)))


def test_random_projection_rank_range():
    with pytest.raises(ValueError):
        random_projection(3, 0)
    with pytest.raises(ValueError):
        random_projection(3, 10)


# ---------------------------------------------------------------- comparison rhs


def test_brandao_rhs_values():
    assert brandao_rhs(3, 9, 0.99) == pytest.approx(np.sqrt(9 / 3**2.99), abs=1e-12)
    assert brandao_rhs(3, 9, 0.99) == pytest.approx(0.5805304, abs=1e-6)
    assert brandao_rhs(2, 1, 0.5) == pytest.approx(np.sqrt(1 / 2**2.5))


def test_brandao_rhs_validation():
    with pytest.raises(ValueError):
        brandao_rhs(3, 0, 0.5)
    with pytest.raises(ValueError):
        brandao_rhs(3, 10, 0.5)
    with pytest.raises(ValueError):
        brandao_rhs(3, 4, 0.0)
    with pytest.raises(ValueError):
        brandao_rhs(3, 4, 1.0)
