"""Shared helpers for the test suite.

Random operators are generated from integer seeds via ``default_rng`` so that
hypothesis can shrink failures to a reproducible seed instead of dragging
around raw arrays.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sknorms.qops import HermitianOperator

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def random_hermitian(rng, N, scale=1.0):
    G = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return scale * (G + G.conj().T) / 2


def random_psd(rng, N, rank=None):
    r = N if rank is None else rank
    G = rng.standard_normal((N, r)) + 1j * rng.standard_normal((N, r))
    return G @ G.conj().T


def random_psd_op(rng, dims, rank=None):
    n, m = dims
    return HermitianOperator(random_psd(rng, n * m, rank), bipartite=dims)


def random_pure_op(rng, dims):
    n, m = dims
    v = rng.standard_normal(n * m) + 1j * rng.standard_normal(n * m)
    v /= np.linalg.norm(v)
    return HermitianOperator(np.outer(v, v.conj()), bipartite=dims), v


def cvx_general_value(p, solver=None):
    """Solve a GeneralSDP with cvxpy as an independent oracle.

    Mirrors the problem structurally: variable rho >= 0, Phi(rho) <= B for each
    constraint pair, (id (x) Phi)(rho) >= 0 for each cone map.
    """
    import cvxpy as cp

    N = p.var_dim
    rho = cp.Variable((N, N), hermitian=True)
    cons = [rho >> 0]

    def herm(expr):
        return (expr + expr.H) / 2

    for phi, B in p.constraints:
        expr = sum(
            cp.Constant(np.asarray(E)) @ rho @ cp.Constant(np.asarray(F))
            for E, F in zip(phi.E, phi.F)
        )
        cons.append(herm(expr) << cp.Constant(np.asarray(B)))
    for phi in p.cone_maps:
        n, m = p.dims
        expr = sum(
            cp.Constant(np.kron(np.eye(n), np.asarray(E)))
            @ rho
            @ cp.Constant(np.kron(np.eye(n), np.asarray(F)))
            for E, F in zip(phi.E, phi.F)
        )
        cons.append(herm(expr) >> 0)
    prob = cp.Problem(cp.Maximize(cp.real(cp.trace(cp.Constant(p.A) @ rho))), cons)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if solver is not None:
            prob.solve(solver=solver)
        else:
            prob.solve(
                solver=cp.CLARABEL,
                tol_gap_abs=1e-11,
                tol_gap_rel=1e-11,
                tol_feas=1e-11,
            )
            if prob.status != "optimal":
                prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200_000)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"oracle status {prob.status}")
    return float(prob.value)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
