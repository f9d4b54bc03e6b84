from __future__ import annotations

import math

import numpy as np
import pytest

from equifocal import focal
from equifocal.adnum import (ModelError, ModelTooLarge, NotCurvatureAdapted, commuting_family_check,
                             d_co_by_expm, d_operators, focal_radii_from_sweep, jacobi_operator,
                             make_model, numeric_focal_sweep, root_space_frame, run_oracle,
                             sl_n_model, so_pq_model, spectrum_residual, synthetic_shape_operator)
from equifocal.symcat import find_family, restricted_system

ATANH_HALF = 0.549306144334054845697622618461


def _orthonormal(model):
    G = np.array([[model.inner(a, b) for b in model.basis_p] for a in model.basis_p])
    return np.allclose(G, np.eye(model.dim_p), atol=1e-12)


@pytest.mark.parametrize("model", [sl_n_model(3), sl_n_model(5), so_pq_model(2, 3), so_pq_model(3, 3)])
def test_model_invariants(model):
    assert _orthonormal(model)
    for x in model.basis_a:
        for y in model.basis_a:
            assert np.linalg.norm(x @ y - y @ x) < 1e-12


def test_sl3_jacobi_spectrum():
    m = sl_n_model(3)
    v = np.array([1.0, 0.0, -1.0])
    got = np.sort(np.linalg.eigvalsh(jacobi_operator(m, v)))
    assert got == pytest.approx([-4, -1, -1, 0, 0], abs=1e-12)
    assert np.allclose(jacobi_operator(m, np.zeros(3)), 0)


def test_multiplicities_match_catalog():
    # so(2,5): restricted roots of SO0(2,5)/SO(2)xSO(5)
    m = so_pq_model(2, 4)
    rs = restricted_system(find_family("BDI").instantiate(p=2, q=4))
    assert sorted(r.multiplicity for r in m.root_system().roots) == sorted(r.multiplicity for r in rs.roots)
    v = np.array([0.7, 0.2])
    w = np.round(np.linalg.eigvalsh(jacobi_operator(m, v)), 9)
    values, counts = np.unique(w, return_counts=True)
    expected = {round(-0.49, 9): 2, round(-0.04, 9): 2, round(-0.81, 9): 1, round(-0.25, 9): 1, 0.0: 2}
    assert dict(zip(values.tolist(), counts.tolist())) == expected


def test_spectrum_residual_random():
    rng = np.random.default_rng(0)
    for m in (sl_n_model(4), so_pq_model(1, 4), so_pq_model(2, 2)):
        assert max(spectrum_residual(m, m.random_a(rng)) for _ in range(50)) < 1e-8


def test_d_operators():
    m = sl_n_model(3)
    v = np.array([math.log(2), 0.0, -math.log(2)]) / 2
    co, si = d_operators(m, v, 0.0)
    assert np.allclose(co, np.eye(5)) and np.allclose(si, np.eye(5))
    co, si = d_operators(m, v, 2.0)
    # the e1-e2 root takes value ln2/2 at v, so at s=2 the block is cosh(ln 2)
    vals = np.sort(np.linalg.eigvalsh(co))
    assert 1.25 in [pytest.approx(x, abs=1e-12) for x in vals]
    assert np.allclose(co, d_co_by_expm(m, v, 2.0), atol=1e-10)
    assert list(np.linalg.eigvalsh(co)).count(pytest.approx(1.0)) >= 2


def test_functional_calculus_identity():
    rng = np.random.default_rng(3)
    m = so_pq_model(2, 3)
    for _ in range(10):
        v, s = m.random_a(rng), rng.uniform(-1, 1)
        co, si = d_operators(m, v, s)
        from equifocal.adnum import ad_squared
        res = co @ co - s * s * ad_squared(m, v) @ si @ si - np.eye(m.dim_p)
        assert np.linalg.norm(res, 2) < 1e-9 * np.linalg.norm(co, 2) ** 2


def _block_shape_op(m, v, eig_for):
    """Shape operator with prescribed eigenvalue per ad(v)^2 eigenvalue."""
    from equifocal.adnum import ad_squared
    w, U = np.linalg.eigh(ad_squared(m, v))
    return U @ np.diag([eig_for(x) for x in w]) @ U.T


def test_focal_sweep_examples():
    m = sl_n_model(2)
    v = np.array([0.5, -0.5])  # beta(v) = 1
    A = _block_shape_op(m, v, lambda w: 2.0 if w > 0.5 else 0.0)
    grid = np.linspace(0.01, 2.0, 200)
    assert focal_radii_from_sweep(m, v, A, grid) == [pytest.approx(ATANH_HALF, abs=1e-9)]
    assert min(numeric_focal_sweep(m, v, A, [ATANH_HALF])) < 1e-9
    A0 = np.zeros((2, 2))
    assert focal_radii_from_sweep(m, v, A0, grid) == []
    assert min(numeric_focal_sweep(m, v, A0, grid)) > 0.5
    A_flat = _block_shape_op(m, v, lambda w: 2.0 if w < 0.5 else 0.0)
    assert focal_radii_from_sweep(m, v, A_flat, grid) == [pytest.approx(0.5, abs=1e-12)]


def test_sweep_matches_closed_form():
    rng = np.random.default_rng(11)
    m = so_pq_model(2, 3)
    for _ in range(10):
        v = m.random_a(rng)
        A = synthetic_shape_operator(m, v, rng)
        from equifocal.adnum import joint_blocks
        expected = sorted(z.real for b, lam in joint_blocks(m, v, A)
                          for z in focal.complex_focal_radii(lam, b, [0]) if abs(z.imag) < 1e-12 and 0.01 <= z.real <= 3)
        got = focal_radii_from_sweep(m, v, A, np.linspace(0.01, 3, 400))
        assert got == pytest.approx(sorted(set(round(x, 12) for x in expected)), abs=1e-6)


def test_non_adapted_shape_operator():
    m = sl_n_model(3)
    A = np.zeros((5, 5))
    A[0, 4] = A[4, 0] = 1.0
    with pytest.raises(NotCurvatureAdapted):
        numeric_focal_sweep(m, np.array([1.0, 0.3, -1.3]), A, [0.5])


def test_commuting_family():
    rng = np.random.default_rng(5)
    m = so_pq_model(2, 3)
    U, groups = root_space_frame(m, rng)
    ops = [U @ np.diag(rng.normal(size=m.dim_p)) @ U.T for _ in range(2)]
    basis = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    assert commuting_family_check(m, basis, ops, 1e-9)
    assert commuting_family_check(m, basis, [], 1e-9)
    bad = ops[0] + 1e-3 * (np.outer(U[:, 0], U[:, -1]) + np.outer(U[:, -1], U[:, 0]))
    assert not commuting_family_check(m, basis, [bad], 1e-6)


def test_model_guards():
    with pytest.raises(ModelTooLarge):
        make_model("sl_n_R", [50])
    with pytest.raises(ModelTooLarge):
        make_model("so_p_q", [3, 4])
    with pytest.raises(ModelError):
        make_model("su", [3])
    with pytest.raises(ModelError):
        sl_n_model(3).a_element([1.0, 1.0, 1.0])


def test_oracle_report_is_deterministic():
    a = run_oracle(so_pq_model(2, 3), trials=20, seed=4, focal_trials=5)
    b = run_oracle(so_pq_model(2, 3), trials=20, seed=4, focal_trials=5)
    assert a == b and a["ok"]
    assert set(a) >= {"model", "trials", "max_spectrum_residual", "focal_matches", "commuting_ok"}
