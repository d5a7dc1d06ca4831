"""Controller synthesis: weights, variants, interconnection, norms."""

import time

import numpy as np
import pytest

from phhinf import (
    HinfController,
    IndefiniteV1,
    MsdConfig,
    StateSpace,
    UnstableSystem,
    check_lure,
    check_strong_lure,
    classical_hinf,
    classical_weights,
    closed_loop_norm,
    hinf_norm,
    interconnect,
    modified_hinf,
    modified_hinf_with_P,
    modified_weights,
    msd_chain,
    ph_to_ss,
)
from conftest import example_plant, grid_hinf_oracle


def _weights_orthogonality(w):
    ell = w.ell
    assert np.linalg.norm(w.D1 @ w.D2.T) == 0.0
    assert np.linalg.norm(w.E1.T @ w.E2) == 0.0
    assert np.allclose(w.D2 @ w.D2.T, np.eye(w.D2.shape[0]))
    assert np.allclose(w.E2.T @ w.E2, np.eye(w.E2.shape[1]))


def test_classical_weights_layout():
    scalar = StateSpace(A=[[-1.0]], B=[[1.0]], C=[[1.0]])
    w = classical_weights(scalar)
    assert (w.D1 == [[1.0, 0.0]]).all() and (w.D2 == [[0.0, 1.0]]).all()
    assert w.ell == 2
    _weights_orthogonality(w)
    plant = ph_to_ss(example_plant())
    w = classical_weights(plant)
    assert w.D1.shape == (2, 4) and w.D2.shape == (2, 4)
    assert w.E1.shape == (4, 2) and w.E2.shape == (4, 2)
    _weights_orthogonality(w)


def test_modified_weights_v1_limit(dc):
    w = modified_weights(dc, 1e6)
    V1 = w.D1 @ w.D1.T
    assert np.allclose(V1, 2.0 * dc.R + dc.B @ dc.B.T, atol=1e-10)
    _weights_orthogonality(w)
    w = modified_weights(dc, 2.0, P=dc.Q)
    _weights_orthogonality(w)


def test_modified_weights_indefinite_v1(msd10):
    lam_mins = []
    for gamma in np.linspace(1.05, 3.95, 30):
        try:
            modified_weights(msd10, gamma, P=0.05 * msd10.Q)
        except IndefiniteV1 as exc:
            lam_mins.append(exc.lambda_min)
    assert lam_mins, "expected at least one indefinite V1 on the grid"
    assert min(lam_mins) < 0


def test_classical_golden_example():
    # 2-state plant with gyrator coupling, gamma = 2: the product pair
    # (P, F) = (B^T Q Y, B^T X Z) and the asymmetric S solving P S = F
    start = time.monotonic()
    sys = example_plant()
    ctrl = classical_hinf(ph_to_ss(sys), 2.0)
    Z = np.linalg.inv(np.eye(2) - 0.25 * ctrl.Y @ ctrl.X)
    P = sys.B.T @ sys.Q @ ctrl.Y
    F = sys.B.T @ ctrl.X @ Z
    S = np.linalg.solve(P, F)
    assert np.allclose(P, [[1.6940, -0.1497], [-0.0749, 0.4800]], atol=5e-5)
    assert np.allclose(F, [[2.0592, 0.1736], [0.0868, 0.5093]], atol=5e-5)
    assert np.allclose(S, [[1.2488, 0.1990], [0.3756, 1.0919]], atol=5e-5)
    assert np.linalg.norm(S - S.T) > 0.1
    assert time.monotonic() - start < 1.0


def test_classical_lqg_like_limit(dc):
    ss = ph_to_ss(dc)
    c6 = classical_hinf(ss, 1e6)
    c7 = classical_hinf(ss, 1e7)

    def stack(c):
        return np.vstack([c.realization.A, c.realization.B.T, c.realization.C])

    d = np.linalg.norm(stack(c6) - stack(c7)) / np.linalg.norm(stack(c7))
    assert d <= 1e-4


def test_modified_controller_is_ph(dc):
    ctrl = modified_hinf(dc, 2.0)
    assert ctrl.ph_form is not None
    assert (ctrl.realization.B == dc.B).all()  # B_hat = Q^{-1} Q B = B
    Rh = ctrl.ph_form.R
    assert np.linalg.eigvalsh(Rh)[0] >= -1e-8 * np.linalg.norm(Rh, 2)
    assert np.linalg.eigvalsh(ctrl.X)[0] > 0  # Hamiltonian of the controller
    check_lure(ctrl.realization, ctrl.X)
    assert ctrl.filter_residual <= 1e-12


def test_modified_with_P_strong_lure(dc):
    ctrl = modified_hinf_with_P(dc, 2.0, dc.Q)
    assert np.linalg.eigvalsh(ctrl.ph_form.R)[0] > 0
    check_strong_lure(ctrl.realization, ctrl.X, S=dc.Q)
    assert ctrl.bound_verified


def test_modified_with_P_small_P_limit(dc):
    small = modified_hinf_with_P(dc, 2.0, 1e-8 * dc.Q)
    base = modified_hinf(dc, 2.0)
    d = np.linalg.norm(small.realization.A - base.realization.A)
    assert d <= 1e-4 * max(1.0, np.linalg.norm(base.realization.A))


def test_modified_gamma_limit_converges(dc):
    c6 = modified_hinf(dc, 1e6)
    c7 = modified_hinf(dc, 1e7)

    def stack(c):
        return np.vstack([c.realization.A, c.realization.B.T, c.realization.C])

    d = np.linalg.norm(stack(c6) - stack(c7)) / np.linalg.norm(stack(c7))
    assert d <= 1e-4


def test_interconnect_blocks():
    plant = StateSpace(A=[[-1.0]], B=[[1.0]], C=[[1.0]])
    ctrl = StateSpace(A=[[-2.0]], B=[[1.0]], C=[[1.0]])
    w = classical_weights(plant)
    cl = interconnect(plant, ctrl, w)
    assert np.allclose(cl.Abig, [[-1.0, -1.0], [1.0, -2.0]])
    assert cl.Dbig.shape == (2, 2) and cl.Ebig.shape == (2, 2)


def test_closed_loop_stable_with_modified_controller():
    sys = example_plant()
    ctrl = modified_hinf(sys, 2.0)
    cl = interconnect(ph_to_ss(sys), ctrl.realization, ctrl.weights)
    assert np.linalg.eigvals(cl.Abig).real.max() < 0
    assert closed_loop_norm(cl) < 2.0


def test_hinf_norm_first_order():
    assert abs(hinf_norm(StateSpace(A=[[-1.0]], B=[[1.0]], C=[[1.0]])) - 1.0) <= 1e-6
    # c b / (s + a) peaks at omega = 0 with value c b / a
    sys = StateSpace(A=[[-2.0]], B=[[3.0]], C=[[4.0]])
    assert abs(hinf_norm(sys) - 6.0) <= 6.0 * 1e-6


def test_hinf_norm_rejects_unstable():
    with pytest.raises(UnstableSystem):
        hinf_norm(StateSpace(A=[[1.0]], B=[[1.0]], C=[[1.0]]))


def test_hinf_norm_dc_grid_oracle(dc):
    ss = ph_to_ss(dc)
    bis = hinf_norm(ss)
    grid = grid_hinf_oracle(ss)
    assert abs(bis - grid) <= 1e-4 * grid
