"""Lur'e certificates and extremal KYP-LMI solutions."""

import numpy as np
import pytest

from phhinf import (
    DissipationViolated,
    GramMismatch,
    check_lure,
    check_strong_lure,
    extremal_kyp,
    ph_to_ss,
)
from conftest import random_ph


def test_hamiltonian_certifies_lure(dc):
    cert = check_lure(ph_to_ss(dc), dc.Q)
    assert cert.P is dc.Q and not cert.strong
    # L is a factor of the dissipation defect
    W = dc.Q @ ph_to_ss(dc).A + ph_to_ss(dc).A.T @ dc.Q
    assert np.linalg.norm(cert.L @ cert.L.T + W) <= 1e-6


def test_lure_failures(dc):
    ss = ph_to_ss(dc)
    with pytest.raises(GramMismatch):
        check_lure(ss, np.diag([3.0, 1.0]))
    unstable = ph_to_ss(dc)
    with pytest.raises(DissipationViolated):
        check_lure(
            type(ss)(A=-ss.A, B=ss.B, C=ss.B.T @ dc.Q), dc.Q
        )


def test_strong_lure_with_positive_shift(dc):
    ss = ph_to_ss(dc)
    S = 2.0 * dc.R  # P A + A^T P = -2 Q R Q with P = Q; use the exact defect
    W = dc.Q @ ss.A + ss.A.T @ dc.Q
    cert = check_strong_lure(ss, dc.Q, S=-W * 0.5)
    assert cert.strong and cert.S is not None


def test_extremal_ordering_and_feasibility(dc):
    ss = ph_to_ss(dc)
    ext = extremal_kyp(ss)
    norm = np.linalg.norm(ext.Xmax, 2)
    assert np.linalg.eigvalsh(dc.Q - ext.Xmin)[0] >= -1e-4 * norm
    assert np.linalg.eigvalsh(ext.Xmax - dc.Q)[0] >= -1e-4 * norm
    # both extremal solutions are themselves feasible certificates
    check_lure(ss, ext.Xmin, tol=1e-6)
    check_lure(ss, ext.Xmax, tol=1e-6)


def test_random_feasible_points_lie_between_extremes():
    rng = np.random.default_rng(51)
    done = 0
    while done < 100:
        sys = random_ph(rng, int(rng.integers(2, 11)), minimal=True)
        ss = ph_to_ss(sys)
        ext = extremal_kyp(ss)
        norm = np.linalg.norm(ext.Xmax, 2)
        # feasible points: the Hamiltonian itself and scaled blends toward
        # the extremes (the KYP solution set is convex)
        for t in (0.0, 0.3, 0.7):
            P = (1 - t) * sys.Q + t * ext.Xmin
            assert np.linalg.eigvalsh(P - ext.Xmin)[0] >= -1e-4 * norm
            assert np.linalg.eigvalsh(ext.Xmax - P)[0] >= -1e-4 * norm
            done += 1
