"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest

from phhinf import MsdConfig, PHSystem, StateSpace, dc_motor, is_minimal, msd_chain


@pytest.fixture
def dc():
    return dc_motor()


@pytest.fixture
def msd10():
    return msd_chain(MsdConfig(n_masses=5))


def example_plant():
    """Two-state pH plant with a gyrator coupling and two inputs."""
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    R = np.eye(2)
    Q = np.eye(2)
    B = np.array([[2.0, 0.0], [0.0, 1.0]])
    return PHSystem(J=J, R=R, Q=Q, B=B)


def random_ph(rng, n, m=2, minimal=False):
    """Random pH system; optionally resampled until numerically minimal."""
    for _ in range(50):
        W = rng.standard_normal((n, n))
        J = (W - W.T) / 2.0
        M = rng.standard_normal((n, n)) / np.sqrt(n)
        R = M @ M.T + 0.05 * np.eye(n)
        S = rng.standard_normal((n, n)) / np.sqrt(n)
        Q = S @ S.T + 0.5 * np.eye(n)
        B = rng.standard_normal((n, m))
        sys = PHSystem(J=J, R=R, Q=Q, B=B)
        if not minimal:
            return sys
        A = (J - R) @ Q
        flag, _ = is_minimal(StateSpace(A=A, B=B, C=B.T @ Q))
        if flag:
            return sys
    raise RuntimeError("could not sample a minimal pH system")


def random_stable_ss(rng, n, m=2, p=2, min_damping=0.05):
    """Random stable system whose poles all have damping ratio >= min_damping.

    The damping floor keeps every resonance peak wide enough to be resolved
    by a 1e5-point frequency grid, which the grid oracle relies on.
    """
    blocks = []
    k = 0
    while k < n:
        radius = 10.0 ** rng.uniform(-1.0, 1.0)
        if n - k >= 2 and rng.uniform() < 0.7:
            zeta = rng.uniform(min_damping, 1.0)
            re = -zeta * radius
            im = np.sqrt(1.0 - zeta ** 2) * radius
            blocks.append(np.array([[re, im], [-im, re]]))
            k += 2
        else:
            blocks.append(np.array([[-radius]]))
            k += 1
    A = np.zeros((n, n))
    at = 0
    for blk in blocks:
        s = blk.shape[0]
        A[at : at + s, at : at + s] = blk
        at += s
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = V @ A @ V.T
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((p, n))
    return StateSpace(A=A, B=B, C=C)


def grid_hinf_oracle(sys, n_points=100_000, lo=1e-4, hi=1e4):
    """Frequency-grid H-infinity estimate, independent of the bisection path.

    Diagonalizes A once and evaluates max sigma(G(i w)) over a logarithmic
    grid with vectorized batched SVDs.
    """
    lam, V = np.linalg.eig(sys.A)
    T1 = sys.C @ V
    T2 = np.linalg.solve(V, sys.B)
    omega = np.logspace(np.log10(lo), np.log10(hi), n_points)
    peak = 0.0
    for chunk in np.array_split(omega, max(1, n_points // 20_000)):
        resolvent = 1.0 / (1j * chunk[:, None] - lam[None, :])
        G = np.einsum("pn,wn,nm->wpm", T1, resolvent, T2)
        sv = np.linalg.svd(G, compute_uv=False)
        peak = max(peak, float(sv[:, 0].max()))
    return peak
