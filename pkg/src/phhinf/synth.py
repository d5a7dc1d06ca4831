"""H-infinity controller synthesis, classical and structure-preserving.

The plant is driven by a disturbance w through D1/D2 and observed through
E1/E2; plant and controller are coupled power-conservingly (u_hat = y,
u = -y_hat).  The classical design solves the usual pair of Riccati
equations; the structure-preserving designs solve modified pairs whose
filter solution is the inverse Hamiltonian Q^{-1}, which forces the
controller to admit a port-Hamiltonian representation with its control
Riccati solution as Hamiltonian.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndefiniteV1,
    NoSolutionX,
    PhhinfError,
    PhVerificationFailed,
    ResidualTooLarge,
    SpectralRadiusTooLarge,
    UnstableSystem,
)
from .kyp import check_strong_lure
from .linalg import as_matrix, eigvals, psd_factor
from .riccati import CareProblem, solve_care
from .systems import PHSystem, StateSpace, ss_to_ph

__all__ = [
    "HinfWeights",
    "HinfController",
    "ClosedLoop",
    "classical_weights",
    "modified_weights",
    "classical_hinf",
    "modified_hinf",
    "modified_hinf_with_P",
    "controller_to_ph",
    "interconnect",
    "closed_loop_norm",
    "hinf_norm",
]


@dataclass
class HinfWeights:
    """Disturbance/observation weights (D1, D2, E1, E2) with D1 D2^T = 0,
    E1^T E2 = 0, D2 D2^T = E2^T E2 = I."""

    D1: np.ndarray
    D2: np.ndarray
    E1: np.ndarray
    E2: np.ndarray

    @property
    def ell(self):
        return self.D1.shape[1]


@dataclass
class HinfController:
    """Controller realization plus its synthesis certificate."""

    realization: StateSpace
    variant: str  # "classical" | "modified" | "modified-with-P"
    gamma: float
    X: np.ndarray
    Y: np.ndarray
    weights: HinfWeights
    Pshift: np.ndarray = None
    ph_form: PHSystem = None
    filter_residual: float = None
    control_residual: float = None
    control_mode: str = None
    strong_lure: bool = False
    bound_verified: bool = True  # H-inf bound claim backed by a certificate


@dataclass
class ClosedLoop:
    """Closed-loop data (A, D, E): Tzw(s) = E (sI - A)^{-1} D."""

    Abig: np.ndarray
    Dbig: np.ndarray
    Ebig: np.ndarray


def classical_weights(sys):
    """The weight choice that recovers the unmodified Riccati pair:
    D1 = [B 0], D2 = [0 I], E1 = [C; 0], E2 = [0; I], ell = n + m."""
    n, m = sys.n, sys.m
    ell = n + m
    D1 = np.zeros((n, ell))
    D1[:, :m] = sys.B
    D2 = np.zeros((m, ell))
    D2[:, n:] = np.eye(m)
    E1 = np.zeros((ell, n))
    E1[: sys.p, :] = sys.C
    E2 = np.zeros((ell, m))
    E2[n:, :] = np.eye(m)
    return HinfWeights(D1=D1, D2=D2, E1=E1, E2=E2)


def modified_weights(sys, gamma, P=None):
    """Weights for the structure-preserving designs.

    D1 carries a semi-definite factor of
    V1 = 2R + (1 - gamma^-2) B B^T - gamma^-2 Q^{-1} P Q^{-1}
    (zero-padded), E1 a factor of C^T C + P; D2, E2 as in the classical
    choice.  `P = None` means P = 0.

    Raises
    ------
    IndefiniteV1
        If V1 has an eigenvalue below -1e-10 * ||V1||_2, which signals that
        the (P, gamma) choice is inadmissible.
    """
    if gamma <= 1.0:
        raise ValueError("modified weights require gamma > 1")
    n, m = sys.n, sys.m
    gi2 = gamma ** -2
    C = sys.B.T @ sys.Q
    V1 = 2.0 * sys.R + (1.0 - gi2) * sys.B @ sys.B.T
    if P is not None:
        QiP = np.linalg.solve(sys.Q, P)
        V1 = V1 - gi2 * np.linalg.solve(sys.Q, QiP.T).T  # Q^{-1} P Q^{-1}
    V1 = (V1 + V1.T) / 2.0
    lam_min = np.linalg.eigvalsh(V1)[0]
    if lam_min < -1e-10 * max(1.0, np.linalg.norm(V1, 2)):
        raise IndefiniteV1(f"V1 has lambda_min = {lam_min:.3e}", lambda_min=lam_min)
    R1 = C.T @ C + (P if P is not None else 0.0)
    LV = psd_factor(V1, 1e-12)
    LR = psd_factor((R1 + R1.T) / 2.0, 1e-12)
    ell = n + m
    D1 = np.zeros((n, ell))
    D1[:, : LV.shape[1]] = LV
    D2 = np.zeros((m, ell))
    D2[:, n:] = np.eye(m)
    E1 = np.zeros((ell, n))
    E1[: LR.shape[1], :] = LR.T
    E2 = np.zeros((ell, m))
    E2[n:, :] = np.eye(m)
    return HinfWeights(D1=D1, D2=D2, E1=E1, E2=E2)


def classical_hinf(sys, gamma):
    """Classical suboptimal H-infinity controller for a square plant, D = 0.

    Solves the standard control and filter Riccati equations, checks
    rho(X Y) < gamma^2, and assembles
    A_hat = A - (1 - gamma^-2) Y C^T C - B B^T X Z with Z = (I - gamma^-2 Y X)^{-1}.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    gi2 = gamma ** -2
    A, B, C = sys.A, sys.B, sys.C
    n = sys.n
    sol_x = solve_care(CareProblem(A=A, G=(1.0 - gi2) * B @ B.T, H=C.T @ C))
    sol_y = solve_care(CareProblem(A=A.T, G=(1.0 - gi2) * C.T @ C, H=B @ B.T))
    X, Y = sol_x.X, sol_y.X
    rho = np.abs(eigvals(X @ Y)).max()
    if rho >= gamma ** 2 * (1.0 - 1e-10):
        raise SpectralRadiusTooLarge(f"rho(X Y) = {rho:.6e} >= gamma^2 = {gamma**2:.6e}")
    Z = np.linalg.inv(np.eye(n) - gi2 * Y @ X)
    Ah = A - (1.0 - gi2) * Y @ C.T @ C - B @ B.T @ X @ Z
    Bh = Y @ C.T
    Ch = B.T @ X @ Z
    return HinfController(
        realization=StateSpace(A=Ah, B=Bh, C=Ch),
        variant="classical",
        gamma=gamma,
        X=X,
        Y=Y,
        weights=classical_weights(sys),
        filter_residual=sol_y.residual,
        control_residual=sol_x.residual,
        control_mode=sol_x.mode,
    )


def _mod_filter_residual(sys, gamma):
    """Residual of Y = Q^{-1} in the modified filter equation (relative)."""
    gi2 = gamma ** -2
    A = (sys.J - sys.R) @ sys.Q
    B = sys.B
    C = B.T @ sys.Q
    Y = np.linalg.inv(sys.Q)
    Y = (Y + Y.T) / 2.0
    res = A @ Y + Y @ A.T - (1.0 - gi2) * Y @ C.T @ C @ Y + (1.0 - gi2) * B @ B.T + 2.0 * sys.R
    return Y, float(np.linalg.norm(res) / max(1.0, np.linalg.norm(Y)))


def _strong_lure_gap(ctrl_ss, X, gamma):
    """W = -(A_hat^T X + X A_hat); controller is strictly dissipative iff W > 0."""
    W = -(ctrl_ss.A.T @ X + X @ ctrl_ss.A)
    return (W + W.T) / 2.0


def modified_hinf(sys, gamma):
    """Structure-preserving H-infinity controller (P = 0 variant).

    The filter solution is Y_hat = Q^{-1} (verified by residual, not solved
    for); the control solution X_hat comes from the modified control
    equation.  The controller realization is
    A_hat = A - (1 - gamma^-2) Y_hat C^T C - B B^T X_hat, B_hat = Y_hat C^T = B,
    C_hat = B^T X_hat, and it is port-Hamiltonian with Hamiltonian X_hat.

    The closed-loop bound claim requires the controller to be strictly
    dissipative (strong Lur'e); when that check fails the controller is
    still returned with `bound_verified = False`.
    """
    if gamma <= 1.0:
        raise ValueError("modified synthesis requires gamma > 1")
    gi2 = gamma ** -2
    A = (sys.J - sys.R) @ sys.Q
    B = sys.B
    C = B.T @ sys.Q
    Yh, fres = _mod_filter_residual(sys, gamma)
    if fres > 1e-8:
        raise ResidualTooLarge(f"Q^-1 filter residual {fres:.3e} exceeds 1e-8")
    Amc = A + gi2 * Yh @ C.T @ C
    prob = CareProblem(A=Amc, G=(1.0 - gi2) * B @ B.T, H=C.T @ C)
    sol = solve_care(prob)
    Xh = sol.X
    Ah = A - (1.0 - gi2) * Yh @ C.T @ C - B @ B.T @ Xh
    Bh = Yh @ C.T
    Ch = B.T @ Xh
    realization = StateSpace(A=Ah, B=Bh, C=Ch)
    ph_form = controller_to_ph(realization, Xh)
    # strict dissipativity decides whether the bound claim is certified
    W = _strong_lure_gap(realization, Xh, gamma)
    scale = max(1.0, np.linalg.norm(Xh @ Ah, 2))
    strong = bool(np.linalg.eigvalsh(W)[0] > 1e-10 * scale) and (
        np.linalg.svd(B, compute_uv=False)[-1] > 1e-10 * max(1.0, np.linalg.norm(B, 2))
    )
    return HinfController(
        realization=realization,
        variant="modified",
        gamma=gamma,
        X=Xh,
        Y=Yh,
        weights=modified_weights(sys, gamma),
        ph_form=ph_form,
        filter_residual=fres,
        control_residual=sol.residual,
        control_mode=sol.mode,
        strong_lure=strong,
        bound_verified=strong,
    )


def modified_hinf_with_P(sys, gamma, P):
    """Structure-preserving H-infinity controller with a definite shift P.

    Requires B of full column rank and
    V1 = 2R + (1 - gamma^-2) B B^T - gamma^-2 Q^{-1} P Q^{-1} >= 0.
    Solves the shifted control equation for X_tilde (stabilizing attempt
    first; the analytic filter solution Q^{-1} is always residual-checked)
    and assembles
    A_tilde = A - (1 - gamma^-2) Y C^T C - B B^T X_tilde + gamma^-2 Y P.
    The resulting controller is strictly dissipative with S = P; its pH form
    must have R_tilde > 0.
    """
    if gamma <= 1.0:
        raise ValueError("modified synthesis requires gamma > 1")
    P = as_matrix(P, "P", square=True)
    gi2 = gamma ** -2
    A = (sys.J - sys.R) @ sys.Q
    B = sys.B
    C = B.T @ sys.Q
    weights = modified_weights(sys, gamma, P)  # raises IndefiniteV1 when inadmissible
    Yt = np.linalg.inv(sys.Q)
    Yt = (Yt + Yt.T) / 2.0
    # filter equation with P: the P terms cancel for Y = Q^{-1}, so the
    # residual equals the P = 0 one up to the explicit cancellation below
    res_f = (
        A @ Yt + Yt @ A.T + Yt @ ((gi2 - 1.0) * C.T @ C + gi2 * P) @ Yt
        + (1.0 - gi2) * B @ B.T + 2.0 * sys.R - gi2 * Yt @ P @ Yt
    )
    fres = float(np.linalg.norm(res_f) / max(1.0, np.linalg.norm(Yt)))
    if fres > 1e-8:
        raise ResidualTooLarge(f"Q^-1 filter residual {fres:.3e} exceeds 1e-8")
    Amc = A + gi2 * Yt @ (C.T @ C + P)
    prob = CareProblem(A=Amc, G=(1.0 - gi2) * B @ B.T, H=C.T @ C + P)
    try:
        sol = solve_care(prob)
    except PhhinfError as exc:
        raise NoSolutionX(f"modified control equation with P failed: {exc}") from exc
    Xt = sol.X
    At = A - (1.0 - gi2) * Yt @ C.T @ C - B @ B.T @ Xt + gi2 * Yt @ P
    Bt = Yt @ C.T
    Ct = B.T @ Xt
    realization = StateSpace(A=At, B=Bt, C=Ct)
    ph_form = controller_to_ph(realization, Xt)
    r_min = np.linalg.eigvalsh(ph_form.R)[0]
    if r_min <= 0.0:
        raise PhVerificationFailed(f"R_tilde has lambda_min = {r_min:.3e}, not > 0")
    check_strong_lure(realization, Xt, S=P)
    return HinfController(
        realization=realization,
        variant="modified-with-P",
        gamma=gamma,
        X=Xt,
        Y=Yt,
        weights=weights,
        Pshift=P,
        ph_form=ph_form,
        filter_residual=fres,
        control_residual=sol.residual,
        control_mode=sol.mode,
        strong_lure=True,
        bound_verified=True,
    )


def controller_to_ph(realization, X, tol=1e-8):
    """pH form of a controller realization with its Riccati solution as
    Hamiltonian.  Delegates to :func:`phhinf.systems.ss_to_ph`."""
    try:
        return ss_to_ph(realization, X, tol=tol)
    except PhhinfError as exc:
        raise PhVerificationFailed(str(exc)) from exc


def interconnect(plant, ctrl, w):
    """Closed loop of plant and controller under u_hat = y, u = -y_hat:
    Abig = [[A, -B C_hat], [B_hat C, A_hat]], Dbig = [[D1], [B_hat D2]],
    Ebig = [E1, -E2 C_hat]."""
    if plant.m != plant.p or ctrl.m != ctrl.p or plant.m != ctrl.m:
        raise DimensionMismatch(
            f"plant ({plant.p}x{plant.m}) and controller ({ctrl.p}x{ctrl.m}) must be square and matching"
        )
    Abig = np.block([[plant.A, -plant.B @ ctrl.C], [ctrl.B @ plant.C, ctrl.A]])
    Dbig = np.vstack([w.D1, ctrl.B @ w.D2])
    Ebig = np.hstack([w.E1, -w.E2 @ ctrl.C])
    return ClosedLoop(Abig=Abig, Dbig=Dbig, Ebig=Ebig)


def closed_loop_norm(cl, rel_tol=1e-6):
    """H-infinity norm of the closed-loop transfer E (sI - A)^{-1} D."""
    return hinf_norm(StateSpace(A=cl.Abig, B=cl.Dbig, C=cl.Ebig), rel_tol=rel_tol)


def _imag_axis_crossing(A, B, C, g, tol=1e-8):
    """||G||_inf >= g iff the Hamiltonian pencil M(g) has an eigenvalue on
    the imaginary axis (D = 0)."""
    M = np.block([[A, (B @ B.T) / g], [-(C.T @ C) / g, -A.T]])
    ev = np.linalg.eigvals(M)
    scale = max(1.0, np.abs(ev).max())
    return bool(np.any(np.abs(ev.real) <= tol * scale))


def hinf_norm(sys, rel_tol=1e-6):
    """H-infinity norm of an asymptotically stable system with D = 0.

    Bisection on the imaginary-eigenvalue test of the Hamiltonian pencil
    M(g) = [[A, g^-1 B B^T], [-g^-1 C^T C, -A^T]].  The bracket starts at
    [max sigma(G(0)), 2 ||C|| ||B|| / |max Re sigma(A)|]; the lower end is
    additionally seeded with the resonance frequencies |Im lambda(A)| and
    the upper end is doubled until it certifies.

    Raises
    ------
    UnstableSystem
    """
    A, B, C = sys.A, sys.B, sys.C
    if np.linalg.norm(sys.D) != 0.0:
        raise ValueError("hinf_norm requires D = 0")
    ev = eigvals(A)
    abscissa = ev.real.max()
    if abscissa >= 0.0:
        raise UnstableSystem(f"spectral abscissa {abscissa:.3e} >= 0")
    n = A.shape[0]
    freqs = np.concatenate([[0.0], np.abs(ev.imag)])
    lo = 0.0
    for w in freqs:
        G = C @ np.linalg.solve(1j * w * np.eye(n) - A, B)
        lo = max(lo, np.linalg.svd(G, compute_uv=False)[0])
    if lo == 0.0:
        return 0.0
    up = 2.0 * np.linalg.norm(C, 2) * np.linalg.norm(B, 2) / abs(abscissa) + lo
    while _imag_axis_crossing(A, B, C, up):
        up *= 2.0
    while up - lo > rel_tol * lo:
        mid = 0.5 * (lo + up)
        if _imag_axis_crossing(A, B, C, mid):
            lo = mid
        else:
            up = mid
    return 0.5 * (lo + up)
