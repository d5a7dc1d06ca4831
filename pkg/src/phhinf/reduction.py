"""Balanced-truncation model reduction on H-infinity Gramian pairs.

The structure-preserving variant balances the pair (Y, X) with Y = Q^{-1}
and X the stabilizing solution of the modified control Riccati equation.
Because Y is the inverse Hamiltonian, the balanced Q is diagonal and the
truncated leading blocks (J11, R11, Q11, B1) are again port-Hamiltonian.
The classical variant balances the unmodified H-infinity Riccati pair and
truncates the state-space blocks; it generally destroys the structure.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleP, NearSingularGramian, PhhinfError
from .linalg import as_matrix, psd_factor, svd_signed
from .riccati import CareProblem, solve_care
from .synth import hinf_norm
from .systems import PHSystem, StateSpace

__all__ = [
    "BalancedModel",
    "balance_pair",
    "mhinf_bt",
    "classical_hinf_bt",
    "minimal_realization",
    "error_curve",
]

_TIE_TOL = 1e-10


@dataclass
class BalancedModel:
    """pH system in balanced coordinates of a Gramian pair (Y, X).

    T Y T^T and Tinv^T X Tinv both equal diag(sigma); since Y = Q^{-1} in
    the structure-preserving pipeline, the balanced Q is diagonal.
    """

    system: PHSystem
    T: np.ndarray
    Tinv: np.ndarray
    sigma: np.ndarray


def _pair_svd(X, Y):
    """Square-root factors of the pair and the SVD of L_X^T L_Y."""
    LY = psd_factor(Y, 1e-12)
    LX = psd_factor(X, 1e-12)
    return LX, LY, svd_signed(LX.T @ LY)


def balance_pair(sys, X, Y):
    """Simultaneously diagonalize (Y, X) by the square-root method.

    Factors Y = L_Y L_Y^T, X = L_X L_X^T, takes svd_signed(L_X^T L_Y)
    = U S V^T and forms T = S^{-1/2} U^T L_X^T, Tinv = L_Y V S^{-1/2}.
    The system is transformed as J -> T J T^T, R -> T R T^T,
    Q -> Tinv^T Q Tinv, B -> T B.

    Raises
    ------
    NearSingularGramian
        When min(sigma) < 1e-12 * sigma_1: the pair does not determine a
        full-order balancing transformation.
    """
    X = as_matrix(X, "X", square=True)
    Y = as_matrix(Y, "Y", square=True)
    LX, LY, f = _pair_svd(X, Y)
    sigma = f.S
    if sigma.size < sys.n or sigma[-1] < 1e-12 * sigma[0]:
        tail = sigma[-1] if sigma.size else 0.0
        raise NearSingularGramian(
            f"characteristic values span {sigma.size} of {sys.n} states "
            f"(min/max = {tail / sigma[0]:.3e})"
        )
    si = 1.0 / np.sqrt(sigma)
    T = si[:, None] * (f.U.T @ LX.T)
    Tinv = (LY @ f.V) * si[None, :]
    Jb = T @ sys.J @ T.T
    Rb = T @ sys.R @ T.T
    Qb = Tinv.T @ sys.Q @ Tinv
    # the balancing identities make these exact up to rounding; clean the
    # noise so the PHSystem invariants hold at build time
    Jb = (Jb - Jb.T) / 2.0
    Rb = (Rb + Rb.T) / 2.0
    Qb = (Qb + Qb.T) / 2.0
    balanced = PHSystem(J=Jb, R=Rb, Q=Qb, B=T @ sys.B)
    return BalancedModel(system=balanced, T=T, Tinv=Tinv, sigma=sigma)


def _bump_ties(sigma, r):
    """Never split a tied pair at the truncation boundary: extend r over any
    cluster of characteristic values equal within 1e-10 relative."""
    while r < sigma.size and sigma[r] >= sigma[r - 1] * (1.0 - _TIE_TOL):
        r += 1
    return r


def _modified_control_solution(A, B, C, Q, gamma, P=None, Y=None):
    """Stabilizing solution of the modified control equation for the pair."""
    gi2 = gamma ** -2
    if Y is None:
        Y = np.linalg.inv(Q)
        Y = (Y + Y.T) / 2.0
    H = C.T @ C if P is None else C.T @ C + P
    H = (H + H.T) / 2.0
    Amc = A + gi2 * Y @ H
    return solve_care(CareProblem(A=Amc, G=(1.0 - gi2) * B @ B.T, H=H)).X, Y


def _check_admissible_P(sys, P, tol=1e-8):
    """P must be zero, a positive multiple of Q, or a positive multiple of a
    KYP-LMI solution (B^T S proportional to C with S dissipative)."""
    if P is None:
        return None
    P = as_matrix(P, "P", square=True)
    if np.linalg.norm(P) == 0.0:
        return None
    if np.linalg.norm(P - P.T) > tol * np.linalg.norm(P):
        raise InadmissibleP("P is not symmetric")
    # multiple of Q?
    alpha = float(np.tensordot(P, sys.Q) / np.tensordot(sys.Q, sys.Q))
    if alpha > 0.0 and np.linalg.norm(P - alpha * sys.Q) <= tol * np.linalg.norm(P):
        return P
    # multiple of a KYP solution: B^T P = alpha C and P A + A^T P <= 0
    A = (sys.J - sys.R) @ sys.Q
    C = sys.B.T @ sys.Q
    num = float(np.tensordot(sys.B.T @ P, C))
    den = float(np.tensordot(C, C))
    alpha = num / den if den > 0.0 else 0.0
    gram = np.linalg.norm(sys.B.T @ P - alpha * C)
    W = P @ A + A.T @ P
    lam_max = np.linalg.eigvalsh((W + W.T) / 2.0)[-1]
    if (
        alpha > 0.0
        and gram <= tol * max(1.0, np.linalg.norm(P))
        and lam_max <= tol * max(1.0, np.linalg.norm(W, 2))
        and np.linalg.eigvalsh((P + P.T) / 2.0)[0] > 0.0
    ):
        return P
    raise InadmissibleP(
        "P is neither zero, a positive multiple of Q, nor a positive multiple "
        "of a KYP-LMI solution"
    )


def _truncated_projectors(X, Y, r, n):
    """Rank-r balancing pair (T_r, Tinv_r) with T_r Tinv_r = I_r.

    Built from the leading r columns only, so trailing near-zero
    characteristic values never enter an inverse.
    """
    LX, LY, f = _pair_svd(X, Y)
    sigma = f.S
    if r > sigma.size or sigma[min(r, sigma.size) - 1] < 1e-12 * sigma[0]:
        raise NearSingularGramian(
            f"only {np.sum(sigma >= 1e-12 * sigma[0])} characteristic values "
            f"are numerically nonzero; cannot keep r = {r}"
        )
    r = _bump_ties(sigma, r)
    si = 1.0 / np.sqrt(sigma[:r])
    T = si[:, None] * (f.U[:, :r].T @ LX.T)
    Tinv = (LY @ f.V[:, :r]) * si[None, :]
    return T, Tinv, sigma, r


def mhinf_bt(sys, gamma, r, P=None):
    """Structure-preserving H-infinity balanced truncation to order r.

    Balances (Y = Q^{-1}, X = modified control solution) and keeps the
    leading blocks of (J, R, Q, B); the result is port-Hamiltonian because
    the balanced Q is diagonal.  A tied cluster of characteristic values at
    the boundary is kept whole, so the returned order may exceed r.

    Raises
    ------
    InadmissibleP
        If P is not zero, a positive multiple of Q, or a positive multiple
        of a KYP-LMI solution.
    NearSingularGramian
    """
    if not 1 <= r <= sys.n:
        raise ValueError(f"need 1 <= r <= n, got r = {r}, n = {sys.n}")
    P = _check_admissible_P(sys, P)
    A = (sys.J - sys.R) @ sys.Q
    C = sys.B.T @ sys.Q
    X, Y = _modified_control_solution(A, sys.B, C, sys.Q, gamma, P)
    T, Tinv, _, r = _truncated_projectors(X, Y, r, sys.n)
    Jr = T @ sys.J @ T.T
    Rr = T @ sys.R @ T.T
    Qr = Tinv.T @ sys.Q @ Tinv
    return PHSystem(
        J=(Jr - Jr.T) / 2.0,
        R=(Rr + Rr.T) / 2.0,
        Q=(Qr + Qr.T) / 2.0,
        B=T @ sys.B,
    )


def classical_hinf_bt(sys, gamma, r):
    """Classical H-infinity balanced truncation of a state-space system.

    Balances the stabilizing solutions of the unmodified control and filter
    Riccati equations and truncates all four realization blocks.  The
    result is stable but in general not port-Hamiltonian.
    """
    if not 1 <= r <= sys.n:
        raise ValueError(f"need 1 <= r <= n, got r = {r}, n = {sys.n}")
    gi2 = gamma ** -2
    A, B, C = sys.A, sys.B, sys.C
    X = solve_care(CareProblem(A=A, G=(1.0 - gi2) * B @ B.T, H=C.T @ C)).X
    Y = solve_care(CareProblem(A=A.T, G=(1.0 - gi2) * C.T @ C, H=B @ B.T)).X
    T, Tinv, _, r = _truncated_projectors(X, Y, r, sys.n)
    return StateSpace(A=T @ A @ Tinv, B=T @ B, C=C @ Tinv, D=sys.D)


def minimal_realization(sys, eps_trunc=1e-12, gamma=2.0):
    """Numerically minimal pH realization.

    Runs the structure-preserving pipeline (P = 0) and truncates every
    characteristic value sigma_i <= eps_trunc * sigma_1.
    """
    A = (sys.J - sys.R) @ sys.Q
    C = sys.B.T @ sys.Q
    X, Y = _modified_control_solution(A, sys.B, C, sys.Q, gamma)
    _, _, f = _pair_svd(X, Y)
    sigma = f.S
    r = int(np.sum(sigma > eps_trunc * sigma[0]))
    if r == sys.n:
        return sys
    return mhinf_bt(sys, gamma, r)


def _difference_norm(A, B, C, Ar, Br, Cr):
    """H-infinity norm of G - G_r via the block-diagonal joint realization."""
    n, nr = A.shape[0], Ar.shape[0]
    Abig = np.block([[A, np.zeros((n, nr))], [np.zeros((nr, n)), Ar]])
    Bbig = np.vstack([B, Br])
    Cbig = np.hstack([C, -Cr])
    return hinf_norm(StateSpace(A=Abig, B=Bbig, C=Cbig))


def error_curve(sys, gamma, orders, representation="canonical", P=None, Xrep=None):
    """H-infinity reduction errors over a list of target orders.

    `representation` selects the Hamiltonian used as inverse Gramian:
    "canonical" keeps Q, "xmin"/"xmax" swap in an extremal KYP-LMI solution
    of the induced state-space system (the transfer function is unchanged;
    only the Gramian pair moves).  An explicit `Xrep` overrides the choice.
    Orders whose reduction or norm evaluation fails are absent from the
    result rather than aborting the sweep.

    Returns
    -------
    list of (r, error) pairs in input order.
    """
    from .kyp import extremal_kyp  # deferred: kyp builds on riccati only

    A = (sys.J - sys.R) @ sys.Q
    B = sys.B
    C = B.T @ sys.Q
    if Xrep is None:
        if representation == "canonical":
            Xrep = sys.Q
        elif representation in ("xmin", "xmax"):
            ext = extremal_kyp(StateSpace(A=A, B=B, C=C))
            Xrep = ext.Xmin if representation == "xmin" else ext.Xmax
        else:
            raise ValueError(f"unknown representation {representation!r}")
    Y = np.linalg.inv(Xrep)
    Y = (Y + Y.T) / 2.0
    P = _check_admissible_P(sys, P)
    # the truncation acts on state-space level so that representations whose
    # dissipation part is only numerically semi-definite still reduce
    X, Y = _modified_control_solution(A, B, C, Xrep, gamma, P, Y=Y)
    out = []
    for r in orders:
        try:
            T, Tinv, _, _ = _truncated_projectors(X, Y, int(r), sys.n)
            err = _difference_norm(A, B, C, T @ A @ Tinv, T @ B, C @ Tinv)
        except PhhinfError:
            continue
        out.append((int(r), float(err)))
    return out
