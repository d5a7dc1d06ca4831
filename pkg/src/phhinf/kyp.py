"""Lur'e certificates and extremal KYP-LMI solutions.

For a system (A, B, C) with D = 0 the KYP-LMI reads
P A + A^T P <= 0, C = B^T P, P = P^T > 0.  Its solution set has extremal
elements X_min <= P <= X_max.  They are computed here through the classical
regularization: an artificial feedthrough D + D^T = eps I turns the LMI into
the Riccati equation

    X A0 + A0^T X + X B (eps I)^{-1} B^T X + C^T (eps I)^{-1} C = 0,
    A0 = A - B (eps I)^{-1} C,

whose stabilizing solution is X_min.  X_max is obtained as the inverse of the
minimal solution of the dual system (A^T, C^T, B^T): the KYP solution sets of
a system and its dual are inverses of each other, and the dual route is far
better conditioned than the anti-stabilizing primal solve at small eps.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DissipationViolated,
    GramMismatch,
    IndefiniteMatrix,
    NotAsymptoticallyStable,
    OrderingViolated,
    PhhinfError,
    RankDeficientB,
)
from .linalg import as_matrix, psd_factor, svd_signed
from .riccati import CareProblem, solve_care
from .systems import is_asymptotically_stable

__all__ = ["LureCertificate", "ExtremalKyp", "check_lure", "check_strong_lure", "extremal_kyp"]


@dataclass
class LureCertificate:
    """Checked solution (P, L, W) of the (strong) Lur'e equations, D = 0."""

    P: np.ndarray
    L: np.ndarray
    W: np.ndarray
    S: np.ndarray = None
    strong: bool = False


def _require_spd(M, name):
    M = as_matrix(M, name, square=True)
    if np.linalg.norm(M - M.T) > 1e-10 * max(1.0, np.linalg.norm(M)):
        raise IndefiniteMatrix(f"{name} is not symmetric")
    if np.linalg.eigvalsh((M + M.T) / 2.0)[0] <= 0.0:
        raise IndefiniteMatrix(f"{name} is not positive definite")
    return M


def check_lure(sys, P, tol=1e-8):
    """Verify that P certifies the Lur'e equations for (A, B, C), D = 0.

    Succeeds iff C = B^T P within `tol` (relative to ||C||_F) and
    P A + A^T P <= tol * ||P A||_2.  On success L is a semi-definite factor
    of -(P A + A^T P).

    Raises
    ------
    GramMismatch, DissipationViolated
    """
    P = _require_spd(P, "P")
    gram = np.linalg.norm(sys.C - sys.B.T @ P)
    if gram > tol * max(1.0, np.linalg.norm(sys.C)):
        raise GramMismatch(
            f"C != B^T P: relative mismatch {gram / max(1.0, np.linalg.norm(sys.C)):.3e}"
        )
    W = P @ sys.A + sys.A.T @ P
    Wsym = (W + W.T) / 2.0
    shift = tol * max(1.0, np.linalg.norm(W, 2))
    lam_max = np.linalg.eigvalsh(Wsym)[-1]
    if lam_max > shift:
        raise DissipationViolated(f"lambda_max(P A + A^T P) = {lam_max:.3e} > 0")
    L = psd_factor(-Wsym + shift * np.eye(P.shape[0]), tol)
    return LureCertificate(P=P, L=L, W=np.zeros((sys.m, sys.m)))


def check_strong_lure(sys, P, S, tol=1e-8):
    """Verify the strong Lur'e equations: adds S > 0, stability, full-rank B."""
    P = _require_spd(P, "P")
    S = _require_spd(S, "S")
    smin = svd_signed(sys.B).S[-1]
    if smin <= tol * max(1.0, np.linalg.norm(sys.B, 2)):
        raise RankDeficientB(f"sigma_min(B) = {smin:.3e}")
    if not is_asymptotically_stable(sys.A):
        raise NotAsymptoticallyStable("A has an eigenvalue with Re >= 0")
    gram = np.linalg.norm(sys.C - sys.B.T @ P)
    if gram > tol * max(1.0, np.linalg.norm(sys.C)):
        raise GramMismatch(
            f"C != B^T P: relative mismatch {gram / max(1.0, np.linalg.norm(sys.C)):.3e}"
        )
    W = P @ sys.A + sys.A.T @ P + S
    Wsym = (W + W.T) / 2.0
    shift = tol * max(1.0, np.linalg.norm(P @ sys.A, 2))
    lam_max = np.linalg.eigvalsh(Wsym)[-1]
    if lam_max > shift:
        raise DissipationViolated(f"lambda_max(P A + A^T P + S) = {lam_max:.3e} > 0")
    L = psd_factor(-Wsym + shift * np.eye(P.shape[0]), tol)
    return LureCertificate(P=P, L=L, W=np.zeros((sys.m, sys.m)), S=S, strong=True)


def _kyp_min(A, B, C, eps):
    """Stabilizing solution of the regularized positive-real Riccati equation."""
    A0 = A - (B / eps) @ C
    prob = CareProblem(A=A0, G=-(B @ B.T) / eps, H=(C.T @ C) / eps)
    # the 1/eps scaling makes the algebraic residual meaningless; feasibility
    # of the result is checked by the caller instead
    X = solve_care(prob, "stabilizing", residual_bound=np.inf).X
    return _newton_refine(X, A, B, C, eps)


def _newton_refine(X, A, B, C, eps, iters=2):
    """Newton steps on the regularized equation in its well-scaled form.

    The exact solution satisfies X A + A^T X = -(C - B^T X)^T (C - B^T X)/eps;
    each step solves a Lyapunov equation with the stable closure matrix and
    roughly squares the defect.  Falls back to the unrefined iterate if the
    Lyapunov solve degrades it.
    """
    import scipy.linalg as sla

    for _ in range(iters):
        E = C - B.T @ X
        F = X @ A + A.T @ X + (E.T @ E) / eps
        Ac = A + (B / eps) @ (B.T @ X - C)
        try:
            D = sla.solve_continuous_lyapunov(Ac.T, -F)
        except np.linalg.LinAlgError:  # pragma: no cover - defensive
            break
        Xn = X + (D + D.T) / 2.0
        En = C - B.T @ Xn
        Fn = Xn @ A + A.T @ Xn + (En.T @ En) / eps
        if np.linalg.norm(Fn) >= np.linalg.norm(F):
            break
        X = Xn
    return X


def _gram_polish(X, B, C):
    """Minimal symmetric correction enforcing C = B^T X exactly.

    With E = C - B^T X the product E B is symmetric (both C B and B^T X B
    are), which makes the closed-form correction below an exact symmetric
    solution of B^T Delta = E.
    """
    E = C - B.T @ X
    K = np.linalg.solve(B.T @ B, B.T).T  # B (B^T B)^{-1}
    D = K @ E + E.T @ K.T - K @ (E @ B) @ K.T
    Xp = X + D
    return (Xp + Xp.T) / 2.0


class ExtremalKyp(NamedTuple):
    Xmin: np.ndarray
    Xmax: np.ndarray
    eps_used: float


def extremal_kyp(sys, eps=1e-12, max_retries=2):
    """Extremal KYP-LMI solutions (X_min, X_max) of a minimal stable system.

    On solver breakdown the regularization is retried with eps * 1e3 (at most
    `max_retries` times); the eps actually used is recorded on the result.

    Raises
    ------
    OrderingViolated
        If lambda_min(X_max - X_min) < -1e-6 * ||X_max||_2.
    """
    last_exc = None
    for attempt in range(max_retries + 1):
        eps_k = eps * (1e3 ** attempt)
        try:
            Xmin = _gram_polish(_kyp_min(sys.A, sys.B, sys.C, eps_k), sys.B, sys.C)
            Ymin = _kyp_min(sys.A.T, sys.C.T, sys.B.T, eps_k)
            Xmax = np.linalg.inv(Ymin)
            Xmax = _gram_polish((Xmax + Xmax.T) / 2.0, sys.B, sys.C)
        except (PhhinfError, np.linalg.LinAlgError) as exc:
            last_exc = exc
            continue
        if np.linalg.eigvalsh(Xmin)[0] < -1e-8 * np.linalg.norm(Xmin, 2):
            last_exc = IndefiniteMatrix("X_min not positive semi-definite")
            continue
        bad = False
        for X in (Xmin, Xmax):
            W = X @ sys.A + sys.A.T @ X
            if np.linalg.eigvalsh((W + W.T) / 2.0)[-1] > 1e-4 * max(1.0, np.linalg.norm(W, 2)):
                last_exc = DissipationViolated("extremal solution fails dissipation")
                bad = True
                break
        if bad:
            continue
        gap = np.linalg.eigvalsh(Xmax - Xmin)[0]
        if gap < -1e-6 * np.linalg.norm(Xmax, 2):
            last_exc = OrderingViolated(f"lambda_min(X_max - X_min) = {gap:.3e}")
            continue
        return ExtremalKyp(Xmin=Xmin, Xmax=Xmax, eps_used=eps_k)
    raise last_exc
