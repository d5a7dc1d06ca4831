"""Lyapunov and continuous algebraic Riccati equation solvers.

The generic problem is A^T X + X A - X G X + H = 0 with symmetric G and H.
Solutions are obtained from the invariant subspaces of the associated
Hamiltonian matrix M = [[A, -G], [-H, -A^T]]: the stable subspace yields the
stabilizing solution, the anti-stable subspace the anti-stabilizing one.
The subspace is selected by eigenvalue-real-part rank after diagonal
balancing, which keeps the selection well defined on badly scaled problems.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    DimensionMismatch,
    ImaginaryAxisEigenvalue,
    IndefiniteMatrix,
    ResidualTooLarge,
    SpectrumClash,
    SubspaceNotGraph,
)
from .linalg import as_matrix, eigvals, ordered_schur

__all__ = ["CareProblem", "CareSolution", "solve_lyapunov", "solve_care", "care_residual"]


@dataclass
class CareProblem:
    """Coefficients of A^T X + X A - X G X + H = 0."""

    A: np.ndarray
    G: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        self.A = as_matrix(self.A, "A", square=True)
        self.G = as_matrix(self.G, "G", square=True)
        self.H = as_matrix(self.H, "H", square=True)
        n = self.A.shape[0]
        if self.G.shape[0] != n or self.H.shape[0] != n:
            raise DimensionMismatch("A, G, H sizes disagree")
        for name, M in (("G", self.G), ("H", self.H)):
            if np.linalg.norm(M - M.T) > 1e-10 * max(1.0, np.linalg.norm(M)):
                raise IndefiniteMatrix(f"{name} is not symmetric within tolerance")


@dataclass
class CareSolution:
    X: np.ndarray
    mode: str  # "stabilizing" | "anti-stabilizing" | "unverified"
    residual: float
    closure_spectrum: np.ndarray


def solve_lyapunov(A, W):
    """Solve A^T X + X A + W = 0 by the Bartels-Stewart scheme.

    Raises
    ------
    SpectrumClash
        If sigma(A) and sigma(-A^T) overlap within 1e-12 spacing, in which
        case the equation is singular.
    """
    A = as_matrix(A, "A", square=True)
    W = as_matrix(W, "W", square=True)
    ev = eigvals(A)
    scale = max(1.0, np.abs(ev).max()) if ev.size else 1.0
    pair = np.abs(ev[:, None] + ev[None, :].conj())
    if np.min(pair) < 1e-12 * scale:
        raise SpectrumClash("sigma(A) meets sigma(-A^T); Lyapunov equation singular")
    X = sla.solve_continuous_lyapunov(A.T, -W)
    return (X + X.T) / 2.0


def care_residual(p, X):
    """Relative residual ||A^T X + X A - X G X + H||_F / max(1, ||X||_F)."""
    X = as_matrix(X, "X", square=True)
    if X.shape != p.A.shape:
        raise DimensionMismatch("X has wrong shape for this problem")
    res = p.A.T @ X + X @ p.A - X @ p.G @ X + p.H
    return float(np.linalg.norm(res) / max(1.0, np.linalg.norm(X)))


def solve_care(p, mode="stabilizing", residual_bound=1e-8, axis_tol=1e-8):
    """Stabilizing or anti-stabilizing solution of a CARE.

    Builds the Hamiltonian matrix, checks its spectrum against the imaginary
    axis, extracts the mode-selected n-dimensional invariant subspace
    [[U1], [U2]], and returns X = U2 U1^{-1} symmetrized.  The requested mode
    is verified against sigma(A - G X); if the verification fails the
    solution is returned with mode "unverified".

    Raises
    ------
    ImaginaryAxisEigenvalue, SubspaceNotGraph, ResidualTooLarge
    """
    if mode not in ("stabilizing", "anti-stabilizing"):
        raise ValueError(f"unknown mode {mode!r}")
    n = p.A.shape[0]
    M = np.block([[p.A, -p.G], [-p.H, -p.A.T]])
    ev = eigvals(M)
    close = np.abs(ev.real) <= axis_tol * np.maximum(1.0, np.abs(ev))
    if np.any(close):
        worst = ev[close][np.argmin(np.abs(ev[close].real))]
        raise ImaginaryAxisEigenvalue(
            f"Hamiltonian eigenvalue {worst:.3e} within {axis_tol:.0e} of the imaginary axis"
        )
    side = "min-real" if mode == "stabilizing" else "max-real"
    Z, _ = ordered_schur(M, n, side=side)
    U1, U2 = Z[:n, :n], Z[n:, :n]
    if np.linalg.cond(U1) > 1e12:
        raise SubspaceNotGraph(f"basis condition {np.linalg.cond(U1):.3e} exceeds 1e12")
    X = np.linalg.solve(U1.T, U2.T).T
    X = (X + X.T) / 2.0
    res = care_residual(p, X)
    if res > residual_bound:
        raise ResidualTooLarge(f"CARE residual {res:.3e} exceeds {residual_bound:.0e}")
    closure = eigvals(p.A - p.G @ X)
    ok = closure.real.max() < 0.0 if mode == "stabilizing" else closure.real.min() > 0.0
    return CareSolution(
        X=X, mode=mode if ok else "unverified", residual=res, closure_spectrum=closure
    )
