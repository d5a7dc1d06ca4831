"""System representations: general LTI state space and port-Hamiltonian forms.

A port-Hamiltonian system (J, R, Q, B) with skew-symmetric J, positive
semi-definite dissipation R and positive definite Hamiltonian Q induces the
state-space realization A = (J - R) Q, C = B^T Q, D = 0.  The reverse
construction splits A X^{-1} into skew and symmetric parts for any positive
definite X with C = B^T X and X A + A^T X <= 0, making X the Hamiltonian of
the new representation.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import mmio
from .errors import DimensionMismatch, IndefiniteMatrix, NotPassivatable, SingularResolvent
from .linalg import as_matrix, eigvals, svd_signed

__all__ = [
    "StateSpace",
    "PHSystem",
    "ph_to_ss",
    "ss_to_ph",
    "ph_representation",
    "is_minimal",
    "is_asymptotically_stable",
    "transfer_eval",
    "save_system",
    "load_system",
]

_SYM_TOL = 1e-10


@dataclass
class StateSpace:
    """LTI realization (A, B, C, D)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray = None

    def __post_init__(self):
        self.A = as_matrix(self.A, "A", square=True)
        self.B = as_matrix(self.B, "B")
        self.C = as_matrix(self.C, "C")
        n = self.A.shape[0]
        if self.D is None:
            self.D = np.zeros((self.C.shape[0], self.B.shape[1]))
        self.D = as_matrix(self.D, "D")
        m, p = self.B.shape[1], self.C.shape[0]
        if self.B.shape[0] != n or self.C.shape[1] != n or self.D.shape != (p, m):
            raise DimensionMismatch(
                f"inconsistent shapes: A{self.A.shape} B{self.B.shape} C{self.C.shape} D{self.D.shape}"
            )
        if n == 0 or m == 0 or p == 0:
            raise DimensionMismatch("degenerate system (n=0 or m=0 or p=0)")
        if m > n or p > n:
            raise DimensionMismatch(f"m={m}, p={p} must not exceed n={n}")

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def p(self):
        return self.C.shape[0]


@dataclass
class PHSystem:
    """Port-Hamiltonian realization (J, R, Q, B)."""

    J: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        self.J = as_matrix(self.J, "J", square=True)
        self.R = as_matrix(self.R, "R", square=True)
        self.Q = as_matrix(self.Q, "Q", square=True)
        self.B = as_matrix(self.B, "B")
        n = self.J.shape[0]
        if self.R.shape[0] != n or self.Q.shape[0] != n or self.B.shape[0] != n:
            raise DimensionMismatch("J, R, Q, B sizes disagree")
        if n == 0 or self.B.shape[1] == 0:
            raise DimensionMismatch("degenerate system (n=0 or m=0)")
        if np.linalg.norm(self.J + self.J.T) > _SYM_TOL * max(1.0, np.linalg.norm(self.J)):
            raise IndefiniteMatrix("J is not skew-symmetric within tolerance")
        if np.linalg.norm(self.R - self.R.T) > _SYM_TOL * max(1.0, np.linalg.norm(self.R)):
            raise IndefiniteMatrix("R is not symmetric within tolerance")
        r_eigs = np.linalg.eigvalsh((self.R + self.R.T) / 2.0)
        if r_eigs.size and r_eigs[0] < -_SYM_TOL * max(1.0, np.linalg.norm(self.R, 2)):
            raise IndefiniteMatrix(f"R has lambda_min = {r_eigs[0]:.3e} < 0")
        if np.linalg.norm(self.Q - self.Q.T) > _SYM_TOL * np.linalg.norm(self.Q):
            raise IndefiniteMatrix("Q is not symmetric within tolerance")
        if np.linalg.eigvalsh((self.Q + self.Q.T) / 2.0)[0] <= 0.0:
            raise IndefiniteMatrix("Q is not positive definite")

    @property
    def n(self):
        return self.J.shape[0]

    @property
    def m(self):
        return self.B.shape[1]


def ph_to_ss(sys):
    """State-space realization of a pH system: A = (J-R)Q, C = B^T Q, D = 0."""
    A = (sys.J - sys.R) @ sys.Q
    C = sys.B.T @ sys.Q
    return StateSpace(A=A, B=sys.B, C=C)


def _jr_split(A, X):
    """Skew/symmetric split of A X^{-1}: returns (J, R) with A = (J-R)X."""
    AXi = np.linalg.solve(X.T, A.T).T  # A @ X^{-1}
    J = (AXi - AXi.T) / 2.0
    R = -(AXi + AXi.T) / 2.0
    return J, R


def ph_representation(sys, X):
    """pH representation of a state-space system with Hamiltonian X, unchecked.

    Splits A X^{-1} into skew and symmetric parts and sets Q := X.  No Gram or
    dissipation tolerance is enforced, so the result may violate the PHSystem
    invariants; use :func:`ss_to_ph` for the validated construction.  Intended
    for representation swaps with numerically computed extremal Hamiltonians.
    """
    X = as_matrix(X, "X", square=True)
    J, R = _jr_split(sys.A, X)
    return J, R, X, sys.B


def ss_to_ph(sys, X, tol=1e-8):
    """Validated pH representation of (A, B, C) with Hamiltonian X.

    Requires C = B^T X within `tol` (relative to ||C||_F) and
    X A + A^T X <= 0 within an eigenvalue shift of `tol * ||X A||_2`.

    Raises
    ------
    NotPassivatable
        If either condition fails.
    """
    X = as_matrix(X, "X", square=True)
    if np.linalg.norm(sys.D) != 0.0:
        raise NotPassivatable("feedthrough D must be zero")
    gram = np.linalg.norm(sys.C - sys.B.T @ X)
    if gram > tol * max(1.0, np.linalg.norm(sys.C)):
        raise NotPassivatable(f"C != B^T X: relative mismatch {gram / max(1.0, np.linalg.norm(sys.C)):.3e}")
    W = X @ sys.A + sys.A.T @ X
    lam_max = np.linalg.eigvalsh((W + W.T) / 2.0)[-1]
    if lam_max > tol * max(1.0, np.linalg.norm(W, 2)):
        raise NotPassivatable(f"X A + A^T X has lambda_max = {lam_max:.3e} > 0")
    J, R = _jr_split(sys.A, X)
    # clip rounding noise so the PHSystem invariants hold exactly at build time
    J = (J - J.T) / 2.0
    R = (R + R.T) / 2.0
    return PHSystem(J=J, R=R, Q=X, B=sys.B)


def _kalman_rank(M, tol):
    s = svd_signed(M).S
    if s.size == 0 or s[0] == 0.0:
        return 0, 0.0
    rank = int(np.sum(s > tol * s[0]))
    gap = s[rank - 1] / s[0] if rank > 0 else 0.0
    return rank, gap


def is_minimal(sys, tol=1e-10):
    """Numerical minimality via SVD ranks of the Kalman matrices.

    Returns `(flag, report)` where the report carries both ranks and the
    smallest retained relative singular values.
    """
    n = sys.n
    ctrb = np.hstack([np.linalg.matrix_power(sys.A, k) @ sys.B for k in range(n)])
    obsv = np.vstack([sys.C @ np.linalg.matrix_power(sys.A, k) for k in range(n)])
    rc, gc = _kalman_rank(ctrb, tol)
    ro, go = _kalman_rank(obsv, tol)
    report = {
        "n": n,
        "controllability_rank": rc,
        "observability_rank": ro,
        "controllability_gap": gc,
        "observability_gap": go,
    }
    return (rc == n and ro == n), report


def is_asymptotically_stable(A, margin=0.0):
    """True iff all eigenvalues satisfy Re(lambda) < -margin."""
    A = as_matrix(A, "A", square=True)
    return bool(np.max(eigvals(A).real) < -margin)


def transfer_eval(sys, s):
    """Evaluate G(s) = C (sI - A)^{-1} B + D at a complex point."""
    n = sys.n
    M = s * np.eye(n) - sys.A
    # resolvent pole guard: smallest singular value against the matrix scale
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise SingularResolvent(f"s = {s} is within tolerance of an eigenvalue of A")
    return sys.C @ np.linalg.solve(M, sys.B) + sys.D


# ---------------------------------------------------------------------------
# serialization: directory of MatrixMarket files plus a JSON manifest
# ---------------------------------------------------------------------------

def save_system(path, sys, extra=None):
    """Serialize a StateSpace or PHSystem to `path` (a directory)."""
    os.makedirs(path, exist_ok=True)
    if isinstance(sys, PHSystem):
        kind = "ph"
        blocks = {"J": sys.J, "R": sys.R, "Q": sys.Q, "B": sys.B}
    elif isinstance(sys, StateSpace):
        kind = "ss"
        blocks = {"A": sys.A, "B": sys.B, "C": sys.C, "D": sys.D}
    else:
        raise TypeError(f"cannot serialize {type(sys).__name__}")
    manifest = {"kind": kind, "blocks": {}}
    for name, mat in blocks.items():
        fname = f"{name}.mtx"
        mmio.write_matrix(os.path.join(path, fname), mat)
        manifest["blocks"][name] = fname
    if extra:
        manifest.update(extra)
    with open(os.path.join(path, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_system(path):
    """Load a StateSpace or PHSystem serialized by :func:`save_system`."""
    with open(os.path.join(path, "manifest.json"), encoding="ascii") as fh:
        manifest = json.load(fh)
    blocks = {
        name: mmio.read_matrix(os.path.join(path, fname))
        for name, fname in manifest["blocks"].items()
    }
    if manifest["kind"] == "ph":
        return PHSystem(J=blocks["J"], R=blocks["R"], Q=blocks["Q"], B=blocks["B"])
    if manifest["kind"] == "ss":
        return StateSpace(A=blocks["A"], B=blocks["B"], C=blocks["C"], D=blocks.get("D"))
    raise ValueError(f"unknown system kind {manifest['kind']!r}")
