"""Dense real linear-algebra kernel.

Thin, deterministic layer over LAPACK (via numpy/scipy): real Schur form with
eigenvalue reordering, a sign-fixed SVD, semi-definite Cholesky-like factors,
and guarded linear solves.  All tolerances are relative to the Frobenius or
spectral norm of the input; every returned factorization satisfies a checkable
reconstruction bound.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import (
    DimensionMismatch,
    IndefiniteMatrix,
    NonFiniteMatrix,
    SchurConvergenceError,
    SingularMatrix,
)

__all__ = [
    "SchurForm",
    "SvdForm",
    "as_matrix",
    "real_schur",
    "ordered_schur",
    "svd_signed",
    "psd_factor",
    "solve_linear",
    "eigvals",
]


def as_matrix(a, name="matrix", square=False):
    """Validate and return `a` as a 2-d float64 array with finite entries."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteMatrix(f"{name} contains non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


@dataclass
class SchurForm:
    """Real Schur decomposition A = Z T Z^T with quasi-triangular T."""

    Z: np.ndarray
    T: np.ndarray
    eigenvalues: np.ndarray  # complex, in T block order


@dataclass
class SvdForm:
    """Sign-fixed SVD A = U diag(S) V^T (economy size)."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def _schur_block_eigenvalues(T):
    """Eigenvalues of a real quasi-triangular matrix, in block order."""
    n = T.shape[0]
    ev = np.empty(n, dtype=complex)
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            tr = T[i, i] + T[i + 1, i + 1]
            det = T[i, i] * T[i + 1, i + 1] - T[i, i + 1] * T[i + 1, i]
            disc = np.sqrt(complex(tr * tr / 4.0 - det))
            ev[i] = tr / 2.0 + disc
            ev[i + 1] = tr / 2.0 - disc
            i += 2
        else:
            ev[i] = T[i, i]
            i += 1
    return ev


def _trsen_reorder(T, Z, select):
    """Reorder a real Schur form so the selected eigenvalues lead.

    `select` is a boolean array per eigenvalue position; complex pairs are
    kept together by LAPACK.
    """
    n = T.shape[0]
    out = lapack.dtrsen(
        np.asarray(select, dtype=np.int32), T, Z,
        job="N", lwork=max(1, 2 * n * n), liwork=max(1, n * n),
    )
    T2, Z2, info = out[0], out[1], out[-1]
    if info != 0:
        raise SchurConvergenceError(f"eigenvalue reordering failed (dtrsen info={info})")
    return T2, Z2


def real_schur(A, select=None):
    """Real Schur form of A, optionally with selected eigenvalues leading.

    Parameters
    ----------
    A : (n, n) array
    select : callable or None
        Predicate on a complex eigenvalue.  If given, the eigenvalues for
        which it is true are reordered to the leading block of T, so the
        leading columns of Z span the corresponding invariant subspace.

    Returns
    -------
    SchurForm
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    try:
        T, Z = sla.schur(A, output="real")
    except sla.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise SchurConvergenceError(
            f"QR iteration did not converge within the LAPACK budget (~30n = {30 * n} sweeps): {exc}"
        ) from exc
    if select is not None:
        ev = _schur_block_eigenvalues(T)
        mask = np.array([bool(select(l)) for l in ev])
        if mask.any() and not mask.all():
            T, Z = _trsen_reorder(T, Z, mask)
    return SchurForm(Z=Z, T=T, eigenvalues=_schur_block_eigenvalues(T))


def ordered_schur(M, k, side="min-real", balance=True):
    """Schur basis with the k eigenvalues of extremal real part leading.

    Computes a real Schur form of M (after optional diagonal balancing) and
    reorders so that the k eigenvalues of smallest (`side="min-real"`) or
    largest (`side="max-real"`) real part occupy the leading block.  Returns
    `(Z, eigenvalues)` where Z is the (unbalanced) orthogonal-up-to-scaling
    basis whose leading k columns span the selected invariant subspace.

    Selecting by rank instead of by a sign threshold keeps the selected
    count exactly k even when rounding pushes eigenvalues across the axis.
    """
    M = as_matrix(M, "M", square=True)
    n = M.shape[0]
    if not 0 < k <= n:
        raise DimensionMismatch(f"k={k} out of range for n={n}")
    if balance:
        Mb, D = sla.matrix_balance(M, permute=False)
        d = np.diag(D)
    else:
        Mb, d = M, np.ones(n)
    form = real_schur(Mb)
    ev = form.eigenvalues
    key = ev.real if side == "min-real" else -ev.real
    order = np.argsort(key, kind="stable")
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    T2, Z2 = _trsen_reorder(form.T, form.Z, mask)
    Z = (Z2.T * d).T  # undo balancing; columns still a basis, not orthonormal
    return Z, _schur_block_eigenvalues(T2)


def _fix_signs(U, V=None):
    """Largest-magnitude entry of each column of U made nonnegative (ties by
    lowest row index); matching columns of V negated in compensation."""
    for j in range(U.shape[1]):
        col = U[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0.0:
            U[:, j] = -col
            if V is not None:
                V[:, j] = -V[:, j]
    return U, V


def svd_signed(A):
    """Economy SVD with a deterministic sign convention.

    In each left singular vector the entry of largest magnitude is made
    nonnegative (ties broken by lowest row index), with the matching right
    singular vector negated in compensation.  Bit-stable across repeated
    calls on identical input.
    """
    A = as_matrix(A, "A")
    U, S, Vt = np.linalg.svd(A, full_matrices=False)
    V = Vt.T.copy()
    U = U.copy()
    _fix_signs(U, V)
    return SvdForm(U=U, S=S, V=V)


def psd_factor(A, tol=1e-12):
    """Cholesky-like factor L of a (possibly semi-definite) symmetric A.

    Returns L with `A ~= L @ L.T` and exactly rank(A) columns, where the rank
    is counted at the relative pivot threshold `tol`.  Pivots (eigenvalues)
    are processed in decreasing order; negative pivots below the threshold
    are clipped to zero.

    Raises
    ------
    IndefiniteMatrix
        If lambda_min(A) < -tol * ||A||_2.
    """
    A = as_matrix(A, "A", square=True)
    nrm = np.linalg.norm(A)
    if np.linalg.norm(A - A.T) > tol * max(1.0, nrm):
        raise IndefiniteMatrix("matrix is not symmetric within tolerance")
    w, V = np.linalg.eigh((A + A.T) / 2.0)
    scale = max(np.abs(w).max(), 0.0) if w.size else 0.0
    if w.size and w[0] < -tol * max(1.0, scale):
        raise IndefiniteMatrix(f"lambda_min = {w[0]:.3e} below -tol*||A||_2")
    thr = tol * max(scale, 0.0)
    keep = np.where(w > thr)[0][::-1]  # decreasing pivot order
    L = V[:, keep] * np.sqrt(w[keep])
    _fix_signs(L)
    return L


def solve_linear(A, B):
    """Solve A X = B with an explicit pivot-based singularity guard."""
    A = as_matrix(A, "A", square=True)
    B = as_matrix(B, "B")
    if B.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    with warnings.catch_warnings():
        # singularity is reported through SingularMatrix below, not a warning
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A)
    norm2 = np.linalg.norm(A, 2) if A.size else 0.0
    pivots = np.abs(np.diag(lu))
    if A.size and pivots.min() < 1e-14 * norm2:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below 1e-14 * ||A||_2 = {1e-14 * norm2:.3e}"
        )
    return sla.lu_solve((lu, piv), B)


def eigvals(A):
    """All eigenvalues of a square matrix, with multiplicity."""
    A = as_matrix(A, "A", square=True)
    return np.linalg.eigvals(A)
