"""Dense complex linear-algebra primitives shared by the rest of the package."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch, NotHermitian, NotSquare, NotUnitary

DEFAULT_TOL_HERM = 1e-9


def _as_finite(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")


def hermitian_eig(m, tol_herm: float = DEFAULT_TOL_HERM):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Matrix that must be Hermitian up to ``tol_herm`` in max-norm. It is
        symmetrized before the solve.
    tol_herm : float
        Absolute tolerance on ``max |M - M^H|``.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Real eigenvalues in descending order.
    eigenvectors : ndarray, shape (n, n)
        Orthonormal eigenvectors stored as columns, matching ``eigenvalues``.
    """
    m = _as_finite(m)
    _require_square(m)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol_herm:
        raise NotHermitian(f"max |M - M^H| = {dev:.3e} exceeds {tol_herm:.1e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def singular_values(m) -> np.ndarray:
    """Singular values in descending order. Works on stacks ``(..., n, n)``."""
    m = _as_finite(m)
    if m.size == 0:
        return np.zeros(m.shape[:-2] + (0,))
    return np.linalg.svd(m, compute_uv=False)


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(len(u)))) <= tol)


def congruence(u, m, check: bool = True) -> np.ndarray:
    """Unitary congruence ``U M U^T`` (plain transpose, no conjugation).

    ``m`` may be a stack of matrices ``(k, n, n)``; the same ``U`` is applied to
    each.
    """
    u = _as_finite(u)
    m = _as_finite(m)
    _require_square(u)
    if m.shape[-2:] != u.shape:
        raise DimensionMismatch(f"U is {u.shape}, M is {m.shape[-2:]}")
    if check and not is_unitary(u):
        raise NotUnitary("U is not unitary within 1e-10")
    return u @ m @ u.T


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-random ``n x n`` unitary (QR of a Ginibre matrix with phase fix).

    ``seed`` is anything ``numpy.random.default_rng`` accepts, including a
    ``Generator``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q
