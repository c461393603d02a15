"""Generalized concurrences of pure and mixed states and the preconcurrence
matrices they are built from.

Complex conjugation is always taken in the computational basis fixed by
:mod:`hollowsep.states`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, WrongShape
from .linalg import singular_values
from .operators import OperatorCatalog, SpinFlipOperator, generate_minimal
from .states import DEFAULT_RANK_TOL, DensityMatrix, PureState, eigendecompose_rho

DEFAULT_PURE_TOL = 1e-10
DEFAULT_MIXED_TOL = 1e-9
_CHUNK = 4096


def _amplitudes(psi) -> np.ndarray:
    if isinstance(psi, PureState):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex).reshape(-1)


def pure_concurrences(psi, catalog: OperatorCatalog) -> np.ndarray:
    """``C_a(psi) = 2 |a_i a_i' - a_j a_j'|`` for every operator of the catalog."""
    a = _amplitudes(psi)
    if a.shape[0] != catalog.shape.dim:
        raise DimensionMismatch(f"state of length {a.shape[0]} for dimension {catalog.shape.dim}")
    q = catalog.quads
    return 2 * np.abs(a[q[:, 0]] * a[q[:, 1]] - a[q[:, 2]] * a[q[:, 3]])


def pure_concurrence(psi, op: SpinFlipOperator) -> float:
    a = _amplitudes(psi)
    if a.shape[0] != op.shape.dim:
        raise DimensionMismatch(f"state of length {a.shape[0]} for dimension {op.shape.dim}")
    return float(2 * abs(a[op.i] * a[op.ip] - a[op.j] * a[op.jp]))


@dataclass
class PureVerdict:
    separable: bool
    witnesses: list[tuple[int, float]] = field(default_factory=list)  # (alpha, value), alpha 0-based
    max_concurrence: float = 0.0


def pure_separability(psi, catalog: OperatorCatalog, tol: float = DEFAULT_PURE_TOL) -> PureVerdict:
    """Separable iff every generalized concurrence is at most ``tol``.

    ``tol`` is absolute and is multiplied by ``|psi|^2`` so that unnormalized
    vectors are judged like their normalized counterparts.
    """
    a = _amplitudes(psi)
    c = pure_concurrences(a, catalog)
    thr = tol * float(np.vdot(a, a).real)
    bad = np.flatnonzero(c > thr)
    return PureVerdict(
        separable=bad.size == 0,
        witnesses=[(int(k), float(c[k])) for k in bad],
        max_concurrence=float(c.max()) if c.size else 0.0,
    )


@dataclass
class PreconcurrenceMatrix:
    """Symmetric matrix ``tau_kl = <psi_k| S |psi_l^*>``; rows past ``base_rank``
    come from zero padding."""

    alpha: int | None
    tau: np.ndarray
    base_rank: int

    @property
    def size(self) -> int:
        return self.tau.shape[0]

    def singular_values(self) -> np.ndarray:
        return singular_values(self.tau)

    def extended(self, p: int) -> "PreconcurrenceMatrix":
        return PreconcurrenceMatrix(self.alpha, extend(self.tau, p), self.base_rank)


def _states_array(states) -> np.ndarray:
    return np.atleast_2d(np.asarray(states, dtype=complex))


def preconcurrence_matrices(states, catalog: OperatorCatalog) -> np.ndarray:
    """All preconcurrence matrices at once, shape ``(n_ops, p, p)``.

    ``states`` is a ``(p, D)`` array of unnormalized state vectors.
    """
    psi = _states_array(states)
    if psi.shape[1] != catalog.shape.dim:
        raise DimensionMismatch(f"states of length {psi.shape[1]} for dimension {catalog.shape.dim}")
    p = psi.shape[0]
    out = np.empty((len(catalog), p, p), dtype=complex)
    for lo in range(0, len(catalog), _CHUNK):
        q = catalog.quads[lo : lo + _CHUNK]
        a_i, a_ip, a_j, a_jp = (psi[:, q[:, c]].T for c in range(4))  # each (n, p)
        t = (
            np.einsum("nk,nl->nkl", a_i, a_ip)
            + np.einsum("nk,nl->nkl", a_ip, a_i)
            - np.einsum("nk,nl->nkl", a_j, a_jp)
            - np.einsum("nk,nl->nkl", a_jp, a_j)
        )
        out[lo : lo + _CHUNK] = t.conj()
    return out


def preconcurrence(states, op: SpinFlipOperator, alpha: int | None = None) -> PreconcurrenceMatrix:
    psi = _states_array(states)
    if psi.shape[1] != op.shape.dim:
        raise DimensionMismatch(f"states of length {psi.shape[1]} for dimension {op.shape.dim}")
    a_i, a_ip, a_j, a_jp = psi[:, op.i], psi[:, op.ip], psi[:, op.j], psi[:, op.jp]
    tau = (np.outer(a_i, a_ip) + np.outer(a_ip, a_i) - np.outer(a_j, a_jp) - np.outer(a_jp, a_j)).conj()
    base_rank = int(np.sum(np.linalg.norm(psi, axis=1) > 0))
    return PreconcurrenceMatrix(alpha, tau, base_rank)


def extend(tau, p: int) -> np.ndarray:
    """Zero-pad a square matrix (or a stack of them) to ``p x p``."""
    tau = np.asarray(tau)
    r = tau.shape[-1]
    if p < r:
        raise ValueError(f"cannot extend a {r}x{r} matrix to {p}x{p}")
    pad = [(0, 0)] * (tau.ndim - 2) + [(0, p - r), (0, p - r)]
    return np.pad(tau, pad)


def thompson_gap(s) -> np.ndarray:
    """``s_1 - sum_{k>=2} s_k`` along the last axis (``s`` sorted descending)."""
    s = np.asarray(s, dtype=float)
    if s.shape[-1] == 0:
        return np.zeros(s.shape[:-1])
    return s[..., 0] - s[..., 1:].sum(axis=-1)


def concurrence_from_singular_values(s) -> np.ndarray:
    return np.maximum(0.0, thompson_gap(s))


@dataclass
class MixedConcurrenceReport:
    """Per-operator data for one density matrix."""

    rank: int
    taus: np.ndarray  # (n_ops, r, r)
    singular_values: np.ndarray  # (n_ops, r)
    gaps: np.ndarray  # (n_ops,)
    eigstates: np.ndarray  # (r, D)

    @property
    def concurrences(self) -> np.ndarray:
        return np.maximum(0.0, self.gaps)


def mixed_concurrence_report(
    rho: DensityMatrix, catalog: OperatorCatalog, rank_tol: float = DEFAULT_RANK_TOL
) -> MixedConcurrenceReport:
    if rho.shape != catalog.shape:
        raise DimensionMismatch(f"state shape {rho.shape} vs catalog shape {catalog.shape}")
    v = eigendecompose_rho(rho, rank_tol)
    taus = preconcurrence_matrices(v, catalog)
    s = singular_values(taus)
    return MixedConcurrenceReport(v.shape[0], taus, s, thompson_gap(s), v)


def mixed_concurrences(rho: DensityMatrix, catalog: OperatorCatalog, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Convex-roof concurrences ``max(0, s_1 - sum_{k>=2} s_k)`` for every
    operator, from the singular values of the eigendecomposition's
    preconcurrence matrices."""
    return mixed_concurrence_report(rho, catalog, rank_tol).concurrences


def mixed_concurrence(rho: DensityMatrix, op: SpinFlipOperator, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    v = eigendecompose_rho(rho, rank_tol)
    s = preconcurrence(v, op).singular_values()
    return float(concurrence_from_singular_values(s))


def flip_spectrum(rho: DensityMatrix, op: SpinFlipOperator, r: int | None = None) -> np.ndarray:
    """Square roots of the ``r`` largest eigenvalues of ``rho S rho^* S``.

    Independent of the preconcurrence route: uses the dense ``D x D`` product.
    """
    s = op.dense()
    m = rho.matrix @ s @ rho.matrix.conj() @ s
    w = np.linalg.eigvals(m).real
    w = np.sort(np.clip(w, 0, None))[::-1]
    if r is not None:
        w = w[:r]
    return np.sqrt(w)


class Hollowisability(str, enum.Enum):
    YES = "yes"
    YES_WITH_EXTENSION = "yes_with_extension"
    NO = "no"


def is_hollowisable(tau, tol: float = DEFAULT_MIXED_TOL) -> Hollowisability:
    """Thompson test for a symmetric matrix.

    ``NO`` when ``s_1 - sum s_k > tol``. A 3x3 matrix with ``s_1 < s_2 + s_3``
    (strictly, beyond ``tol``) is not hollow-congruent itself but its 4x4 zero
    extension is, which gives ``YES_WITH_EXTENSION``.
    """
    t = tau.tau if isinstance(tau, PreconcurrenceMatrix) else np.asarray(tau)
    s = singular_values(t)
    gap = float(thompson_gap(s))
    if gap > tol:
        return Hollowisability.NO
    if t.shape[0] == 3 and gap < -tol:
        return Hollowisability.YES_WITH_EXTENSION
    return Hollowisability.YES


def hollowisable_at_size(s, p: int, tol: float) -> bool:
    """Whether a symmetric matrix with singular values ``s`` (padded with
    zeros to length ``p``) can be hollow after a ``p x p`` unitary congruence.

    Sizes 1, 2 and 3 force equality in the Thompson inequality: a hollow
    2x2 symmetric matrix has equal singular values and a hollow 3x3 one has
    ``s_1 = s_2 + s_3``.
    """
    s = np.sort(np.asarray(s, dtype=float))[::-1]
    if np.count_nonzero(s > tol) > p:
        return False
    s = np.concatenate([s, np.zeros(max(0, p - len(s)))])[:p]
    gap = float(thompson_gap(s))
    if p <= 3:
        return abs(gap) <= tol
    return gap <= tol


_SIGMA_Y_SQ = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_k`` are the eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))`` with
    ``rho~ = (sy x sy) rho^* (sy x sy)``, equivalently the square roots of the
    eigenvalues of ``rho rho~``. They are computed as the singular values of
    ``sqrt(rho) (sy x sy) sqrt(rho)^*``, which stays accurate when ``rho`` is
    rank deficient (square roots of tiny eigenvalues would amplify rounding).
    """
    if tuple(rho.shape.dims) != (2, 2):
        raise WrongShape(f"Wootters formula needs shape (2, 2), got {rho.shape.dims}")
    w, v = np.linalg.eigh(rho.matrix)
    root = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    lam = np.linalg.svd(root @ _SIGMA_Y_SQ @ root.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1:].sum()))


def catalog_for(shape) -> OperatorCatalog:
    return generate_minimal(shape)
