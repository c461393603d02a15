"""Composite-system data model.

Basis convention: the flat index of ``|i_1, ..., i_N>`` is row-major with the
last party varying fastest, so for three qubits the order is ``|000>, |001>,
|010>, ...``. Everything else in the package (conjugation, operators, files)
relies on this convention.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .exceptions import (
    BadExcitationNumber,
    DimensionMismatch,
    InvalidPartition,
    NotDensityMatrix,
    NotHermitian,
    NotNormalized,
    PartyOutOfRange,
)
from .linalg import hermitian_eig, singular_values

DEFAULT_RANK_TOL = 1e-10
DENSITY_TOL = 1e-9


@dataclass(frozen=True)
class SystemShape:
    """Party dimensions ``(m_1, ..., m_N)``, ``N >= 2`` and every ``m_j >= 2``."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(m) for m in self.dims)
        if len(dims) < 2:
            raise ValueError("need at least two parties")
        if any(m < 2 for m in dims):
            raise ValueError(f"party dimensions must be >= 2, got {dims}")
        if math.prod(dims) > 2**62:
            raise ValueError("total dimension overflows the index range")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, shape) -> "SystemShape":
        if isinstance(shape, SystemShape):
            return shape
        return cls(tuple(shape))

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for m in reversed(self.dims):
            out.append(acc)
            acc *= m
        return tuple(reversed(out))

    def flat(self, multi) -> int:
        if len(multi) != self.n_parties:
            raise DimensionMismatch(f"multi-index {multi} has wrong length")
        for i, m in zip(multi, self.dims):
            if not 0 <= i < m:
                raise ValueError(f"multi-index {multi} out of bounds for {self.dims}")
        return sum(i * s for i, s in zip(multi, self.strides))

    def multi(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.dim:
            raise ValueError(f"flat index {flat} out of range")
        return tuple(int(x) for x in np.unravel_index(flat, self.dims))

    def label(self, flat: int) -> str:
        """Ket label such as ``|010>``; components are comma separated if any
        party has dimension above 10."""
        parts = [str(i) for i in self.multi(flat)]
        sep = "," if max(self.dims) > 10 else ""
        return "|" + sep.join(parts) + ">"

    def __str__(self):
        return "x".join(map(str, self.dims))


@dataclass(frozen=True)
class PureState:
    shape: SystemShape
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape[0] != self.shape.dim:
            raise DimensionMismatch(f"{amp.shape[0]} amplitudes for dimension {self.shape.dim}")
        if abs(np.linalg.norm(amp) - 1) > 1e-10:
            raise NotNormalized(f"state norm is {np.linalg.norm(amp)!r}, expected 1")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def normalized(cls, shape, amplitudes) -> "PureState":
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(SystemShape.of(shape), amp / np.linalg.norm(amp))

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.shape, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix. Construction symmetrizes the input and checks
    trace and positivity within ``DENSITY_TOL``."""

    shape: SystemShape
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.shape.dim
        if m.shape != (d, d):
            raise DimensionMismatch(f"matrix shape {m.shape} does not match dimension {d}")
        try:
            w, _ = hermitian_eig(m, DENSITY_TOL)
        except NotHermitian as exc:
            raise NotDensityMatrix(str(exc)) from exc
        except ValueError as exc:
            raise NotDensityMatrix(str(exc)) from exc
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr - 1) > DENSITY_TOL:
            raise NotDensityMatrix(f"trace is {tr!r}, expected 1")
        if w[-1] < -DENSITY_TOL:
            raise NotDensityMatrix(f"negative eigenvalue {w[-1]:.3e}")
        if w[-1] < -1e-12:
            warnings.warn(
                f"eigenvalue {w[-1]:.2e} treated as zero", RuntimeWarning, stacklevel=3
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_states(cls, shape, states, weights=None) -> "DensityMatrix":
        """Mixture ``sum_k w_k |psi_k><psi_k|`` of (normalized) state vectors."""
        states = np.atleast_2d(np.asarray(states, dtype=complex))
        states = states / np.linalg.norm(states, axis=1, keepdims=True)
        if weights is None:
            weights = np.full(len(states), 1 / len(states))
        weights = np.asarray(weights, dtype=float)
        m = np.einsum("k,ki,kj->ij", weights, states, states.conj())
        return cls(SystemShape.of(shape), m)


def matricize(amplitudes, shape, k: int) -> np.ndarray:
    """Mode-``k`` matricization (``k`` is 1-based).

    Rows are indexed by ``i_k``; columns by the remaining components in
    row-major order.
    """
    shape = SystemShape.of(shape)
    if not 1 <= k <= shape.n_parties:
        raise PartyOutOfRange(f"party {k} not in 1..{shape.n_parties}")
    a = np.asarray(amplitudes, dtype=complex).reshape(shape.dims)
    return np.moveaxis(a, k - 1, 0).reshape(shape.dims[k - 1], -1)


def unmatricize(mat, shape, k: int) -> np.ndarray:
    """Inverse of :func:`matricize`; returns the flat amplitude vector."""
    shape = SystemShape.of(shape)
    if not 1 <= k <= shape.n_parties:
        raise PartyOutOfRange(f"party {k} not in 1..{shape.n_parties}")
    rest = shape.dims[: k - 1] + shape.dims[k:]
    a = np.asarray(mat).reshape((shape.dims[k - 1],) + rest)
    return np.moveaxis(a, 0, k - 1).reshape(-1)


def numeric_rank(m, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rel_tol * s_max`` (0 for a zero matrix)."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def matricization_ranks(amplitudes, shape, rel_tol: float = DEFAULT_RANK_TOL) -> list[int]:
    shape = SystemShape.of(shape)
    return [numeric_rank(matricize(amplitudes, shape, k), rel_tol) for k in range(1, shape.n_parties + 1)]


def is_product(amplitudes, shape, rel_tol: float = DEFAULT_RANK_TOL) -> bool:
    """True if every mode-k matricization has numeric rank 1."""
    return all(r == 1 for r in matricization_ranks(amplitudes, shape, rel_tol))


def eigendecompose_rho(rho: DensityMatrix, rel_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Weighted eigenvectors ``sqrt(lambda_k) v_k`` of ``rho``.

    Returns an ``(r, D)`` array whose rows are the unnormalized states, ``r``
    being the number of eigenvalues above ``rel_tol * lambda_max``. Rows are in
    descending eigenvalue order.
    """
    if not isinstance(rho, DensityMatrix):
        raise NotDensityMatrix("expected a DensityMatrix")
    w, v = hermitian_eig(rho.matrix)
    r = int(np.sum(w > rel_tol * w[0])) if w[0] > 0 else 0
    return (v[:, :r] * np.sqrt(w[:r])).T.copy()


def partial_transpose(rho, shape, parties) -> np.ndarray:
    """Partial transpose over the given (1-based) parties.

    ``parties`` must be a nonempty proper subset of ``{1, ..., N}``.
    """
    shape = SystemShape.of(shape)
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    parties = sorted(set(int(p) for p in parties))
    n = shape.n_parties
    if not parties or len(parties) >= n or parties[0] < 1 or parties[-1] > n:
        raise InvalidPartition(f"parties {parties} must be a nonempty proper subset of 1..{n}")
    t = m.reshape(shape.dims + shape.dims)
    axes = list(range(2 * n))
    for p in parties:
        axes[p - 1], axes[n + p - 1] = axes[n + p - 1], axes[p - 1]
    return t.transpose(axes).reshape(shape.dim, shape.dim)


def product_state(*factors) -> np.ndarray:
    """Kronecker product of single-party vectors."""
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def basis_state(shape, multi) -> np.ndarray:
    shape = SystemShape.of(shape)
    v = np.zeros(shape.dim, dtype=complex)
    v[shape.flat(multi)] = 1
    return v


def dicke_state(n: int, k: int) -> PureState:
    """Normalized equal superposition of all ``n``-qubit basis states with
    exactly ``k`` ones."""
    if n < 2:
        raise BadExcitationNumber("need at least two qubits")
    if not 0 <= k <= n:
        raise BadExcitationNumber(f"excitation number {k} not in 0..{n}")
    shape = SystemShape((2,) * n)
    amp = np.zeros(shape.dim, dtype=complex)
    for ones in itertools.combinations(range(n), k):
        bits = [0] * n
        for o in ones:
            bits[o] = 1
        amp[shape.flat(bits)] = 1
    return PureState.normalized(shape, amp)


def dicke_superposition(n: int, k: int, kp: int) -> PureState:
    """``(|D_n^(k)> + |D_n^(k')>) / sqrt(2)`` with ``k < k'``."""
    if not 0 <= k < kp <= n:
        raise BadExcitationNumber(f"need 0 <= k < k' <= n, got k={k}, k'={kp}, n={n}")
    amp = (dicke_state(n, k).amplitudes + dicke_state(n, kp).amplitudes) / np.sqrt(2)
    return PureState(SystemShape((2,) * n), amp)


# -- random states ------------------------------------------------------------

def random_pure(shape, seed=None) -> np.ndarray:
    shape = SystemShape.of(shape)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(shape.dim) + 1j * rng.standard_normal(shape.dim)
    return v / np.linalg.norm(v)


def random_product(shape, seed=None) -> np.ndarray:
    shape = SystemShape.of(shape)
    rng = np.random.default_rng(seed)
    factors = []
    for m in shape.dims:
        f = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        factors.append(f / np.linalg.norm(f))
    return product_state(*factors)


def random_density_matrix(shape, rank: int | None = None, seed=None) -> DensityMatrix:
    """Ginibre-induced random state of the given rank (full rank by default)."""
    shape = SystemShape.of(shape)
    rng = np.random.default_rng(seed)
    rank = shape.dim if rank is None else rank
    g = rng.standard_normal((shape.dim, rank)) + 1j * rng.standard_normal((shape.dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(shape, m / np.trace(m).real)


def random_separable(shape, n_terms: int, seed=None) -> tuple[DensityMatrix, np.ndarray, np.ndarray]:
    """Convex mixture of ``n_terms`` random product states.

    Returns the density matrix together with the weights and the product
    states used to build it.
    """
    shape = SystemShape.of(shape)
    rng = np.random.default_rng(seed)
    states = np.array([random_product(shape, rng) for _ in range(n_terms)])
    weights = rng.dirichlet(np.ones(n_terms))
    return DensityMatrix.from_states(shape, states, weights), weights, states


def ghz_state(n: int) -> PureState:
    shape = SystemShape((2,) * n)
    amp = np.zeros(shape.dim, dtype=complex)
    amp[0] = amp[-1] = 1
    return PureState.normalized(shape, amp)


def w_state(n: int) -> PureState:
    return dicke_state(n, 1)
