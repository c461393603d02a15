"""Generalized spin-flip operators ``S = |i><i'| - |j><j'| + h.c.``.

Two families are produced:

* the *redundant* family, one operator per vanishing 2x2 minor of each mode-k
  matricization;
* the *minimal* family, one operator per independent equality. Equalities are
  grouped by the set ``Q`` of positions where ``i`` and ``i'`` differ, the
  values ``c`` shared outside ``Q`` and the unordered value pair at each
  position of ``Q``. Inside a group the reference couple carries the smaller
  value of every pair in ``i``; partners ``(j, j')`` are obtained by swapping
  the values at a nonempty subset ``T`` of all positions of ``Q`` except the
  largest one.

Catalog order for the minimal family is: ``|Q|`` ascending, ``Q``
lexicographic, then ``c`` lexicographic, then the value pairs lexicographic,
then ``T`` read as a binary counter (bit ``t`` set when the ``t``-th smallest
position of ``Q`` is swapped).

Operators are stored as flat basis indices ``(i, i', j, j')``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DimensionMismatch, OverflowGuard
from .states import SystemShape

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class SpinFlipOperator:
    shape: SystemShape
    i: int
    ip: int
    j: int
    jp: int

    def __post_init__(self):
        d = self.shape.dim
        if not all(0 <= x < d for x in (self.i, self.ip, self.j, self.jp)):
            raise DimensionMismatch(f"indices {self.indices} out of range for dimension {d}")

    @property
    def indices(self) -> tuple[int, int, int, int]:
        return (self.i, self.ip, self.j, self.jp)

    @property
    def multi_indices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.shape.multi(x) for x in self.indices)

    def dense(self) -> np.ndarray:
        d = self.shape.dim
        s = np.zeros((d, d))
        s[self.i, self.ip] += 1
        s[self.ip, self.i] += 1
        s[self.j, self.jp] -= 1
        s[self.jp, self.j] -= 1
        return s

    def apply(self, v) -> np.ndarray:
        """``S @ v`` touching only four coordinates. ``v`` may be batched along
        leading axes."""
        v = np.asarray(v, dtype=complex)
        if v.shape[-1] != self.shape.dim:
            raise DimensionMismatch(f"vector length {v.shape[-1]} != {self.shape.dim}")
        out = np.zeros_like(v)
        out[..., self.i] += v[..., self.ip]
        out[..., self.ip] += v[..., self.i]
        out[..., self.j] -= v[..., self.jp]
        out[..., self.jp] -= v[..., self.j]
        return out

    def describe(self) -> str:
        lab = self.shape.label
        return f"{lab(self.i)}<{lab(self.ip)[1:-1]}| - {lab(self.j)}<{lab(self.jp)[1:-1]}| + h.c."


def apply(op: SpinFlipOperator, v) -> np.ndarray:
    return op.apply(v)


@dataclass(frozen=True)
class OperatorCatalog:
    """Ordered operator list. ``quads[a]`` holds the flat indices
    ``(i, i', j, j')`` of operator ``a`` (0-based; printed as ``a + 1``)."""

    shape: SystemShape
    quads: np.ndarray
    family: str = "minimal"

    def __len__(self):
        return len(self.quads)

    def __getitem__(self, a) -> SpinFlipOperator:
        i, ip, j, jp = (int(x) for x in self.quads[a])
        return SpinFlipOperator(self.shape, i, ip, j, jp)

    def __iter__(self):
        for a in range(len(self)):
            yield self[a]

    def index_sets(self) -> set[tuple[int, int, int, int]]:
        return {tuple(int(x) for x in q) for q in self.quads}


def _binom2(m: int) -> int:
    return m * (m - 1) // 2


def count_minimal(shape) -> int:
    """Number of independent concurrences, summed over position subsets."""
    dims = SystemShape.of(shape).dims
    n = len(dims)
    total = 0
    for q in range(2, n + 1):
        for sub in itertools.combinations(range(n), q):
            inside = math.prod(_binom2(dims[k]) for k in sub)
            outside = math.prod(dims[k] for k in range(n) if k not in sub)
            total += (2 ** (q - 1) - 1) * inside * outside
    return total


def count_minimal_qudit(d: int, n: int) -> int:
    """Closed form of :func:`count_minimal` for ``n`` parties of dimension ``d``:
    ``d^N (d^N + 1)/2 - d^N ((d+1)/2)^N``."""
    val = Fraction(d**n) * (Fraction(d**n, 2) - Fraction(d + 1, 2) ** n + Fraction(1, 2))
    assert val.denominator == 1
    return int(val)


def qubit_count_formula(d: int, n: int) -> Fraction:
    """``d^(N+1) (d-1)/4 * (1 - 2(1+1/d)^N + (1+2/d)^N)``.

    Agrees with :func:`count_minimal_qudit` for qubits only; for ``d >= 3`` it
    undercounts (e.g. 3 instead of 9 for two qutrits).
    """
    d = Fraction(d)
    return d ** (n + 1) * (d - 1) / 4 * (1 - 2 * (1 + 1 / d) ** n + (1 + 2 / d) ** n)


def count_redundant(shape) -> int:
    dims = SystemShape.of(shape).dims
    dim = math.prod(dims)
    return sum(_binom2(m) * _binom2(dim // m) for m in dims)


def count_redundant_qudit(d: int, n: int) -> int:
    return n * d**n * (d ** (n - 1) - 1) * (d - 1) // 4


def generate_minimal(shape, cap: int = DEFAULT_CAP) -> OperatorCatalog:
    shape = SystemShape.of(shape)
    total = count_minimal(shape)
    if total > cap:
        raise OverflowGuard(f"{total} operators exceed the cap of {cap}")
    dims, strides, n = shape.dims, np.array(shape.strides), shape.n_parties
    blocks = []
    for q in range(2, n + 1):
        n_masks = 2 ** (q - 1) - 1
        # T masks over the first q-1 positions of Q; the last position is never swapped
        bits = ((np.arange(1, n_masks + 1)[:, None] >> np.arange(q)) & 1)
        bits[:, q - 1] = 0
        for sub in itertools.combinations(range(n), q):
            sub = list(sub)
            rest = [k for k in range(n) if k not in sub]
            c_vals = np.array(list(itertools.product(*(range(dims[k]) for k in rest))), dtype=np.int64)
            c_off = c_vals.reshape(len(c_vals), -1) @ strides[rest] if rest else np.zeros(1, np.int64)
            pair_lists = [list(itertools.combinations(range(dims[k]), 2)) for k in sub]
            pairs = np.array(list(itertools.product(*pair_lists)), dtype=np.int64)  # (np, q, 2)
            a, b = pairs[..., 0], pairs[..., 1]
            s_q = strides[sub]
            i_off = a @ s_q
            ip_off = b @ s_q
            swing = ((b - a) * s_q) @ bits.T  # (np, nT)
            shape3 = (len(c_off), len(pairs), n_masks)
            ci = c_off[:, None, None]
            qi = np.broadcast_to(ci + i_off[None, :, None], shape3)
            qip = np.broadcast_to(ci + ip_off[None, :, None], shape3)
            qj = ci + (i_off[:, None] + swing)[None]
            qjp = ci + (ip_off[:, None] - swing)[None]
            blocks.append(np.stack([qi, qip, qj, qjp], axis=-1).reshape(-1, 4))
    quads = np.concatenate(blocks) if blocks else np.zeros((0, 4), np.int64)
    return OperatorCatalog(shape, quads, "minimal")


def generate_redundant(shape, cap: int = DEFAULT_CAP) -> OperatorCatalog:
    """One operator per ``(k, i, i')`` with ``i'_k > i_k`` and the remaining
    components of ``i'`` lexicographically greater than those of ``i``."""
    shape = SystemShape.of(shape)
    total = count_redundant(shape)
    if total > cap:
        raise OverflowGuard(f"{total} operators exceed the cap of {cap}")
    dims, strides, n = shape.dims, np.array(shape.strides), shape.n_parties
    blocks = []
    for k in range(n):
        rest = [l for l in range(n) if l != k]
        rest_dims = [dims[l] for l in rest]
        rest_multi = np.indices(rest_dims).reshape(len(rest), -1).T
        off = rest_multi @ strides[rest]
        x, y = np.triu_indices(len(off), 1)
        for a, b in itertools.combinations(range(dims[k]), 2):
            sa, sb = a * strides[k], b * strides[k]
            blocks.append(np.stack([sa + off[x], sb + off[y], sb + off[x], sa + off[y]], axis=1))
    quads = np.concatenate(blocks) if blocks else np.zeros((0, 4), np.int64)
    return OperatorCatalog(shape, quads, "redundant")
