"""Named example states shipped with the package."""

from __future__ import annotations

from importlib import resources

import numpy as np

from . import fileio
from .states import DensityMatrix, PureState, SystemShape, dicke_superposition, ghz_state, random_product

RANK5_NUMERATORS = np.array([
    [1, -1, 0, 0, -1, 1, 0, 0],
    [-1, 3, 0, 0, 1, -3, 0, 0],
    [0, 0, 6, 0, 0, 0, -2, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 1, 0, 0, 3, 1, 0, 0],
    [1, -3, 0, 0, 1, 5, 0, 0],
    [0, 0, -2, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
])

# Rows of the hollowising unitary for the rank-5 example, scaled by sqrt(6);
# entries are (coefficient, radicand) pairs.
_RANK5_U = [
    [(-1, 3), (0, 1), (0, 1), (0, 1), (1, 3)],
    [(1, 2), (0, 1), (-1, 2), (0, 1), (1, 2)],
    [(1, 1), (0, 1), (2, 1), (0, 1), (1, 1)],
    [(0, 1), (-1, 3), (0, 1), (-1, 3), (0, 1)],
    [(0, 1), (-1, 3), (0, 1), (1, 3), (0, 1)],
]


def rank5_rho() -> DensityMatrix:
    """Rank-5 separable three-qubit state, ``numerators / 20``."""
    return DensityMatrix(SystemShape((2, 2, 2)), RANK5_NUMERATORS / 20)


def rank5_unitary() -> np.ndarray:
    return np.array([[c * np.sqrt(r) for c, r in row] for row in _RANK5_U]) / np.sqrt(6)


def rank5_product_states() -> np.ndarray:
    """The five product states ``|-01>, |-0->, |10+>, |-10>, |010>`` (rows)."""
    zero, one = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    plus, minus = (zero + one) / np.sqrt(2), (zero - one) / np.sqrt(2)
    k = lambda a, b, c: np.kron(np.kron(a, b), c)
    return np.array([
        k(minus, zero, one),
        k(minus, zero, minus),
        k(one, zero, plus),
        k(minus, one, zero),
        k(zero, one, zero),
    ], dtype=complex)


def dicke_npt_rho() -> DensityMatrix:
    """Equal mixture of the superpositions (D0+D2), (D1+D2), (D1+D3) of 3-qubit
    Dicke states: NPT although every generalized concurrence vanishes."""
    states = [dicke_superposition(3, k, kp).amplitudes for k, kp in [(0, 2), (1, 2), (1, 3)]]
    return DensityMatrix.from_states(SystemShape((2, 2, 2)), states)


def bell_state() -> PureState:
    return PureState.normalized((2, 2), [1, 0, 0, 1])


def product_example(seed: int = 0) -> PureState:
    return PureState.normalized((2, 2, 2), random_product((2, 2, 2), seed))


def rank2_product_mixture(seed: int = 0) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    a, b = random_product((2, 2, 2), rng), random_product((2, 2, 2), rng)
    return DensityMatrix.from_states(SystemShape((2, 2, 2)), [a, b], [0.6, 0.4])


BUILDERS = {
    "rank5": (rank5_rho, "rank-5 separable 3-qubit mixed state (entries k/20)"),
    "dicke-npt": (dicke_npt_rho, "NPT 3-qubit Dicke mixture with vanishing concurrences"),
    "ghz": (lambda: ghz_state(3), "3-qubit GHZ state (|000> + |111>)/sqrt(2)"),
    "bell": (bell_state, "Bell state (|00> + |11>)/sqrt(2)"),
    "product": (product_example, "random 3-qubit product state, seed 0"),
    "rank2-product": (rank2_product_mixture, "rank-2 mixture of two random 3-qubit product states, seed 0"),
}

NAMES = tuple(BUILDERS)


def build(name: str) -> fileio.StateDocument:
    """Document for a named example, computed from scratch."""
    try:
        fn, desc = BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}") from None
    return fileio.document_for(fn(), name, desc)


def bundled_text(name: str) -> str:
    """Text of the shipped example file."""
    if name not in BUILDERS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    return resources.files("hollowsep").joinpath("data", f"{name}.json").read_text()


def load(name: str) -> fileio.StateDocument:
    return fileio.parse(bundled_text(name))
