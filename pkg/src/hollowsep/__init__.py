"""Multipartite separability through generalized concurrences and
simultaneous hollowisation of preconcurrence matrices."""

from .concurrence import (
    Hollowisability,
    PreconcurrenceMatrix,
    is_hollowisable,
    mixed_concurrence,
    mixed_concurrences,
    preconcurrence,
    preconcurrence_matrices,
    pure_concurrence,
    pure_concurrences,
    pure_separability,
    wootters_concurrence,
)
from .hollowizer import (
    HollowisationOptions,
    HollowisationProblem,
    HollowisationResult,
    hollowise_simultaneous,
    hollowise_single,
    p_sweep,
    parametrize_unitary,
)
from .operators import OperatorCatalog, SpinFlipOperator, count_minimal, generate_minimal, generate_redundant
from .separability import ClassifyOptions, SeparabilityVerdict, classify, classify_rank2, ppt_scan
from .states import DensityMatrix, PureState, SystemShape, eigendecompose_rho, matricize, partial_transpose

__version__ = "0.1.0"
