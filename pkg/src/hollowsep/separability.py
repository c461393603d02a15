"""Mixed-state separability classification.

Pipeline of :func:`classify`:

1. any convex-roof concurrence above ``tol`` -> entangled;
2. rank 2 -> closed-form test of :func:`classify_rank2`;
3. a negative partial transpose -> entangled (skipped with ``skip_ppt``);
4. search for a common hollowising unitary of the zero-extended
   preconcurrence matrices for ``p = r, ..., p_max``; a hit yields a
   decomposition that is checked independently before being reported;
5. otherwise undecided.

``separable`` is only returned with a decomposition that reconstructs ``rho``
and whose members are product states. ``undecided`` is not evidence of
entanglement.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .concurrence import DEFAULT_MIXED_TOL, mixed_concurrence_report, pure_concurrences
from .exceptions import NotUnitary, ShapeMismatch, WrongRank
from .hollowizer import HollowisationOptions, hollowise_single, p_sweep
from .linalg import is_unitary
from .operators import OperatorCatalog, generate_minimal
from .states import DEFAULT_RANK_TOL, DensityMatrix, SystemShape, is_product, partial_transpose

log = logging.getLogger(__name__)

SEPARABLE = "separable"
ENTANGLED = "entangled"
UNDECIDED = "undecided"

DROP_NORM = 1e-12


@dataclass
class ClassifyOptions:
    tol: float = DEFAULT_MIXED_TOL
    rank_tol: float = DEFAULT_RANK_TOL
    verify_tol: float = 1e-8
    proportional_tol: float = 1e-8
    p_max: int | None = None
    restarts: int = 32
    max_iters: int = 300
    seed: int = 0
    skip_ppt: bool = False
    weights: list[float] | None = None

    def hollowisation(self) -> HollowisationOptions:
        return HollowisationOptions(self.tol, self.max_iters, self.restarts, self.seed, self.weights, 1.0)


@dataclass
class Decomposition:
    """``rho = sum_k weights[k] |states[k]><states[k]|`` with normalized rows."""

    shape: SystemShape
    weights: np.ndarray
    states: np.ndarray
    dropped: int = 0

    def __len__(self):
        return len(self.weights)

    def unnormalized(self) -> np.ndarray:
        return self.states * np.sqrt(self.weights)[:, None]

    def reconstruct(self) -> np.ndarray:
        v = self.unnormalized()
        return v.T @ v.conj()


@dataclass
class VerificationReport:
    reconstruction_error: float
    max_state_concurrence: float
    product_flags: list[bool]
    ok: bool


def verify_decomposition(
    decomp: Decomposition,
    rho: DensityMatrix,
    catalog: OperatorCatalog | None = None,
    tol: float = 1e-8,
) -> VerificationReport:
    """Check reconstruction (Frobenius, ``tol``) and that each member has all
    matricizations of numeric rank 1 and all concurrences below ``tol``."""
    catalog = catalog if catalog is not None else generate_minimal(decomp.shape)
    err = float(np.linalg.norm(decomp.reconstruct() - rho.matrix))
    flags = [is_product(s, decomp.shape, rel_tol=tol) for s in decomp.states]
    conc = max((float(pure_concurrences(s, catalog).max(initial=0.0)) for s in decomp.states), default=0.0)
    return VerificationReport(err, conc, flags, err <= tol and all(flags) and conc <= tol)


def extract_decomposition(u, eigstates, shape=None) -> Decomposition:
    """States ``(psi_1, ..., psi_p)^T = U^* (v_1, ..., v_p)^T`` with the weighted
    eigenvectors zero-padded to ``p`` rows.

    Members with norm below ``1e-12`` are dropped (and counted).
    """
    u = np.asarray(u, dtype=complex)
    v = np.atleast_2d(np.asarray(eigstates, dtype=complex))
    if not is_unitary(u):
        raise NotUnitary("U is not unitary within 1e-10")
    p, r = u.shape[0], v.shape[0]
    if p < r:
        raise ValueError(f"U is {p}x{p} but there are {r} eigenstates")
    vext = np.vstack([v, np.zeros((p - r, v.shape[1]), dtype=complex)])
    psi = u.conj() @ vext
    norms = np.linalg.norm(psi, axis=1)
    keep = norms > DROP_NORM
    shape = SystemShape.of(shape) if shape is not None else None
    return Decomposition(shape, norms[keep] ** 2, psi[keep] / norms[keep, None], int(np.sum(~keep)))


def ppt_scan(rho: DensityMatrix, tol: float = DEFAULT_MIXED_TOL) -> list[tuple[tuple[int, ...], float]]:
    """Minimum partial-transpose eigenvalue for each bipartition.

    Bipartitions are taken up to complement by transposing nonempty subsets
    of parties ``2..N``; ``tol`` is not used to filter, only documented for
    the caller's NPT test ``min_eig < -tol``.
    """
    n = rho.shape.n_parties
    out = []
    for size in range(1, n):
        for parties in itertools.combinations(range(2, n + 1), size):
            pt = partial_transpose(rho, rho.shape, parties)
            out.append((parties, float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])))
    return out


@dataclass
class SeparabilityVerdict:
    status: str
    method: str
    rank: int
    decomposition: Decomposition | None = None
    verification: VerificationReport | None = None
    p: int | None = None
    concurrence_witness: tuple[int, float] | None = None  # (alpha 0-based, value)
    ppt_witness: tuple[tuple[int, ...], float] | None = None
    proportionality_witness: tuple[int, int, float] | None = None
    gaps: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def separable(self) -> bool:
        return self.status == SEPARABLE

    @property
    def entangled(self) -> bool:
        return self.status == ENTANGLED


def _check_inputs(rho: DensityMatrix, catalog: OperatorCatalog | None) -> OperatorCatalog:
    if catalog is None:
        return generate_minimal(rho.shape)
    if catalog.shape != rho.shape:
        raise ShapeMismatch(f"state shape {rho.shape} vs catalog shape {catalog.shape}")
    return catalog


def _proportionality(taus: np.ndarray, tol: float, zero_tol: float):
    """Largest deviation from proportionality to the largest-norm matrix.

    Returns ``(ref, worst_alpha, worst_residual)``; residuals are relative to
    the reference norm. Matrices below ``zero_tol`` are skipped.
    """
    norms = np.linalg.norm(taus, axis=(1, 2))
    ref = int(np.argmax(norms))
    if norms[ref] <= zero_tol:
        return ref, None, 0.0
    t_ref = taus[ref]
    nref2 = norms[ref] ** 2
    coef = np.einsum("ij,aij->a", t_ref.conj(), taus) / nref2
    resid = np.linalg.norm(taus - coef[:, None, None] * t_ref, axis=(1, 2)) / norms[ref]
    resid[norms <= zero_tol] = 0.0
    worst = int(np.argmax(resid))
    return ref, worst, float(resid[worst])


def classify_rank2(rho: DensityMatrix, catalog: OperatorCatalog | None = None,
                   opts: ClassifyOptions | None = None, report=None) -> SeparabilityVerdict:
    """Rank-2 criterion: separable iff every 2x2 preconcurrence matrix has
    equal singular values and all of them are proportional. Never undecided."""
    opts = opts or ClassifyOptions()
    catalog = _check_inputs(rho, catalog)
    report = report or mixed_concurrence_report(rho, catalog, opts.rank_tol)
    if report.rank != 2:
        raise WrongRank(f"rank-2 test on a state of rank {report.rank}")
    gaps = report.gaps
    worst = int(np.argmax(gaps))
    if gaps[worst] > opts.tol:
        return SeparabilityVerdict(ENTANGLED, "rank2-singular-values", 2,
                                   concurrence_witness=(worst, float(gaps[worst])), gaps=gaps)
    ref, a, resid = _proportionality(report.taus, opts.proportional_tol, opts.tol)
    if a is not None and resid > opts.proportional_tol:
        return SeparabilityVerdict(ENTANGLED, "rank2-proportionality", 2,
                                   proportionality_witness=(ref, a, resid), gaps=gaps)

    if a is None:
        u = np.eye(2, dtype=complex)
    else:
        res = hollowise_single(report.taus[ref], opts.hollowisation())
        u = res.U if res.found else np.eye(2, dtype=complex)
    decomp = extract_decomposition(u, report.eigstates, rho.shape)
    ver = verify_decomposition(decomp, rho, catalog, opts.verify_tol)
    diag = {} if ver.ok else {"warning": "decomposition failed independent verification"}
    return SeparabilityVerdict(SEPARABLE, "rank2", 2, decomp, ver, p=2, gaps=gaps, diagnostics=diag)


def classify(rho: DensityMatrix, catalog: OperatorCatalog | None = None,
             opts: ClassifyOptions | None = None) -> SeparabilityVerdict:
    opts = opts or ClassifyOptions()
    catalog = _check_inputs(rho, catalog)
    report = mixed_concurrence_report(rho, catalog, opts.rank_tol)
    r = report.rank
    gaps = report.gaps

    if len(gaps):
        worst = int(np.argmax(gaps))
        if gaps[worst] > opts.tol:
            return SeparabilityVerdict(ENTANGLED, "concurrence", r,
                                       concurrence_witness=(worst, float(gaps[worst])), gaps=gaps)

    if r == 2:
        return classify_rank2(rho, catalog, opts, report)

    diagnostics: dict = {}
    if not opts.skip_ppt:
        scan = ppt_scan(rho, opts.tol)
        parties, low = min(scan, key=lambda x: x[1])
        diagnostics["ppt_min_eigenvalue"] = low
        if low < -opts.tol:
            return SeparabilityVerdict(ENTANGLED, "ppt", r, ppt_witness=(parties, low), gaps=gaps,
                                       diagnostics=diagnostics)

    checked: dict = {}

    def accept(u, p):
        decomp = extract_decomposition(u, report.eigstates, rho.shape)
        ver = verify_decomposition(decomp, rho, catalog, opts.verify_tol)
        checked[p] = (decomp, ver)
        return ver.ok

    p_max = opts.p_max if opts.p_max is not None else r * r
    sweep = p_sweep(report.taus, r, max(p_max, r), opts.hollowisation(), accept)
    diagnostics["tried"] = sweep.tried
    if sweep.found:
        decomp, ver = checked[sweep.p]
        return SeparabilityVerdict(SEPARABLE, "hollowisation", r, decomp, ver, p=sweep.p, gaps=gaps,
                                   diagnostics=diagnostics)
    return SeparabilityVerdict(UNDECIDED, "hollowisation", r, gaps=gaps, diagnostics=diagnostics)
