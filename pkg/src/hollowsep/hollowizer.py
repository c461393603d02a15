"""Numerical search for unitary congruences that make symmetric matrices hollow.

Given symmetric ``p x p`` matrices ``M_a`` we look for one unitary ``U`` such
that every ``U M_a U^T`` has a zero diagonal. The residuals
``d_{a,k} = (U M_a U^T)_{kk}`` are driven to zero with a Levenberg-Marquardt
iteration on the unitary group: at each step the matrices are re-centred at
the current ``U`` so the linearisation is always taken at the identity of the
chart ``U <- exp(A) U`` with ``A`` skew-Hermitian. Random Haar restarts handle
the non-convexity.

For a single matrix the Thompson inequality decides existence exactly, so
failures there come with a certificate. For several matrices, ``not_found``
only means the search failed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm_frechet

from .concurrence import PreconcurrenceMatrix, extend, hollowisable_at_size, thompson_gap
from .linalg import random_unitary, singular_values

log = logging.getLogger(__name__)

FOUND = "found"
NOT_FOUND = "not_found"


# -- chart on the unitary group -------------------------------------------------

def skew_hermitian(theta) -> np.ndarray:
    """Skew-Hermitian ``A(theta)`` from ``p^2`` real parameters.

    Layout: ``p`` diagonal phases (``A_kk = i theta_k``), then for each pair
    ``k < l`` in row-major order the real parts (``A_kl = x``, ``A_lk = -x``),
    then the imaginary parts (``A_kl = A_lk = i y``).
    """
    theta = np.asarray(theta, dtype=float)
    p = int(round(np.sqrt(theta.size)))
    if p * p != theta.size:
        raise ValueError(f"theta has {theta.size} entries, not a perfect square")
    ku, lu = np.triu_indices(p, 1)
    npair = len(ku)
    a = np.zeros((p, p), dtype=complex)
    a[np.arange(p), np.arange(p)] = 1j * theta[:p]
    x = theta[p : p + npair]
    y = theta[p + npair :]
    a[ku, lu] = x + 1j * y
    a[lu, ku] = -x + 1j * y
    return a


def _expm_skew(a: np.ndarray) -> np.ndarray:
    # exp of a skew-Hermitian matrix through the Hermitian eigenproblem of iA;
    # unitary to machine precision
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(-1j * w)) @ v.conj().T


def parametrize_unitary(theta) -> np.ndarray:
    """``U = exp(A(theta))``; see :func:`skew_hermitian` for the layout."""
    return _expm_skew(skew_hermitian(theta))


def _as_stack(matrices) -> np.ndarray:
    if isinstance(matrices, PreconcurrenceMatrix):
        return matrices.tau[None]
    mats = [m.tau if isinstance(m, PreconcurrenceMatrix) else np.asarray(m, dtype=complex) for m in matrices] \
        if not isinstance(matrices, np.ndarray) else matrices
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    return mats


def _weights(n: int, weights) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,) or np.any(w <= 0):
        raise ValueError("weights must be positive, one per matrix")
    return w


def diagonals(u, matrices) -> np.ndarray:
    """Diagonals of ``U M_a U^T``, shape ``(n, p)``."""
    mats = _as_stack(matrices)
    x = u @ mats @ u.T
    return np.diagonal(x, axis1=1, axis2=2)


def hollow_objective(theta, matrices, weights=None) -> float:
    """``f = sum_a w_a sum_k |(U M_a U^T)_kk|^2`` with ``U = exp(A(theta))``."""
    mats = _as_stack(matrices)
    w = _weights(len(mats), weights)
    d = diagonals(parametrize_unitary(theta), mats)
    return float(np.sum(w[:, None] * np.abs(d) ** 2))


def hollow_objective_grad(theta, matrices, weights=None) -> tuple[float, np.ndarray]:
    """Objective and its exact gradient with respect to ``theta``.

    With ``X = E M E^T`` and ``E = exp(A)``, ``df = 4 Re sum dE_kj (D^* E M)_kj``
    where ``D = diag(X)``. The Euclidean gradient in ``E`` is pulled back to
    ``A`` with the adjoint Frechet derivative ``L(A^H, .)`` of the exponential.
    """
    theta = np.asarray(theta, dtype=float)
    mats = _as_stack(matrices)
    w = _weights(len(mats), weights)
    a = skew_hermitian(theta)
    e = _expm_skew(a)
    p = a.shape[0]
    f = 0.0
    g_e = np.zeros((p, p), dtype=complex)
    for wa, m in zip(w, mats):
        x = e @ m @ e.T
        d = np.diag(x)
        f += wa * float(np.sum(np.abs(d) ** 2))
        b = d.conj()[:, None] * (e @ m)
        g_e += 4 * wa * b.conj()
    _, g_a = expm_frechet(a.conj().T, g_e)
    ku, lu = np.triu_indices(p, 1)
    grad = np.concatenate([
        np.diag(g_a).imag,
        (g_a[ku, lu] - g_a[lu, ku]).real,
        (g_a[ku, lu] + g_a[lu, ku]).imag,
    ])
    return f, grad


def _jacobian_at_identity(x: np.ndarray) -> np.ndarray:
    """Complex Jacobian of the diagonals of ``exp(A) X exp(A)^T`` at ``A = 0``.

    Rows are ``(a, k)`` flattened, columns follow :func:`skew_hermitian`.
    """
    n, p, _ = x.shape
    ku, lu = np.triu_indices(p, 1)
    npair = len(ku)
    jac = np.zeros((n, p, p * p), dtype=complex)
    idx = np.arange(p)
    jac[:, idx, idx] = 2j * x[:, idx, idx]
    cols = np.arange(npair)
    x_lk = x[:, lu, ku]
    x_kl = x[:, ku, lu]
    jac[:, ku, p + cols] = 2 * x_lk
    jac[:, lu, p + cols] = -2 * x_kl
    jac[:, ku, p + npair + cols] = 2j * x_lk
    jac[:, lu, p + npair + cols] = 2j * x_kl
    return jac.reshape(n * p, p * p)


# -- problem / result types -------------------------------------------------------

@dataclass
class HollowisationProblem:
    matrices: np.ndarray  # (n, p, p) symmetric
    weights: np.ndarray | None = None
    tolerance: float = 1e-9
    max_iters: int = 300
    restarts: int = 32
    seed: int = 0
    scale_floor: float = 0.0

    def __post_init__(self):
        self.matrices = _as_stack(self.matrices)
        if self.matrices.shape[-1] != self.matrices.shape[-2]:
            raise ValueError("matrices must be square")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        asym = np.max(np.abs(self.matrices - np.swapaxes(self.matrices, 1, 2))) if self.matrices.size else 0.0
        scale = max(1.0, float(np.max(np.abs(self.matrices)))) if self.matrices.size else 1.0
        if asym > 1e-10 * scale:
            raise ValueError(f"matrices are not symmetric (max deviation {asym:.2e})")
        self.weights = _weights(len(self.matrices), self.weights)

    @property
    def size(self) -> int:
        return self.matrices.shape[-1]


@dataclass
class HollowisationResult:
    status: str
    U: np.ndarray | None
    residual: float
    iterations_used: int = 0
    restarts_used: int = 0
    p: int = 0
    gap: float | None = None  # Thompson gap certificate (single-matrix failures)
    per_matrix: np.ndarray | None = None  # max |diag| per matrix for the best U
    message: str = ""

    @property
    def found(self) -> bool:
        return self.status == FOUND


@dataclass
class HollowisationOptions:
    tolerance: float = 1e-9
    max_iters: int = 300
    restarts: int = 32
    seed: int = 0
    weights: Sequence[float] | None = None
    # thresholds are tolerance * max(s_max, scale_floor); a floor of 1 makes
    # them absolute for trace-normalized data
    scale_floor: float = 0.0


# -- solver -----------------------------------------------------------------------

def _lm_descent(mats, w, u0, target, max_iters):
    """Levenberg-Marquardt on the unitary group from ``u0``.

    Stops when the max diagonal modulus falls below ``target`` or progress
    stalls. Returns ``(U, residual, iterations)``.
    """
    sw = np.sqrt(w)[:, None]
    u = u0
    x = u @ mats @ u.T
    d = np.diagonal(x, axis1=1, axis2=2)
    f = float(np.sum(w[:, None] * np.abs(d) ** 2))
    mu = None
    it = 0
    stall = 0
    while it < max_iters:
        res = float(np.max(np.abs(d)))
        if res <= target:
            break
        it += 1
        jc = _jacobian_at_identity(x) * np.repeat(sw, x.shape[1], axis=0).reshape(-1, 1)
        rc = (sw * d).reshape(-1)
        jac = np.concatenate([jc.real, jc.imag])
        r = np.concatenate([rc.real, rc.imag])
        nrow, ncol = jac.shape
        if nrow >= ncol:
            jtj = jac.T @ jac
            jtr = jac.T @ r
        else:
            jjt = jac @ jac.T
        if mu is None:
            diag_scale = np.max(np.diag(jtj)) if nrow >= ncol else np.max(np.diag(jjt))
            mu = 1e-3 * max(diag_scale, 1e-300)
        accepted = False
        for _ in range(30):
            if nrow >= ncol:
                step = -np.linalg.solve(jtj + mu * np.eye(ncol), jtr)
            else:
                step = -jac.T @ np.linalg.solve(jjt + mu * np.eye(nrow), r)
            u_new = _expm_skew(skew_hermitian(step)) @ u
            x_new = u_new @ mats @ u_new.T
            d_new = np.diagonal(x_new, axis1=1, axis2=2)
            f_new = float(np.sum(w[:, None] * np.abs(d_new) ** 2))
            if f_new < f:
                accepted = True
                improvement = (f - f_new) / f
                u, x, d, f = u_new, x_new, d_new, f_new
                mu = max(mu / 3, 1e-15 * max(np.max(np.abs(jac)) ** 2, 1e-300))
                break
            mu *= 4
        if not accepted:
            break
        # slow linear crawl towards a nonzero local minimum
        stall = stall + 1 if improvement < 1e-6 else 0
        if stall >= 25:
            break
    # drift-free re-orthonormalisation
    q, rr = np.linalg.qr(u)
    u = q * (np.diag(rr) / np.abs(np.diag(rr)))
    d = np.diagonal(u @ mats @ u.T, axis1=1, axis2=2)
    return u, float(np.max(np.abs(d))) if d.size else 0.0, it


def _scale(mats: np.ndarray) -> float:
    if mats.size == 0:
        return 0.0
    return float(np.max(singular_values(mats)[:, 0]))


def hollowise_simultaneous(
    problem: HollowisationProblem,
    accept: Callable[[np.ndarray], bool] | None = None,
) -> HollowisationResult:
    """Search one unitary hollowising every matrix of ``problem``.

    A candidate counts as found when the largest diagonal modulus over all
    matrices is at most ``tolerance * max(s_max, scale_floor)`` (``s_max`` the
    largest singular value over all matrices) and, if given, ``accept(U)`` returns True.
    Restarts run in index order; restart 0 starts from the identity, restart
    ``k`` from a Haar unitary seeded with ``(seed, k)``. The first accepted
    restart wins.
    """
    mats = problem.matrices
    p = problem.size
    scale = _scale(mats)
    thr = problem.tolerance * max(scale, problem.scale_floor)
    eye = np.eye(p, dtype=complex)
    if scale <= thr:
        ok = accept is None or accept(eye)
        return HollowisationResult(FOUND if ok else NOT_FOUND, eye, 0.0, p=p, per_matrix=np.zeros(len(mats)),
                                   message="all matrices vanish")

    s = singular_values(mats)
    bad = [a for a in range(len(mats)) if not hollowisable_at_size(s[a], p, thr)]
    if bad:
        gaps = thompson_gap(np.concatenate([s, np.zeros((len(s), max(0, p - s.shape[1])))], axis=1))
        return HollowisationResult(
            NOT_FOUND, None, float("inf"), p=p,
            gap=float(np.max(gaps[bad])),
            message=f"{len(bad)} matrices fail the size-{p} Thompson condition: {bad[:10]}",
        )

    # matrices whose norm is already below the threshold are hollow for every U
    keep = s[:, 0] > thr
    active = mats[keep]
    w = problem.weights[keep]
    target = min(thr * 1e-3, thr)
    target = max(target, 1e-15 * scale)

    best = None
    total_iters = 0
    for k in range(max(1, problem.restarts)):
        u0 = eye if k == 0 else random_unitary(p, np.random.default_rng([problem.seed, k]))
        u, res, it = _lm_descent(active, w, u0, target, problem.max_iters)
        total_iters += it
        if best is None or res < best[1]:
            best = (u, res, k)
        if res <= thr and (accept is None or accept(u)):
            per = np.max(np.abs(diagonals(u, mats)), axis=1)
            return HollowisationResult(FOUND, u, res, total_iters, k + 1, p, per_matrix=per)
        log.debug("restart %d: residual %.3e after %d iterations", k, res, it)

    u = best[0]
    per = np.max(np.abs(diagonals(u, mats)), axis=1)
    msg = "search exhausted"
    if best[1] <= thr:
        msg = "residual below tolerance but candidate rejected by verification"
    return HollowisationResult(NOT_FOUND, u, best[1], total_iters, max(1, problem.restarts), p,
                               per_matrix=per, message=msg)


def hollowise_single(tau, opts: HollowisationOptions | None = None) -> HollowisationResult:
    """Hollowise one symmetric matrix, zero-extending 3x3 to 4x4 when needed.

    Fails with the positive Thompson gap as certificate when
    ``s_1 > sum_{k>=2} s_k``.
    """
    opts = opts or HollowisationOptions()
    t = tau.tau if isinstance(tau, PreconcurrenceMatrix) else np.asarray(tau, dtype=complex)
    s = singular_values(t)
    scale = float(s[0]) if s.size else 0.0
    thr = opts.tolerance * max(scale, opts.scale_floor)
    gap = float(thompson_gap(s))
    p = t.shape[0]
    if gap > thr:
        return HollowisationResult(NOT_FOUND, None, float("inf"), p=p, gap=gap,
                                   message="Thompson condition violated")
    if p == 3 and gap < -thr:
        t = extend(t, 4)
    problem = HollowisationProblem(t, None if opts.weights is None else opts.weights[:1], opts.tolerance,
                                   opts.max_iters, opts.restarts, opts.seed, opts.scale_floor)
    res = hollowise_simultaneous(problem)
    res.gap = gap
    return res


@dataclass
class SweepResult:
    p: int | None
    result: HollowisationResult | None
    tried: list[tuple[int, str, float]] = field(default_factory=list)  # (p, status, residual)

    @property
    def found(self) -> bool:
        return self.p is not None


def p_sweep(
    taus,
    r: int | None = None,
    p_max: int | None = None,
    opts: HollowisationOptions | None = None,
    accept: Callable[[np.ndarray, int], bool] | None = None,
) -> SweepResult:
    """Try ``p = r, r+1, ..., p_max`` (default ``r^2``) with zero-extended
    matrices and return the first success."""
    opts = opts or HollowisationOptions()
    mats = _as_stack(taus)
    r = mats.shape[-1] if r is None else r
    if r < 1:
        raise ValueError("r must be >= 1")
    p_max = r * r if p_max is None else p_max
    out = SweepResult(None, None)
    for p in range(r, p_max + 1):
        problem = HollowisationProblem(extend(mats, p), opts.weights, opts.tolerance, opts.max_iters,
                                       opts.restarts, opts.seed, opts.scale_floor)
        acc = None if accept is None else (lambda u, p=p: accept(u, p))
        res = hollowise_simultaneous(problem, acc)
        out.tried.append((p, res.status, res.residual))
        log.info("p=%d: %s (residual %.3e)", p, res.status, res.residual)
        if res.found:
            out.p, out.result = p, res
            return out
        out.result = res
    return out
