"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line (visible even when
pytest captures output) before asserting.
"""

import time

import numpy as np
import pytest

from hollowsep.concurrence import (
    flip_spectrum,
    mixed_concurrence,
    mixed_concurrence_report,
    mixed_concurrences,
    preconcurrence_matrices,
    pure_concurrences,
    wootters_concurrence,
)
from hollowsep.hollowizer import HollowisationOptions, hollow_objective, hollow_objective_grad, hollowise_single
from hollowsep.linalg import random_unitary
from hollowsep.operators import count_minimal, count_redundant, generate_minimal, generate_redundant
from hollowsep.separability import ENTANGLED, SEPARABLE, ClassifyOptions, classify, classify_rank2, ppt_scan
from hollowsep.states import (
    DensityMatrix,
    SystemShape,
    ghz_state,
    is_product,
    matricization_ranks,
    random_density_matrix,
    random_product,
    random_pure,
    random_separable,
)
from hollowsep.bundled import dicke_npt_rho

from conftest import RANK5_NUMERATORS, RANK5_U, rank5_aligned_eigstates, rank5_reference_states

SHAPE3 = SystemShape((2, 2, 2))
QUBIT_MINIMAL = [1, 9, 55, 285, 1351, 6069, 26335, 111645, 465751]
QUBIT_REDUNDANT = [2, 18, 112, 600, 2976, 14112, 65024, 293760, 1308160]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_operator_counts(report):
    problems = []
    t10 = None
    for n in range(2, 11):
        shape = (2,) * n
        t0 = time.perf_counter()
        got = len(generate_minimal(shape))
        if n == 10:
            t10 = time.perf_counter() - t0
        if not got == count_minimal(shape) == QUBIT_MINIMAL[n - 2]:
            problems.append(f"minimal N={n}: {got}")
        red = len(generate_redundant(shape))
        if not red == count_redundant(shape) == QUBIT_REDUNDANT[n - 2]:
            problems.append(f"redundant N={n}: {red}")
    ok = not problems and t10 < 60
    report(1, ok, f"counts N=2..10 exact, N=10 minimal enumeration {t10:.2f}s; problems={problems}")


def test_criterion_02_three_qubit_catalog(report):
    listed = [
        ("000", "011", "010", "001"), ("100", "111", "110", "101"),
        ("000", "101", "100", "001"), ("010", "111", "110", "011"),
        ("000", "110", "100", "010"), ("001", "111", "101", "011"),
        ("000", "111", "100", "011"), ("000", "111", "010", "101"),
        ("000", "111", "110", "001"),
    ]
    expected = {tuple(int(x, 2) for x in row) for row in listed}
    cat = generate_minimal((2, 2, 2))
    ok = len(cat) == 9 and cat.index_sets() == expected
    report(2, ok, f"{len(cat)} operators, set equal to listing: {cat.index_sets() == expected}")


def test_criterion_03_wootters_equivalence(report):
    cat = generate_minimal((2, 2))
    op = cat[0]
    worst = 0.0
    for seed in range(1000):
        rng = np.random.default_rng([3, seed])
        rho = random_density_matrix((2, 2), int(rng.integers(1, 5)), rng)
        worst = max(worst, abs(wootters_concurrence(rho) - mixed_concurrence(rho, op)))
    report(3, worst <= 1e-9, f"max |Wootters - preconcurrence| over 1000 states = {worst:.2e}")


def test_criterion_04_rank5_example(report):
    t0 = time.perf_counter()
    cat = generate_minimal(SHAPE3)
    rho = DensityMatrix(SHAPE3, RANK5_NUMERATORS)
    rep = mixed_concurrence_report(rho, cat)
    rank_ok = rep.rank == 5
    conc = float(np.max(rep.concurrences))

    aligned, _ = rank5_aligned_eigstates(rep.eigstates)
    taus = preconcurrence_matrices(aligned, cat)
    tab_diag = float(np.max(np.abs(np.diagonal(RANK5_U @ taus @ RANK5_U.T, axis1=1, axis2=2))))

    v = classify(rho, cat)
    recon = np.linalg.norm(v.decomposition.reconstruct() - rho.matrix) if v.decomposition else np.inf
    products = v.decomposition is not None and all(is_product(s, SHAPE3, rel_tol=1e-8) for s in v.decomposition.states)

    ref = rank5_reference_states()
    ref_err = float(np.linalg.norm(ref.T @ ref.conj() / 5 - RANK5_NUMERATORS))
    elapsed = time.perf_counter() - t0
    ok = (rank_ok and conc <= 1e-10 and tab_diag <= 1e-10 and v.status == SEPARABLE and v.p == 5
          and recon <= 1e-8 and products and ref_err <= 1e-12 and elapsed < 30)
    report(4, ok, f"rank={rep.rank}, max C={conc:.1e}, tabulated U max|diag|={tab_diag:.1e}, "
                  f"verdict={v.status} p={v.p}, recon={recon:.1e}, products={products}, "
                  f"reference recon={ref_err:.1e}, {elapsed:.2f}s")


def test_criterion_05_dicke_npt(report):
    cat = generate_minimal(SHAPE3)
    rho = dicke_npt_rho()
    conc = float(np.max(mixed_concurrences(rho, cat)))
    low = min(x[1] for x in ppt_scan(rho))
    v = classify(rho, cat)
    ok = conc <= 1e-10 and low < -1e-6 and v.status == ENTANGLED
    report(5, ok, f"max C={conc:.1e}, min PT eigenvalue={low:.5f}, verdict={v.status} ({v.method})")


def test_criterion_06_rank2(report):
    cat = generate_minimal(SHAPE3)
    ghz = ghz_state(3).amplitudes
    sep_ok = ent_ok = undecided = 0
    for seed in range(100):
        rng = np.random.default_rng([6, 0, seed])
        w = rng.uniform(0.05, 0.95)
        a, b = random_product(SHAPE3, rng), random_product(SHAPE3, rng)
        rho = DensityMatrix.from_states(SHAPE3, [a, b], [w, 1 - w])
        v = classify_rank2(rho, cat)
        undecided += v.status not in (SEPARABLE, ENTANGLED)
        if v.status == SEPARABLE and v.verification.ok and len(v.decomposition) == 2:
            sep_ok += 1
    for seed in range(100):
        rng = np.random.default_rng([6, 1, seed])
        w = rng.uniform(0.3, 1.0)
        other = random_product(SHAPE3, rng) if seed % 2 else random_pure(SHAPE3, rng)
        rho = DensityMatrix.from_states(SHAPE3, [ghz, other], [w, 1 - w])
        v = classify_rank2(rho, cat)
        undecided += v.status not in (SEPARABLE, ENTANGLED)
        ent_ok += v.status == ENTANGLED
    ok = sep_ok == 100 and ent_ok == 100 and undecided == 0
    report(6, ok, f"separable verified {sep_ok}/100, GHZ mixtures entangled {ent_ok}/100, undecided {undecided}")


def test_criterion_07_pure_state_oracle(report):
    disagreements = {}
    for shape in [(2, 2), (2, 2, 2), (2, 3), (2, 2, 3)]:
        cat = generate_minimal(shape)
        bad = 0
        for kind, gen in (("product", random_product), ("generic", random_pure)):
            for seed in range(500):
                psi = gen(shape, np.random.default_rng([7, len(shape), shape[-1], seed]))
                by_conc = float(np.max(pure_concurrences(psi, cat))) <= 1e-10
                by_rank = all(r == 1 for r in matricization_ranks(psi, shape))
                bad += by_conc != by_rank
        disagreements[shape] = bad
    ok = all(v == 0 for v in disagreements.values())
    report(7, ok, f"disagreements per shape over 1000 states: {disagreements}")


def test_criterion_08_thompson_form(report):
    cat = generate_minimal(SHAPE3)
    worst_sv = 0.0
    worst_bound = 0.0
    negative = 0
    for seed in range(200):
        rng = np.random.default_rng([8, seed])
        rho = random_density_matrix(SHAPE3, int(rng.integers(1, 9)), rng)
        rep = mixed_concurrence_report(rho, cat)
        r = rep.rank
        for a, op in enumerate(cat):
            worst_sv = max(worst_sv, float(np.max(np.abs(flip_spectrum(rho, op, r) - rep.singular_values[a]))))
        c = rep.concurrences
        negative += int(np.sum(c < 0))
        for k in range(50):
            p = r + int(rng.integers(0, 4))
            u = random_unitary(p, rng)
            psi = u.conj() @ np.vstack([rep.eigstates, np.zeros((p - r, 8))])
            taus_d = preconcurrence_matrices(psi, cat)
            diag_sum = np.sum(np.abs(np.diagonal(taus_d, axis1=1, axis2=2)), axis=1)
            worst_bound = max(worst_bound, float(np.max(c - diag_sum)))
    ok = worst_sv <= 1e-8 and negative == 0 and worst_bound <= 1e-12
    report(8, ok, f"max |s_k - sqrt(eig)|={worst_sv:.1e}, negative C={negative}, "
                  f"max(C - diagonal sum) over 10000 decompositions={worst_bound:.1e}")


def _central_difference(fun, x, h=1e-6):
    g = np.zeros_like(x)
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


def test_criterion_09_optimizer(report):
    worst_grad = 0.0
    for seed in range(20):
        rng = np.random.default_rng([9, 0, seed])
        p = int(rng.integers(2, 7))
        mats = []
        for _ in range(int(rng.integers(1, 5))):
            a = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
            mats.append(a + a.T)
        w = rng.uniform(0.5, 2, size=len(mats))
        theta = rng.normal(size=p * p)
        _, g = hollow_objective_grad(theta, mats, w)
        fd = _central_difference(lambda t: hollow_objective(t, mats, w), theta)
        worst_grad = max(worst_grad, float(np.linalg.norm(g - fd) / np.linalg.norm(fd)))

    found = 0
    for seed in range(100):
        rng = np.random.default_rng([9, 1, seed])
        p = int(rng.integers(2, 7))
        s = np.sort(rng.uniform(0.05, 1, size=p))[::-1]
        if p == 2:
            s[1] = s[0]
        elif p == 3:
            s[0] = s[1] + s[2]
        else:
            s[0] = min(s[0], s[1:].sum())
        wmat = random_unitary(p, rng)
        tau = wmat @ np.diag(s) @ wmat.T
        res = hollowise_single(tau, HollowisationOptions())
        if res.found and res.residual <= 1e-9:
            ext = np.pad(tau, (0, res.p - p))
            found += np.max(np.abs(np.diag(res.U @ ext @ res.U.T))) <= 1e-9

    gaps_ok = 0
    for seed in range(100):
        rng = np.random.default_rng([9, 2, seed])
        p = int(rng.integers(2, 7))
        rest = rng.uniform(0.05, 1, size=p - 1)
        gap = rng.uniform(0.01, 1)
        s = np.concatenate([[rest.sum() + gap], rest])
        wmat = random_unitary(p, rng)
        tau = wmat @ np.diag(s) @ wmat.T
        res = hollowise_single(tau)
        gaps_ok += (not res.found) and res.gap is not None and abs(res.gap - gap) <= 1e-10 * s[0]
    ok = worst_grad <= 1e-5 and found == 100 and gaps_ok == 100
    report(9, ok, f"max relative gradient error={worst_grad:.1e}, hollowised {found}/100, "
                  f"correct gap certificates {gaps_ok}/100")


def test_criterion_10_no_false_entanglement(report):
    counts = {}
    for shape, max_terms in (((2, 2), 10), ((2, 2, 2), 8)):
        cat = generate_minimal(shape)
        tally = {"separable": 0, "entangled": 0, "undecided": 0}
        for seed in range(200):
            rng = np.random.default_rng([10, len(shape), seed])
            rho, _, _ = random_separable(shape, int(rng.integers(1, max_terms + 1)), rng)
            r = int(np.linalg.matrix_rank(rho.matrix, 1e-10))
            v = classify(rho, cat, ClassifyOptions(p_max=r + 3, restarts=8))
            tally[v.status] += 1
        counts[shape] = tally
    ok = all(t["entangled"] == 0 for t in counts.values())
    report(10, ok, f"verdicts per shape: {counts}")
