import itertools

import numpy as np
import pytest

from hollowsep.operators import generate_minimal
from hollowsep.states import SystemShape


@pytest.fixture(scope="session")
def cat3():
    return generate_minimal((2, 2, 2))


@pytest.fixture(scope="session")
def cat2():
    return generate_minimal((2, 2))


def rng_for(*key):
    return np.random.default_rng(list(key))


def brute_force_minimal(shape):
    """Independent construction of the minimal operator set straight from the
    definition: group index couples by (differing positions, common values,
    unordered value pairs) and pair the all-smaller reference couple with every
    other couple of its group that keeps the last differing position."""
    shape = SystemShape.of(shape)
    out = set()
    basis = list(itertools.product(*(range(m) for m in shape.dims)))
    for i in basis:
        for ip in basis:
            q = [k for k in range(len(i)) if i[k] != ip[k]]
            if len(q) < 2 or any(i[k] > ip[k] for k in q):
                continue
            last = q[-1]
            for flips in itertools.product([False, True], repeat=len(q) - 1):
                if not any(flips):
                    continue
                j, jp = list(i), list(ip)
                for k, f in zip(q[:-1], flips):
                    if f:
                        j[k], jp[k] = ip[k], i[k]
                assert j[last] == i[last]
                out.add((shape.flat(i), shape.flat(ip), shape.flat(tuple(j)), shape.flat(tuple(jp))))
    return out


def brute_force_minors(shape):
    """Every 2x2 minor of every matricization as an unordered pair of
    unordered index pairs ``{{i, i'}, {j, j'}}`` with ``a_i a_i' = a_j a_j'``."""
    shape = SystemShape.of(shape)
    dims = shape.dims
    out = set()
    for k in range(len(dims)):
        rest = [range(m) for kk, m in enumerate(dims) if kk != k]
        cols = list(itertools.product(*rest))
        for r1, r2 in itertools.combinations(range(dims[k]), 2):
            for c1, c2 in itertools.combinations(cols, 2):
                def idx(r, c):
                    t = list(c)
                    t.insert(k, r)
                    return shape.flat(tuple(t))
                a = frozenset([idx(r1, c1), idx(r2, c2)])
                b = frozenset([idx(r1, c2), idx(r2, c1)])
                out.add(frozenset([a, b]))
    return out


# -- rank-5 three-qubit example ----------------------------------------------------

RANK5_NUMERATORS = np.array([
    [1, -1, 0, 0, -1, 1, 0, 0],
    [-1, 3, 0, 0, 1, -3, 0, 0],
    [0, 0, 6, 0, 0, 0, -2, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 1, 0, 0, 3, 1, 0, 0],
    [1, -3, 0, 0, 1, 5, 0, 0],
    [0, 0, -2, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 0],
]) / 20

S2, S3 = np.sqrt(2), np.sqrt(3)
RANK5_U = np.array([
    [-S3, 0, 0, 0, S3],
    [S2, 0, -S2, 0, S2],
    [1, 0, 2, 0, 1],
    [0, -S3, 0, -S3, 0],
    [0, -S3, 0, S3, 0],
]) / np.sqrt(6)


def rank5_reference_states():
    """The five equal-weight product states |-01>, |-0->, |10+>, |-10>, |010>."""
    z, o = np.array([1.0, 0]), np.array([0, 1.0])
    plus, minus = (z + o) / S2, (z - o) / S2

    def k(a, b, c):
        return np.kron(np.kron(a, b), c)

    return np.array([k(minus, z, o), k(minus, z, minus), k(o, z, plus), k(minus, o, z), k(z, o, z)])


def rank5_aligned_eigstates(eigstates):
    """Numeric weighted eigenvectors re-phased into the gauge in which the
    tabulated unitary produces the reference decomposition.

    With real ``U``, the reference states satisfy ``psi / sqrt 5 = U v``, so the
    gauge-fixed eigenvectors are ``v = U^T psi / sqrt 5``. Each numeric row is
    multiplied by the phase that aligns it with that reference.
    """
    ref = RANK5_U.T @ (rank5_reference_states() / np.sqrt(5))
    out = []
    for v, r in zip(eigstates, ref):
        ov = np.vdot(v, r)
        out.append(v * ov / abs(ov))
    return np.array(out), ref
