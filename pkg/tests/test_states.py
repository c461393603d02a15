import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hollowsep.exceptions import (
    BadExcitationNumber,
    DimensionMismatch,
    InvalidPartition,
    NotDensityMatrix,
    NotNormalized,
    PartyOutOfRange,
)
from hollowsep.states import (
    DensityMatrix,
    PureState,
    SystemShape,
    basis_state,
    dicke_state,
    dicke_superposition,
    eigendecompose_rho,
    ghz_state,
    is_product,
    matricization_ranks,
    matricize,
    numeric_rank,
    partial_transpose,
    product_state,
    random_density_matrix,
    random_product,
    random_pure,
    random_separable,
    unmatricize,
    w_state,
)

dims_strategy = st.lists(st.integers(2, 4), min_size=2, max_size=4)


def test_shape_validation():
    with pytest.raises(ValueError):
        SystemShape((2, 1))
    with pytest.raises(ValueError):
        SystemShape(())
    s = SystemShape((2, 3))
    assert s.dim == 6 and s.n_parties == 2 and s.strides == (3, 1)


def test_basis_order_last_party_fastest():
    s = SystemShape((2, 3))
    order = [s.multi(k) for k in range(6)]
    assert order == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert s.label(4) == "|11>"


@given(dims_strategy, st.data())
@settings(max_examples=60, deadline=None)
def test_flat_multi_roundtrip(dims, data):
    s = SystemShape(tuple(dims))
    k = data.draw(st.integers(0, s.dim - 1))
    assert s.flat(s.multi(k)) == k
    assert list(itertools.product(*(range(m) for m in dims))).index(s.multi(k)) == k


def test_matricize_hand_example():
    # a_{i1 i2 i3} = 100 i1 + 10 i2 + i3 on (2, 3, 2)
    shape = (2, 3, 2)
    amps = np.array([100 * a + 10 * b + c for a, b, c in itertools.product(range(2), range(3), range(2))])
    m2 = matricize(amps, shape, 2)
    assert m2.shape == (3, 4)
    # row i2, columns ordered by (i1, i3) with i3 fastest
    np.testing.assert_array_equal(m2[1], [10, 11, 110, 111])
    m1 = matricize(amps, shape, 1)
    np.testing.assert_array_equal(m1[1], [100, 101, 110, 111, 120, 121])


@given(dims_strategy, st.integers(0, 2**32 - 1), st.data())
@settings(max_examples=60, deadline=None)
def test_matricize_roundtrip(dims, seed, data):
    shape = SystemShape(tuple(dims))
    k = data.draw(st.integers(1, shape.n_parties))
    v = random_pure(shape, seed)
    np.testing.assert_array_equal(unmatricize(matricize(v, shape, k), shape, k), v)


def test_matricize_party_range():
    with pytest.raises(PartyOutOfRange):
        matricize(np.ones(4), (2, 2), 3)
    with pytest.raises(PartyOutOfRange):
        matricize(np.ones(4), (2, 2), 0)


def test_product_and_entangled_ranks():
    shape = (2, 3, 2)
    assert is_product(random_product(shape, 0), shape)
    assert matricization_ranks(random_product(shape, 0), shape) == [1, 1, 1]
    assert matricization_ranks(random_pure(shape, 0), shape) == [2, 3, 2]
    assert matricization_ranks(ghz_state(3).amplitudes, (2, 2, 2)) == [2, 2, 2]
    assert numeric_rank(np.zeros((2, 2))) == 0


def test_pure_state_validation():
    with pytest.raises(NotNormalized):
        PureState(SystemShape((2, 2)), np.ones(4))
    with pytest.raises(DimensionMismatch):
        PureState(SystemShape((2, 2)), np.ones(3) / np.sqrt(3))
    psi = PureState.normalized((2, 2), [1, 0, 0, 1])
    np.testing.assert_allclose(psi.projector().matrix[0, 3], 0.5)


def test_density_matrix_validation():
    shape = SystemShape((2, 2))
    with pytest.raises(NotDensityMatrix):
        DensityMatrix(shape, np.eye(4))
    with pytest.raises(NotDensityMatrix):
        DensityMatrix(shape, np.diag([1.2, -0.2, 0, 0]))
    with pytest.raises(NotDensityMatrix):
        bad = np.eye(4) / 4
        bad[0, 1] = 0.1
        DensityMatrix(shape, bad)
    with pytest.raises(DimensionMismatch):
        DensityMatrix(shape, np.eye(3) / 3)


def test_density_matrix_small_negative_eigenvalue_warns():
    shape = SystemShape((2, 2))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        rho = DensityMatrix(shape, np.diag([0.5 + 1e-10, 0.5, 0, -1e-10]))
    assert any(issubclass(w.category, RuntimeWarning) for w in rec)
    np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T)


@pytest.mark.parametrize("rank", [1, 2, 3, 5, 8])
def test_eigendecompose_rho(rank):
    rho = random_density_matrix((2, 2, 2), rank, seed=rank)
    v = eigendecompose_rho(rho)
    assert v.shape == (rank, 8)
    np.testing.assert_allclose(v.T @ v.conj(), rho.matrix, atol=1e-13)
    norms = np.linalg.norm(v, axis=1)
    assert np.all(np.diff(norms) <= 1e-15)
    gram = v.conj() @ v.T
    np.testing.assert_allclose(gram, np.diag(norms**2), atol=1e-14)


def test_partial_transpose_bell():
    # PT of the Bell projector: 1/2 (|00><00| + |11><11| + |01><10| + |10><01|),
    # eigenvalues 1/2, 1/2, 1/2, -1/2
    bell = PureState.normalized((2, 2), [1, 0, 0, 1]).projector()
    pt = partial_transpose(bell, (2, 2), [2])
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = expected[1, 2] = expected[2, 1] = 0.5
    np.testing.assert_allclose(pt, expected, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


def test_partial_transpose_complement_and_full():
    rho = random_density_matrix((2, 3, 2), seed=4)
    # transposing the complement gives the full transpose of the PT
    a = partial_transpose(rho, rho.shape, [1])
    b = partial_transpose(rho, rho.shape, [2, 3])
    np.testing.assert_allclose(a, b.T, atol=1e-15)


def test_partial_transpose_partitions():
    rho = random_density_matrix((2, 2), seed=0)
    for bad in ([], [1, 2], [3], [0]):
        with pytest.raises(InvalidPartition):
            partial_transpose(rho, rho.shape, bad)


def test_dicke_states():
    d = dicke_state(3, 1)
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 1 / np.sqrt(3)
    np.testing.assert_allclose(d.amplitudes, expected)
    np.testing.assert_allclose(w_state(3).amplitudes, expected)
    np.testing.assert_allclose(dicke_state(3, 0).amplitudes, basis_state((2, 2, 2), (0, 0, 0)))
    s = dicke_superposition(3, 0, 2)
    assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-15
    with pytest.raises(BadExcitationNumber):
        dicke_state(3, 4)
    with pytest.raises(BadExcitationNumber):
        dicke_superposition(3, 2, 1)


def test_product_state_and_ghz():
    v = product_state([1, 0], [0, 1], [1, 1] / np.sqrt(2))
    np.testing.assert_allclose(v, [0, 0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0, 0, 0, 0])
    g = ghz_state(3).amplitudes
    assert abs(g[0]) == abs(g[7]) == pytest.approx(1 / np.sqrt(2))


def test_random_generators_are_seeded():
    np.testing.assert_array_equal(random_pure((2, 3), 5), random_pure((2, 3), 5))
    rho1, w1, s1 = random_separable((2, 2), 3, seed=9)
    rho2, w2, s2 = random_separable((2, 2), 3, seed=9)
    np.testing.assert_array_equal(rho1.matrix, rho2.matrix)
    assert abs(w1.sum() - 1) < 1e-14
    for s in s1:
        assert is_product(s, (2, 2))
    np.testing.assert_allclose(np.einsum("k,ki,kj->ij", w1, s1, s1.conj()), rho1.matrix, atol=1e-15)
