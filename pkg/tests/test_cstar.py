import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfcross.cstar import (
    BlockAlgebra,
    StarAlgebra,
    TensorAlgebra,
    center,
    commutant_in,
    is_simple,
    kron_to_blocks,
    matrix_unit_residual,
    matrix_units,
    mvn_equivalent,
    presentation_residuals,
    tensor,
    to_blocks,
    wedderburn,
)
from hopfcross.errors import NotProjectionError
from hopfcross.groups import symmetric
from hopfcross.hopf import group_algebra


def scrambled(alg: StarAlgebra, seed: int) -> StarAlgebra:
    """The same algebra in a random invertible basis."""
    rng = np.random.default_rng(seed)
    d = alg.dim
    q = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    qi = np.linalg.inv(q)
    mult = np.einsum("ai,bj,abc,kc->ijk", q, q, alg.mult, qi)
    return StarAlgebra(mult, qi @ alg.invol @ np.conj(q), qi @ alg.unit, name="scrambled")


def random_element(alg, rng):
    return rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim)


def test_block_algebra_multiplies_blockwise():
    alg = BlockAlgebra([1, 2])
    x = alg.from_blocks([np.array([[2.0]]), np.array([[1, 2], [3, 4]])])
    y = alg.from_blocks([np.array([[5.0]]), np.array([[0, 1], [1, 0]])])
    xy = alg.to_blocks(alg.multiply(x, y))
    assert xy[0][0, 0] == 10
    assert np.array_equal(xy[1], np.array([[2, 1], [4, 3]]))
    # the structure tensor agrees with the blockwise product
    assert np.allclose(np.einsum("i,j,ijk->k", x, y, alg.mult), alg.multiply(x, y))


def test_regular_trace_matches_left_regular_representation():
    # oracle: Tr(L_x) = n * trace of each M_n block
    alg = BlockAlgebra([1, 3])
    rng = np.random.default_rng(0)
    x = random_element(alg, rng)
    b0, b1 = alg.to_blocks(x)
    assert np.isclose(alg.regular_trace @ x, 1 * np.trace(b0) + 3 * np.trace(b1))
    assert np.isclose(alg.regular_trace @ x, np.trace(alg.left_matrix(x)))


def test_presentation_axioms_hold():
    for alg in (BlockAlgebra([2, 1]), group_algebra(symmetric(3)).algebra, scrambled(BlockAlgebra([1, 2]), 5)):
        res = presentation_residuals(alg)
        assert max(res.values()) < 1e-8, res


def test_broken_associativity_detected():
    alg = BlockAlgebra([2])
    m = alg.mult.copy()
    m[1, 2, 0] += 0.5
    bad = StarAlgebra(m, alg.invol, alg.unit)
    assert presentation_residuals(bad)["associative"] > 0.1


def test_wedderburn_of_s3_group_algebra():
    # C[S3] = C + C + M2 (two characters of degree 1, one of degree 2)
    w = wedderburn(group_algebra(symmetric(3)).algebra)
    assert sorted(w.block_sizes) == [1, 1, 2]
    assert sum(n * n for n in w.block_sizes) == 6


def test_wedderburn_recovers_blocks_in_a_scrambled_basis():
    alg = scrambled(BlockAlgebra([2, 1, 1]), 11)
    w = wedderburn(alg)
    assert sorted(w.block_sizes) == [1, 1, 2]
    total = sum(w.central_projections)
    assert np.allclose(total, alg.unit, atol=1e-8)
    for z in w.central_projections:
        assert np.allclose(alg.multiply(z, z), z, atol=1e-8)


def test_matrix_units_in_a_scrambled_basis():
    alg = scrambled(BlockAlgebra([2, 1]), 2)
    units = matrix_units(alg)
    assert len(units) == 5
    assert matrix_unit_residual(alg, units) < 1e-8
    # to_blocks of the unit gives identity blocks
    blocks = to_blocks(alg, alg.unit, units)
    assert all(np.allclose(b, np.eye(len(b)), atol=1e-8) for b in blocks)


def test_center_and_commutant():
    alg = BlockAlgebra([2, 1, 3])
    assert center(alg).dim == 3
    # commutant of the diagonal matrices of M2 is the diagonal
    m2 = BlockAlgebra([2])
    diag = [m2.matrix_unit(0, 0, 0), m2.matrix_unit(0, 1, 1)]
    assert commutant_in(m2, np.array(diag)).dim == 2


def test_tensor_algebra_and_block_permutation():
    a, b = BlockAlgebra([1, 2]), BlockAlgebra([2])
    t = tensor(a, b)
    assert t.block_dims == (2, 4)
    p = kron_to_blocks(a, b)
    rng = np.random.default_rng(1)
    x1, x2, y1, y2 = (random_element(alg, rng) for alg in (a, a, b, b))
    lhs = t.multiply(p @ np.kron(x1, y1), p @ np.kron(x2, y2))
    assert np.allclose(lhs, p @ np.kron(a.multiply(x1, x2), b.multiply(y1, y2)))
    ta = TensorAlgebra(a, b)
    assert np.allclose(ta.multiply(np.kron(x1, y1), np.kron(x2, y2)),
                       np.kron(a.multiply(x1, x2), b.multiply(y1, y2)))
    assert np.allclose(ta.regular_trace, np.kron(a.regular_trace, b.regular_trace))


def test_mvn_equivalence_by_rank_vectors():
    alg = BlockAlgebra([2, 1])
    w = wedderburn(alg)
    p = alg.matrix_unit(0, 0, 0)
    q = alg.matrix_unit(0, 1, 1)
    r = alg.matrix_unit(1, 0, 0)
    assert mvn_equivalent(p, q, w)
    assert not mvn_equivalent(p, r, w)
    assert not is_simple(w)
    with pytest.raises(NotProjectionError):
        mvn_equivalent(2 * p, q, w)


def test_norm_is_operator_norm():
    alg = BlockAlgebra([2])
    x = alg.from_blocks([np.array([[0, 3], [0, 0]])])
    assert np.isclose(alg.norm(x), 3)
    sc = scrambled(alg, 4)
    # the unit has norm one in any basis
    assert np.isclose(sc.norm(sc.unit), 1)


algebras = st.sampled_from([(1, 1), (2,), (1, 2), (3,), (2, 2)])


@settings(max_examples=30, deadline=None)
@given(algebras, st.integers(0, 2**31 - 1))
def test_star_algebra_laws(dims, seed):
    alg = BlockAlgebra(dims)
    rng = np.random.default_rng(seed)
    x, y, z = (random_element(alg, rng) for _ in range(3))
    assert np.allclose(alg.multiply(alg.multiply(x, y), z), alg.multiply(x, alg.multiply(y, z)))
    assert np.allclose(alg.adjoint(alg.multiply(x, y)), alg.multiply(alg.adjoint(y), alg.adjoint(x)))
    assert np.allclose(alg.adjoint(alg.adjoint(x)), x)
    assert np.allclose(alg.multiply(alg.unit, x), x)
    # C* identity ||x* x|| = ||x||^2
    assert np.isclose(alg.norm(alg.multiply(alg.adjoint(x), x)), alg.norm(x) ** 2)
    # the regular trace is positive on x* x
    assert (alg.regular_trace @ alg.multiply(alg.adjoint(x), x)).real >= -1e-9


@settings(max_examples=20, deadline=None)
@given(algebras, st.integers(0, 2**31 - 1))
def test_functional_calculus_exp_is_unitary(dims, seed):
    alg = scrambled(BlockAlgebra(dims), seed % 1000)
    rng = np.random.default_rng(seed)
    x = random_element(alg, rng)
    h = (x + alg.adjoint(x)) / 2
    u = alg.functional_calculus(h, lambda v: np.exp(1j * v))
    assert np.allclose(alg.multiply(u, alg.adjoint(u)), alg.unit, atol=1e-7)
