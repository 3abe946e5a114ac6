import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfcross.catalog import DEFAULT_CATALOG, GROUP_ACTION_ENTRIES, load_entry
from hopfcross.checkers import (
    MAX_CENTER_PROJECTIONS,
    containment_residual,
    crossed_is_simple,
    element_intertwiners,
    exact_rokhlin_search,
    group_action_free,
    inner_witness_check,
    intertwiner_space,
    is_free,
    is_outer,
    is_saturated,
    theorem_suite,
    twisted_group_algebra,
    watatani_dims,
)
from hopfcross.coaction import coboundary, perturb, random_unitary, trivial_coaction
from hopfcross.cstar import BlockAlgebra, wedderburn
from hopfcross.crossed import build, dual_coaction, iterate
from hopfcross.errors import UnsupportedSizeError
from hopfcross.groups import cyclic, klein_four
from hopfcross.hopf import HopfAlgebra, function_algebra

# frozen from the element-intertwiner oracle below and the block data of the crossed products
FREE = {
    "trivial-c-z2": False, "swap-c2": True, "z3-shift-c3": True, "ad-diag-m2": False,
    "pauli-m2": False, "grading-m2": False, "trivial-m2-z2": False, "trivial-m2-trivial": True,
    "dual-swap-c2": False, "dual-trivial-c-z2": True, "second-dual-trivial-c-z2": False,
    "second-dual-swap-c2": True,
}


@pytest.mark.parametrize("name", DEFAULT_CATALOG)
def test_three_routes_agree(catalog, name):
    rep = is_free(catalog[name])
    assert rep.agreement
    assert rep.free is FREE[name]
    assert rep.containment_residual < 1e-8


@pytest.mark.parametrize("name", GROUP_ACTION_ENTRIES)
def test_intertwiner_dimension_oracle(catalog, name):
    # for rho = sum_t alpha_t (x) d_t, intertwiners split over t: x_t alpha_t(a) = a x_t
    c = catalog[name]
    ga = c.group_action
    expected = sum(element_intertwiners(c.algebra, m).dim for m in ga.matrices)
    assert intertwiner_space(c).dim == expected


def test_group_freeness_matches_coaction_freeness(catalog):
    for name in GROUP_ACTION_ENTRIES:
        c = catalog[name]
        assert group_action_free(c.group_action).free == is_free(c).free, name


def test_non_free_witness_is_an_intertwiner(catalog):
    c = catalog["ad-diag-m2"]
    rep = is_free(c)
    x = np.asarray(rep.witness)
    assert intertwiner_space(c).contains_vectors(x[None, :])


def test_free_iff_crossed_product_factor_for_simple_cases(catalog):
    assert crossed_is_simple(build(catalog["swap-c2"]))
    assert not crossed_is_simple(build(catalog["ad-diag-m2"]))


def test_inner_witness_for_trivial_coaction(catalog):
    c = catalog["trivial-c-z2"]
    one = np.kron(c.algebra.unit, c.hopf0.unit)
    assert inner_witness_check(c, one).ok


def test_swap_has_no_inner_witness(catalog):
    # a free coaction admits no inner witness: check random unitaries of A (x) C(Z2)
    c = catalog["swap-c2"]
    for seed in range(10):
        u = random_unitary(c.target, seed)
        assert not inner_witness_check(c, u).ok


@pytest.mark.parametrize("name, verdict", [
    ("swap-c2", "outer"), ("z3-shift-c3", "outer"), ("trivial-c-z2", "not_outer"),
    ("ad-diag-m2", "not_outer"), ("pauli-m2", "not_outer"), ("trivial-m2-trivial", "outer"),
    ("grading-m2", "inconclusive"),
])
def test_outer_verdicts(catalog, name, verdict):
    c = catalog[name]
    for shortcut in (True, False):
        ov = is_outer(c, use_shortcut=shortcut)
        assert ov.verdict == verdict
        if verdict == "not_outer":
            assert ov.witness_report.ok


def test_pauli_is_inner_only_on_a_cyclic_subgroup(catalog):
    ov = is_outer(catalog["pauli-m2"], use_shortcut=False)
    assert len(ov.witness_subgroup) == 2
    # the Klein group is implemented by 1, Z, X, XZ (index order (0,0), (0,1), (1,0), (1,1))
    z = np.array([[1, 0], [0, -1]])
    x = np.array([[0, 1], [1, 0]])
    mats = [np.eye(2), z, x, x @ z]
    g = klein_four()
    phase = np.array([[np.trace(mats[s] @ mats[t] @ mats[g.mul(s, t)].conj().T) / 2
                       for t in g.elements] for s in g.elements])
    # X Z = -Z X makes the phase cocycle nontrivial, so the twisted algebra is M2
    assert wedderburn(twisted_group_algebra(g, phase)).block_sizes == (2,)
    assert sorted(wedderburn(twisted_group_algebra(g, np.ones((4, 4)))).block_sizes) == [1, 1, 1, 1]


def test_saturation_of_trivial_coaction_on_c(catalog):
    rep = is_saturated(catalog["trivial-c-z2"])
    assert not rep.saturated
    assert rep.rank_vector_dual == (1, 0, 0, 1)
    assert rep.rank_vector_trivial == (1, 0, 1, 0)
    assert is_saturated(catalog["second-dual-trivial-c-z2"]).saturated


def test_saturation_basis_independent():
    # the same trivial coaction expressed in a rotated basis of C(Z2)
    h0 = function_algebra(cyclic(2))
    q = np.array([[1, 1], [1, -1]], dtype=complex)
    rotated = h0.change_basis(q)
    a = BlockAlgebra([1])
    r1 = is_saturated(trivial_coaction(a, h0))
    r2 = is_saturated(trivial_coaction(a, rotated))
    assert isinstance(rotated, HopfAlgebra)
    assert r1.saturated == r2.saturated
    assert sorted(r1.rank_vector_dual) == sorted(r2.rank_vector_dual)


def test_rokhlin_diagnostic(catalog):
    rep = exact_rokhlin_search(catalog["swap-c2"])
    assert rep.found and rep.subset == (0,)
    assert np.allclose(rep.averaged, [0.5, 0.5])
    assert exact_rokhlin_search(catalog["z3-shift-c3"]).found
    assert not exact_rokhlin_search(catalog["ad-diag-m2"]).found


def test_rokhlin_size_limit():
    h0 = function_algebra(cyclic(2))
    big = BlockAlgebra([1] * (MAX_CENTER_PROJECTIONS + 1))
    with pytest.raises(UnsupportedSizeError):
        exact_rokhlin_search(trivial_coaction(big, h0))


@pytest.mark.parametrize("name", [n for n in DEFAULT_CATALOG if not n.startswith("second")])
def test_relative_commutant_dimensions_agree(catalog, name):
    left, right = watatani_dims(build(catalog[name]))
    assert left == right


def test_reverse_implication_fails_for_simple_algebras(catalog):
    # A = M2 is simple, Ad(diag(1, -1)) is not free, yet its dual coaction is free
    c = catalog["ad-diag-m2"]
    assert len(wedderburn(c.algebra).block_sizes) == 1
    cp = build(c)
    assert not is_free(c, cp).free
    assert is_free(dual_coaction(cp), iterate(cp)).free


def test_dual_of_swap_is_not_free(catalog):
    rep = is_free(catalog["dual-swap-c2"])
    assert (rep.intertwiner_dim, rep.expected_space_dim) == (2, 1)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["swap-c2", "trivial-c-z2", "ad-diag-m2", "pauli-m2", "grading-m2"]),
       st.integers(0, 2**20))
def test_freeness_invariant_under_perturbation(catalog, name, seed):
    c = catalog[name]
    p = perturb(c, coboundary(c, random_unitary(c.algebra, seed)))
    rep = is_free(p)
    assert rep.agreement and rep.free is FREE[name]
    assert containment_residual(p) < 1e-8


def test_suite_on_two_entries():
    entries = [(n, load_entry(n).coaction) for n in ("swap-c2", "ad-diag-m2")]
    report = theorem_suite(entries)
    assert report.all_pass
    swap = report.rows[0].cells
    assert swap["f"].details["relative_commutant_dim"] == 2
    assert swap["f"].details["dual_relative_commutant_dim"] == 2
    assert report.rows[1].cells["g"].details["equivalence_holds"] is False
