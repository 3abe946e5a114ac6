"""Acceptance criteria 1-11, one test each, with one printed pass/fail line per criterion."""
import io
import time

import numpy as np
import pytest

from hopfcross import cli
from hopfcross.catalog import DEFAULT_CATALOG, GROUP_ACTION_ENTRIES
from hopfcross.checkers import (
    containment_residual,
    group_action_free,
    inner_witness_check,
    is_free,
    is_outer,
    is_saturated,
    watatani_dims,
)
from hopfcross.coaction import amplify, restrict_via_quotient, sample_perturbations
from hopfcross.cstar import BlockAlgebra, wedderburn
from hopfcross.crossed import build, check_expectation, iterate, second_dual_compare
from hopfcross.groups import cyclic, klein_four, symmetric
from hopfcross.hopf import HopfQuotient, dual_dual_residual, function_algebra, group_algebra, verify_hopf_axioms

TOL = 1e-8
PERTURBATIONS = 20
PERTURBATION_SEED = 2024


@pytest.fixture(scope="module")
def crossed(catalog):
    return {name: build(c) for name, c in catalog.items()}


@pytest.fixture(scope="module")
def perturbed(catalog):
    return {name: sample_perturbations(c, PERTURBATIONS, PERTURBATION_SEED) for name, c in catalog.items()}


def test_criterion_01_hopf_axioms(record_criterion):
    start = time.perf_counter()
    groups = {"Z2": cyclic(2), "Z3": cyclic(3), "Z2xZ2": klein_four(), "S3": symmetric(3)}
    worst, worst_dd, failures = 0.0, 0.0, []
    for gname, g in groups.items():
        for make in (group_algebra, function_algebra):
            h = make(g)
            for k in (h, h.dual):
                rep = verify_hopf_axioms(k)
                worst = max(worst, rep.max_residual)
                if not rep.ok:
                    failures.append((k.name, rep.failures()))
            worst_dd = max(worst_dd, dual_dual_residual(h))
    elapsed = time.perf_counter() - start
    ok = not failures and worst < TOL and worst_dd < TOL and elapsed < 5.0
    record_criterion(1, ok, f"max axiom residual {worst:.1e}, dual-dual {worst_dd:.1e}, {elapsed:.2f} s")
    assert not failures, failures
    assert worst < TOL and worst_dd < TOL
    assert elapsed < 5.0


def test_criterion_02_group_freeness_agreement(catalog, record_criterion):
    expected = {"swap-c2": True, "z3-shift-c3": True, "trivial-c-z2": False,
                "ad-diag-m2": False, "pauli-m2": False}
    got = {}
    for name in GROUP_ACTION_ENTRIES:
        c = catalog[name]
        got[name] = (group_action_free(c.group_action).free, is_free(c).free)
    ok = len(got) >= 5 and all(g == f == expected[n] for n, (g, f) in got.items())
    record_criterion(2, ok, f"{len(got)} group actions, verdicts {[f for _, f in got.values()]}")
    for name, (g, f) in got.items():
        assert g == f == expected[name], name


def test_criterion_03_three_routes(catalog, perturbed, record_criterion):
    disagreements, checked = [], 0
    for name, c in catalog.items():
        for k, x in enumerate([c] + perturbed[name]):
            rep = is_free(x, strict=False)
            checked += 1
            if not rep.agreement:
                disagreements.append((name, k))
    ok = not disagreements and all(len(p) == PERTURBATIONS for p in perturbed.values())
    record_criterion(3, ok, f"{checked} coactions ({len(catalog)} entries x {PERTURBATIONS} perturbations), "
                            f"{len(disagreements)} disagreements")
    assert not disagreements


def test_criterion_04_containment(catalog, record_criterion):
    worst = max(containment_residual(c) for c in catalog.values())
    ok = worst < TOL
    record_criterion(4, ok, f"max containment residual {worst:.1e} over {len(catalog)} coactions")
    assert ok


def test_criterion_05_crossed_product_blocks(catalog, crossed, record_criterion):
    h_blocks = sorted(wedderburn(catalog["trivial-c-z2"].hopf.algebra).block_sizes)
    got = {
        "swap-c2": sorted(crossed["swap-c2"].wedderburn.block_sizes),
        "ad-diag-m2": sorted(crossed["ad-diag-m2"].wedderburn.block_sizes),
        "trivial-c-z2": sorted(crossed["trivial-c-z2"].wedderburn.block_sizes),
    }
    expected = {"swap-c2": [2], "ad-diag-m2": [2, 2], "trivial-c-z2": h_blocks}
    ok = got == expected and h_blocks == [1, 1]
    record_criterion(5, ok, f"blocks {got}")
    assert got == expected
    assert h_blocks == [1, 1]


def test_criterion_06_expectation(crossed, record_criterion):
    reports = {name: check_expectation(cp) for name, cp in crossed.items()}
    bad = [n for n, r in reports.items()
           if max(r.idempotence, r.bimodule) >= TOL or r.gram_min_eigenvalue <= 1e-10]
    gram = min(r.gram_min_eigenvalue for r in reports.values())
    algebraic = max(max(r.idempotence, r.bimodule) for r in reports.values())
    ok = not bad
    record_criterion(6, ok, f"{len(reports)} crossed products, max idempotence/bimodule residual "
                            f"{algebraic:.1e}, min Gram eigenvalue {gram:.3g}")
    assert not bad, bad


def test_criterion_07_free_implies_outer(catalog, record_criterion):
    free_names = [n for n, c in catalog.items() if is_free(c).free]
    verdicts = {n: is_outer(catalog[n]).verdict for n in free_names}
    c = catalog["ad-diag-m2"]
    ov = is_outer(c)
    g = c.group_action.group
    subset = [g.names.index(x) for x in ov.witness_subgroup]
    sigma = restrict_via_quotient(c, HopfQuotient(g, subset))
    check = inner_witness_check(sigma, ov.witness)
    ok = all(v == "outer" for v in verdicts.values()) and ov.verdict == "not_outer" and check.ok
    record_criterion(7, ok, f"free entries {sorted(verdicts)} all outer; ad-diag-m2 {ov.verdict}, "
                            f"witness verified {check.ok}")
    assert all(v == "outer" for v in verdicts.values()), verdicts
    assert ov.verdict == "not_outer"
    assert check.ok


def test_criterion_08_saturation(catalog, crossed, record_criterion):
    rep = is_saturated(catalog["trivial-c-z2"], crossed["trivial-c-z2"])
    second = is_saturated(catalog["second-dual-trivial-c-z2"])
    cmp = second_dual_compare(iterate(crossed["trivial-c-z2"]), BlockAlgebra([1]), 2)
    ok = (not rep.saturated and rep.rank_vector_dual == (1, 0, 0, 1)
          and rep.rank_vector_trivial == (1, 0, 1, 0) and second.saturated
          and cmp.match and cmp.blocks == (2,))
    record_criterion(8, ok, f"rank vectors {rep.rank_vector_dual} vs {rep.rank_vector_trivial}; "
                            f"second dual saturated {second.saturated}; second dual blocks {cmp.blocks}")
    assert not rep.saturated
    assert rep.rank_vector_dual == (1, 0, 0, 1)
    assert rep.rank_vector_trivial == (1, 0, 1, 0)
    assert second.saturated
    assert cmp.match and cmp.blocks == (2,)


def test_criterion_09_freeness_invariance(catalog, perturbed, record_criterion):
    changed, checked = [], 0
    for name, c in catalog.items():
        free = is_free(c).free
        variants = [(f"amplify {n}", amplify(c, n)) for n in (2, 3)]
        variants += [(f"perturbation {k}", p) for k, p in enumerate(perturbed[name])]
        for label, v in variants:
            checked += 1
            if is_free(v).free != free:
                changed.append((name, label))
    ok = not changed
    record_criterion(9, ok, f"{checked} amplified or perturbed coactions, {len(changed)} verdict changes")
    assert not changed, changed


def test_criterion_10_relative_commutant_dimensions(catalog, crossed, record_criterion):
    dims = {name: watatani_dims(cp) for name, cp in crossed.items()}
    unequal = [n for n, (a, b) in dims.items() if a != b]
    swap_dual = is_free(catalog["dual-swap-c2"])
    ok = (not unequal and dims["swap-c2"] == (2, 2) and not swap_dual.free
          and (swap_dual.intertwiner_dim, swap_dual.expected_space_dim) == (2, 1))
    record_criterion(10, ok, f"{len(dims)} entries equal, swap {dims['swap-c2']}; dual of swap not free "
                             f"({swap_dual.intertwiner_dim} != {swap_dual.expected_space_dim})")
    assert not unequal, unequal
    assert dims["swap-c2"] == (2, 2)
    assert not swap_dual.free
    assert (swap_dual.intertwiner_dim, swap_dual.expected_space_dim) == (2, 1)


def test_criterion_11_determinism(record_criterion):
    outputs, times = [], []
    for _ in range(2):
        out, err = io.StringIO(), io.StringIO()
        start = time.perf_counter()
        code = cli.run(["suite"], stdout=out, stderr=err)
        times.append(time.perf_counter() - start)
        assert code == 0, err.getvalue()
        outputs.append(out.getvalue().encode())
    ok = outputs[0] == outputs[1] and max(times) < 60
    record_criterion(11, ok, f"two suite runs byte-identical: {outputs[0] == outputs[1]} "
                             f"({len(outputs[0])} bytes, {len(DEFAULT_CATALOG)} entries, "
                             f"slowest run {max(times):.1f} s)")
    assert outputs[0] == outputs[1]
    assert max(times) < 60
