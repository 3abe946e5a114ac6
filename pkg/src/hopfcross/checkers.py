"""Decision procedures: freeness, innerness/outerness, saturation, Rokhlin-type diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .coaction import Coaction, GroupAction, restrict_via_quotient
from .crossed import CrossedProduct, build, dual_coaction, iterate
from .cstar import (
    StarAlgebra,
    TensorAlgebra,
    center,
    commutant_in,
    is_simple,
    tensor_wedderburn,
    unitary_defect,
    wedderburn,
)
from .errors import ConstructionError, InconsistencyError, NotUnitaryError, UnsupportedSizeError
from .hopf import HopfQuotient, function_algebra
from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig, max_abs, null_space, span, subspace_equal

MAX_CENTER_PROJECTIONS = 20


# --------------------------------------------------------------------------- freeness


def intertwiner_space(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """{x in A (x) H0 : x rho(a) = (a (x) 1) x for all a}."""
    t = c.target
    one0 = c.hopf0.unit
    rows = []
    for i, a in enumerate(np.eye(c.dim_a)):
        rows.append(t.right_matrix(c.matrix[:, i]) - t.left_matrix(np.kron(a, one0)))
    return null_space(np.concatenate(rows), cfg)


def center_tau_vectors(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Basis of Z(A) (x) C tau."""
    tau = c.hopf0.haar
    return np.array([np.kron(z, tau) for z in center(c.algebra, cfg).basis])


def containment_residual(c: Coaction, space: Subspace | None = None,
                         cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    space = space if space is not None else intertwiner_space(c, cfg)
    vecs = center_tau_vectors(c, cfg)
    vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    return space.residual(vecs)


@dataclass
class FreenessReport:
    intertwiner_dim: int
    expected_space_dim: int
    free: bool
    commutant_dim: int
    commutant_route_free: bool
    slice_dim: int
    cond_exp_unique: bool
    containment_residual: float
    witness: list | None = None

    @property
    def agreement(self) -> bool:
        return self.free == self.commutant_route_free == self.cond_exp_unique


def is_free(c: Coaction, cp: CrossedProduct | None = None, cfg: ToleranceConfig = DEFAULT_TOL,
            *, strict: bool = True) -> FreenessReport:
    """Freeness by three routes that must agree; raises InconsistencyError otherwise."""
    space = intertwiner_space(c, cfg)
    cen = center(c.algebra, cfg)
    cont = containment_residual(c, space, cfg)
    if cont > cfg.eq_tol:
        raise ConstructionError(f"Z(A) (x) tau is not inside the intertwiner space (residual {cont:.3g})")
    free = space.dim == cen.dim
    witness = None
    if not free:
        ztau = span(center_tau_vectors(c, cfg), c.dim_a * c.N, cfg)
        extra = space.basis - ztau.project(space.basis)
        k = int(np.argmax(np.linalg.norm(extra, axis=1)))
        witness = extra[k] / np.linalg.norm(extra[k])

    cp = cp if cp is not None else build(c, cfg)
    rc = cp.relative_commutant
    za = span(cp.embed_a.image(cen.basis), cp.dim, cfg)
    comm_free = subspace_equal(rc, za, cfg)
    # affine slice {z in A' cap (A x| H) : E1(z) = 1}; its dimension is that of ker(E1 on rc)
    e_rc = cp.e1_matrix @ rc.basis.T
    slice_dim = null_space(e_rc, cfg).dim if rc.dim else 0
    unique = slice_dim == 0
    rep = FreenessReport(space.dim, cen.dim, free, rc.dim, comm_free, slice_dim, unique, cont,
                         None if witness is None else witness.tolist())
    if strict and not rep.agreement:
        raise InconsistencyError(
            f"freeness routes disagree for {c.name!r}: intertwiner={free}, "
            f"commutant={comm_free}, conditional expectation={unique} (slice dim {slice_dim})")
    return rep


@dataclass
class GroupFreenessReport:
    free: bool
    dims: dict


def element_intertwiners(algebra: StarAlgebra, alpha: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """{x in A : x alpha(a) = a x for all a}."""
    rows = [algebra.right_matrix(alpha[:, i]) - algebra.left_matrix(a)
            for i, a in enumerate(np.eye(algebra.dim))]
    return null_space(np.concatenate(rows), cfg)


def group_action_free(ga: GroupAction, cfg: ToleranceConfig = DEFAULT_TOL) -> GroupFreenessReport:
    g = ga.group
    dims = {}
    for t in g.elements:
        if t == g.identity:
            continue
        dims[g.names[t]] = element_intertwiners(ga.algebra, ga.matrices[t], cfg).dim
    return GroupFreenessReport(all(d == 0 for d in dims.values()), dims)


# --------------------------------------------------------------------------- innerness


@dataclass
class InnerWitnessReport:
    unitary_defect: float
    conjugation_residual: float
    cocycle_residual: float
    ok: bool


def inner_witness_check(c: Coaction, u, cfg: ToleranceConfig = DEFAULT_TOL) -> InnerWitnessReport:
    """(i) u (a (x) 1) u* = rho(a) on a basis, (ii) (u (x) 1)(u with a unit inserted) = (id (x) Delta0)(u)."""
    u = np.asarray(u, dtype=complex)
    t = c.target
    ud = unitary_defect(t, u)
    if ud > cfg.eq_tol:
        raise NotUnitaryError(f"witness is not unitary (defect {ud:.3g})")
    us = t.adjoint(u)
    one0 = c.hopf0.unit
    conj = 0.0
    for i, a in enumerate(np.eye(c.dim_a)):
        lhs = t.multiply(t.multiply(u, np.kron(a, one0)), us)
        conj = max(conj, max_abs(lhs - c.matrix[:, i]))
    n = c.N
    u2 = u.reshape(c.dim_a, n)
    u13 = np.einsum("ik,j->ijk", u2, one0).ravel()
    triple = TensorAlgebra(t, c.hopf0.algebra)
    lhs = triple.multiply(np.kron(u, one0), u13)
    rhs = np.kron(np.eye(c.dim_a), c.hopf0.comult_matrix) @ u
    coc = max_abs(lhs - rhs)
    return InnerWitnessReport(ud, conj, coc, conj <= cfg.eq_tol and coc <= cfg.eq_tol)


@dataclass
class SubgroupFinding:
    subgroup: list
    status: str                 # "inner", "not_inner", "inconclusive"
    reason: str
    intertwiner_dims: dict = field(default_factory=dict)


@dataclass
class OuterVerdict:
    verdict: str                # "outer", "not_outer", "inconclusive"
    reason: str
    tier: str
    witness_subgroup: list | None = None
    witness: np.ndarray | None = None
    witness_report: InnerWitnessReport | None = None
    findings: list = field(default_factory=list)


def _normalize_unitary(alg: StarAlgebra, x, cfg: ToleranceConfig):
    """Unitary part of an invertible x via (x* x)^(-1/2); None if x is not invertible."""
    xx = alg.multiply(alg.adjoint(x), x)
    lh = alg.hermitian_left(xx)
    vals = np.linalg.eigvalsh((lh + lh.conj().T) / 2)
    if vals[0] <= cfg.rank_tol * max(vals[-1], 1.0):
        return None
    inv_sqrt = alg.functional_calculus(xx, lambda v: 1.0 / np.sqrt(np.maximum(v, 1e-300)))
    return alg.multiply(x, inv_sqrt)


def twisted_group_algebra(k, cocycle: np.ndarray) -> StarAlgebra:
    """C_c[K]: u_s u_t = c(s, t) u_st, u_s* = conj(c(s, s^-1)) u_{s^-1}."""
    n = k.order
    mult = np.zeros((n, n, n), dtype=complex)
    invol = np.zeros((n, n), dtype=complex)
    for s in range(n):
        invol[k.inverse[s], s] = np.conj(cocycle[s, k.inverse[s]])
        for t in range(n):
            mult[s, t, k.mul(s, t)] = cocycle[s, t]
    unit = np.zeros(n, dtype=complex)
    unit[k.identity] = 1
    return StarAlgebra(mult, invol, unit, name="C_c[K]")


def _try_subgroup(c: Coaction, q: HopfQuotient, cfg: ToleranceConfig):
    """Decide whether the coaction restricted to C(K) is inner; returns (finding, witness)."""
    ga = c.group_action
    alg = c.algebra
    k, emb = q.subgroup, q.embedding
    names = [q.group.names[g] for g in emb]
    dims, vs = {}, {k.identity: alg.unit}
    for ki in k.elements:
        if ki == k.identity:
            continue
        space = element_intertwiners(alg, ga.matrices[emb[ki]], cfg)
        dims[k.names[ki]] = space.dim
        if space.dim == 0:
            return SubgroupFinding(names, "not_inner",
                                   f"the automorphism for {k.names[ki]} is not inner", dims), None
        if space.dim == 1:
            v = _normalize_unitary(alg, alg.adjoint(space.basis[0]), cfg)
            if v is None:
                return SubgroupFinding(names, "inconclusive",
                                       f"intertwiner for {k.names[ki]} is not invertible", dims), None
            vs[ki] = v
    if len(vs) < k.order:
        return SubgroupFinding(names, "inconclusive",
                               "algebra has nontrivial center: implementing unitaries not unique up to scalars",
                               dims), None
    # phase cocycle v_s v_t = c(s, t) v_st
    t_a = alg.regular_trace
    norm1 = t_a @ alg.unit
    coc = np.zeros((k.order, k.order), dtype=complex)
    res = 0.0
    for s in k.elements:
        for t in k.elements:
            prod = alg.multiply(vs[s], vs[t])
            st = k.mul(s, t)
            val = (t_a @ alg.multiply(prod, alg.adjoint(vs[st]))) / norm1
            coc[s, t] = val
            res = max(res, max_abs(prod - val * vs[st]))
    if res > cfg.eq_tol:
        return SubgroupFinding(names, "inconclusive", f"phase cocycle not scalar (residual {res:.2g})", dims), None
    tw = twisted_group_algebra(k, coc)
    wd = wedderburn(tw, cfg)
    one_dim = [i for i, n in enumerate(wd.block_sizes) if n == 1]
    if not one_dim:
        return SubgroupFinding(names, "not_inner",
                               "phase cocycle is not a coboundary (twisted group algebra has no 1-dim block)",
                               dims), None
    f = wd.traces[one_dim[0]]
    lam = np.array([f @ np.eye(k.order)[s] for s in k.elements])
    u = sum(np.kron(vs[s] / lam[s], np.eye(k.order)[s]) for s in k.elements)
    sigma = restrict_via_quotient(c, q, cfg)
    rep = inner_witness_check(sigma, u, cfg)
    if not rep.ok:
        raise InconsistencyError(
            f"assembled inner witness failed verification on subgroup {names}: {rep}")
    return SubgroupFinding(names, "inner", "witness assembled from implementing unitaries", dims), (u, rep)


def is_outer(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL, *, use_shortcut: bool = True,
             freeness: FreenessReport | None = None) -> OuterVerdict:
    if c.N == 1:
        return OuterVerdict("outer", "Hopf algebra is trivial, so it has no nontrivial quotient", "T0")
    if use_shortcut:
        fr = freeness if freeness is not None else is_free(c, cfg=cfg)
        if fr.free:
            return OuterVerdict("outer", "coaction is free", "T0")
    if c.group_action is None:
        return OuterVerdict("inconclusive",
                            "Hopf quotients are enumerated only for coactions of function algebras of groups",
                            "T1")
    g = c.group_action.group
    try:
        subs = g.subgroups()
    except UnsupportedSizeError as exc:
        return OuterVerdict("inconclusive", str(exc), "T1")
    src = function_algebra(g)
    findings = []
    for sub in subs:
        if len(sub) == 1:
            continue
        q = HopfQuotient(g, sub, src, cfg)
        finding, wit = _try_subgroup(c, q, cfg)
        findings.append(finding)
        if finding.status == "inner":
            u, rep = wit
            return OuterVerdict("not_outer", f"induced coaction of C(K) is inner for K = {finding.subgroup}",
                                "T1", finding.subgroup, u, rep, findings)
    pending = [f for f in findings if f.status == "inconclusive"]
    if pending:
        return OuterVerdict("inconclusive", pending[0].reason, "T1", findings=findings)
    return OuterVerdict("outer", "no nontrivial subgroup gives an inner induced coaction", "T1",
                        findings=findings)


# --------------------------------------------------------------------------- saturation


@dataclass
class SaturationReport:
    saturated: bool
    rank_vector_dual: tuple
    rank_vector_trivial: tuple
    block_sizes: tuple


def is_saturated(c: Coaction, cp: CrossedProduct | None = None,
                 cfg: ToleranceConfig = DEFAULT_TOL) -> SaturationReport:
    """rho^(1 x| e) ~ (1 x| e) (x) 1 in (A x| H) (x) H, by rank vectors."""
    cp = cp if cp is not None else build(c, cfg)
    dc = dual_coaction(cp, cfg)
    one_e = cp.haar_element
    p1 = dc(one_e)
    p2 = np.kron(one_e, c.hopf.unit)
    w = tensor_wedderburn(dc.target, cp.wedderburn, wedderburn(c.hopf.algebra, cfg))
    for name, p in (("dual image", p1), ("trivial image", p2)):
        if max_abs(dc.target.multiply(p, p) - p) > cfg.eq_tol:
            raise ConstructionError(f"{name} of 1 x| e is not a projection")
    r1, r2 = w.rank_vector(p1), w.rank_vector(p2)
    return SaturationReport(r1 == r2, r1, r2, tuple(w.block_sizes))


# --------------------------------------------------------------------------- Rokhlin diagnostic


@dataclass
class RokhlinReport:
    found: bool
    projection: np.ndarray | None
    subset: tuple | None
    averaged: np.ndarray | None
    candidates: int


def exact_rokhlin_search(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> RokhlinReport:
    """Search central projections p with e . p = (1/N) 1 (a finite diagnostic only)."""
    zs = wedderburn(c.algebra, cfg).central_projections
    m = len(zs)
    if m > MAX_CENTER_PROJECTIONS:
        raise UnsupportedSizeError(f"center has {m} minimal projections; at most {MAX_CENTER_PROJECTIONS} supported")
    e_act = c.action_matrix(c.hopf.haar)
    target = c.algebra.unit / c.N
    count = 0
    for size in range(m + 1):
        for subset in combinations(range(m), size):
            count += 1
            p = sum((zs[i] for i in subset), np.zeros(c.dim_a, dtype=complex))
            ep = e_act @ p
            if max_abs(ep - target) <= cfg.eq_tol:
                return RokhlinReport(True, p, subset, ep, count)
    return RokhlinReport(False, None, None, None, count)


# --------------------------------------------------------------------------- dimensions


def watatani_dims(cp: CrossedProduct, cp2: CrossedProduct | None = None,
                  cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[int, int]:
    """(dim A' cap (A x| H), dim (A x| H)' cap (A x| H x| H0)), computed independently."""
    cp2 = cp2 if cp2 is not None else iterate(cp, cfg)
    left = commutant_in(cp.carrier, cp.embed_a.image(np.eye(cp.source.dim_a)), cfg).dim
    right = commutant_in(cp2.carrier, cp2.embed_a.image(np.eye(cp.dim)), cfg).dim
    return left, right


def crossed_is_simple(cp: CrossedProduct) -> bool:
    return is_simple(cp.wedderburn)


# --------------------------------------------------------------------------- theorem suite

SUITE_CHECKS = ("a", "b", "c", "d", "e", "f", "g")
SUITE_TITLES = {
    "a": "group freeness agrees with coaction freeness",
    "b": "intertwiner, commutant and expectation routes agree",
    "c": "free implies outer or inconclusive",
    "d": "freeness invariant under amplification and perturbation",
    "e": "simple A and free implies simple crossed product",
    "f": "relative commutant dimensions agree across the dual inclusion",
    "g": "simple A and free implies free dual coaction",
}


@dataclass
class SuiteCell:
    status: str          # "pass", "fail", "n/a"
    details: dict


@dataclass
class SuiteRow:
    name: str
    cells: dict


@dataclass
class SuiteReport:
    rows: list

    @property
    def all_pass(self) -> bool:
        return all(cell.status != "fail" for row in self.rows for cell in row.cells.values())

    def failures(self) -> list[tuple[str, str]]:
        return [(row.name, k) for row in self.rows for k, cell in row.cells.items() if cell.status == "fail"]


def _cell(ok: bool | None, **details) -> SuiteCell:
    return SuiteCell("n/a" if ok is None else ("pass" if ok else "fail"), details)


def suite_row(name: str, c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL, *,
              amplify_sizes=(2, 3), perturbations: int = 2, seed: int = 1000) -> SuiteRow:
    from .coaction import amplify, sample_perturbations

    cells = {}
    cp = build(c, cfg)
    try:
        fr = is_free(c, cp, cfg, strict=False)
    except ConstructionError as exc:
        return SuiteRow(name, {k: _cell(False, error=str(exc)) for k in SUITE_CHECKS})
    free = fr.free

    if c.group_action is not None:
        gf = group_action_free(c.group_action, cfg)
        cells["a"] = _cell(gf.free == free, group_free=gf.free, coaction_free=free,
                           element_intertwiner_dims=gf.dims)
    else:
        cells["a"] = _cell(None, reason="not a group action")

    cells["b"] = _cell(fr.agreement, intertwiner=fr.free, commutant=fr.commutant_route_free,
                       cond_exp=fr.cond_exp_unique, intertwiner_dim=fr.intertwiner_dim,
                       center_dim=fr.expected_space_dim, commutant_dim=fr.commutant_dim,
                       slice_dim=fr.slice_dim)

    if free:
        ov = is_outer(c, cfg, use_shortcut=False)
        cells["c"] = _cell(ov.verdict != "not_outer", free=True, verdict=ov.verdict, reason=ov.reason)
    else:
        cells["c"] = _cell(None, free=False)

    amp = {}
    for n in amplify_sizes:
        amp[str(n)] = is_free(amplify(c, n, cfg), cfg=cfg).free
    pert = [is_free(p, cfg=cfg).free for p in sample_perturbations(c, perturbations, seed, cfg)]
    cells["d"] = _cell(all(v == free for v in amp.values()) and all(v == free for v in pert),
                       free=free, amplified=amp, perturbed=pert)

    simple_a = is_simple(wedderburn(c.algebra, cfg))
    cp_simple = crossed_is_simple(cp)
    if simple_a and free:
        cells["e"] = _cell(cp_simple, simple_algebra=True, free=True, crossed_simple=cp_simple)
    else:
        cells["e"] = _cell(None, simple_algebra=simple_a, free=free, crossed_simple=cp_simple)

    cp2 = iterate(cp, cfg)
    left, right = watatani_dims(cp, cp2, cfg)
    cells["f"] = _cell(left == right, relative_commutant_dim=left, dual_relative_commutant_dim=right)

    dual_free = is_free(dual_coaction(cp, cfg), cp2, cfg).free
    details = dict(simple_algebra=simple_a, free=free, dual_free=dual_free,
                   equivalence_holds=free == dual_free)
    cells["g"] = _cell(dual_free if (simple_a and free) else None, **details)
    return SuiteRow(name, cells)


def theorem_suite(entries, cfg: ToleranceConfig = DEFAULT_TOL, **kw) -> SuiteReport:
    """Run checks (a)-(g) on (name, coaction) pairs, in input order."""
    return SuiteReport([suite_row(name, c, cfg, **kw) for name, c in entries])
