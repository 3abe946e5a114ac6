"""Coactions rho: A -> A (x) H0 and the induced H-actions.

A coaction is stored as a matrix ``R`` of shape (dim A * N, dim A) acting on
coordinates; rho(a) has Kronecker coordinates ``i * N + k`` in A (x) H0.
The Hopf algebra H acting on A is ``hopf0.dual`` (pairing = identity matrix),
and h . a = (id (x) h)(rho(a)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cstar import (
    BlockAlgebra,
    StarAlgebra,
    TensorAlgebra,
    hom_residuals,
    kron_to_blocks,
    tensor,
    unitary_defect,
)
from .errors import ActionError, CocycleError, CoactionError, NotUnitaryError, ParentMismatchError
from .groups import FiniteGroup
from .hopf import HopfAlgebra, HopfQuotient, function_algebra, structure_residual
from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig, max_abs, null_space, numerical_rank


# --------------------------------------------------------------------------- group actions


class GroupAction:
    """Action of a finite group by *-automorphisms, one coordinate matrix per element."""

    def __init__(self, group: FiniteGroup, algebra: StarAlgebra, matrices, *,
                 name: str = "", cfg: ToleranceConfig = DEFAULT_TOL, check: bool = True):
        mats = [np.asarray(m, dtype=complex) for m in matrices]
        if len(mats) != group.order:
            raise ActionError(f"expected {group.order} automorphism matrices, got {len(mats)}")
        for t, m in enumerate(mats):
            if m.shape != (algebra.dim, algebra.dim):
                raise ActionError(f"matrix for element {t} has shape {m.shape}, "
                                  f"expected {(algebra.dim, algebra.dim)}")
        self.group = group
        self.algebra = algebra
        self.matrices = mats
        self.name = name
        self.residuals = action_residuals(self) if check else {}
        if check:
            for key, r in self.residuals.items():
                if r > cfg.eq_tol:
                    raise ActionError(f"automorphism check failed, residual {r:.3g} ({key})")

    @classmethod
    def from_unitaries(cls, group: FiniteGroup, algebra: BlockAlgebra, unitaries, **kw) -> "GroupAction":
        """alpha_t = Ad(u_t) for unitaries given as coordinate vectors."""
        for t, u in enumerate(unitaries):
            if unitary_defect(algebra, u) > kw.get("cfg", DEFAULT_TOL).eq_tol:
                raise NotUnitaryError(f"implementing element for {t} is not unitary")
        return cls(group, algebra, [algebra.conjugation_matrix(u) for u in unitaries], **kw)

    def __call__(self, t: int, a) -> np.ndarray:
        return self.matrices[t] @ np.asarray(a, dtype=complex)

    def restrict(self, embedding) -> "GroupAction":
        """Restriction to a subgroup given by (K, list K-index -> G-index)."""
        k, emb = embedding
        return GroupAction(k, self.algebra, [self.matrices[g] for g in emb], name=f"{self.name}|K")


def action_residuals(ga: GroupAction) -> dict[str, float]:
    g = ga.group
    eye = np.eye(ga.algebra.dim)
    out = {"identity": max_abs(ga.matrices[g.identity] - eye)}
    comp = 0.0
    for s in g.elements:
        for t in g.elements:
            comp = max(comp, max_abs(ga.matrices[s] @ ga.matrices[t] - ga.matrices[g.mul(s, t)]))
    out["composition"] = comp
    hom = 0.0
    for m in ga.matrices:
        hom = max(hom, *hom_residuals(ga.algebra, ga.algebra, m).values())
    out["automorphism"] = hom
    return out


# --------------------------------------------------------------------------- coactions


@dataclass
class CoactionReport:
    residuals: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)
    span_dim: int = 0
    expected_span_dim: int = 0

    def add(self, name, residual, ok):
        self.residuals[name] = float(residual)
        self.passed[name] = bool(ok)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.passed.items() if not v]


class Coaction:
    """Verified coaction of ``hopf0`` on ``algebra``."""

    def __init__(self, algebra: StarAlgebra, hopf0: HopfAlgebra, matrix, *, name: str = "",
                 group_action: GroupAction | None = None,
                 cfg: ToleranceConfig = DEFAULT_TOL, check: bool = True):
        r = np.asarray(matrix, dtype=complex)
        shape = (algebra.dim * hopf0.N, algebra.dim)
        if r.shape != shape:
            raise CoactionError(f"coaction matrix has shape {r.shape}, expected {shape}")
        self.algebra = algebra
        self.hopf0 = hopf0
        self.matrix = r
        self.name = name
        self.group_action = group_action
        self.cfg = cfg
        self.report = verify_coaction(self, cfg) if check else None
        if check and not self.report.ok:
            bad = {k: self.report.residuals[k] for k in self.report.failures()}
            raise CoactionError(f"not a coaction: {bad}")

    def __repr__(self):
        return f"Coaction({self.name!r}, dim A={self.dim_a}, N={self.N})"

    @property
    def A(self) -> StarAlgebra:
        return self.algebra

    @property
    def hopf(self) -> HopfAlgebra:
        """The Hopf algebra acting on A (dual of hopf0)."""
        return self.hopf0.dual

    @property
    def N(self) -> int:
        return self.hopf0.N

    @property
    def dim_a(self) -> int:
        return self.algebra.dim

    @cached_property
    def target(self) -> TensorAlgebra:
        return TensorAlgebra(self.algebra, self.hopf0.algebra)

    def __call__(self, a) -> np.ndarray:
        return self.matrix @ np.asarray(a, dtype=complex)

    @cached_property
    def action_tensor(self) -> np.ndarray:
        """T[p] = matrix of a -> b_p . a for the basis b_p of H."""
        return np.transpose(self.matrix.reshape(self.dim_a, self.N, self.dim_a), (1, 0, 2))

    def action_matrix(self, h) -> np.ndarray:
        return np.tensordot(np.asarray(h, dtype=complex), self.action_tensor, axes=(0, 0))

    def is_group_coaction(self) -> bool:
        return self.group_action is not None


def verify_coaction(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> CoactionReport:
    rep = CoactionReport()
    da, n = c.dim_a, c.N
    r = c.matrix
    t = c.target
    # nondegeneracy: span of rho(a_i)(a_j (x) phi_k) is everything
    stacked = np.concatenate([t.left_matrix(r[:, i]) for i in range(da)], axis=1)
    rank = numerical_rank(stacked, cfg)
    rep.span_dim, rep.expected_span_dim = rank, da * n
    rep.add("nondegenerate", da * n - rank, rank == da * n)
    eps = c.hopf0.counit.reshape(1, n)
    cres = max_abs(np.kron(np.eye(da), eps) @ r - np.eye(da))
    rep.add("counit", cres, cres <= cfg.eq_tol)
    lhs = np.kron(r, np.eye(n)) @ r
    rhs = np.kron(np.eye(da), c.hopf0.comult_matrix) @ r
    coassoc = max_abs(lhs - rhs)
    rep.add("coassociative", coassoc, coassoc <= cfg.eq_tol)
    for k, v in hom_residuals(c.algebra, t, r).items():
        rep.add(k, v, v <= cfg.eq_tol)
    return rep


def induced_action(c: Coaction, h, a) -> np.ndarray:
    """h . a = (id (x) h)(rho(a)) with <phi, h> = phi @ h."""
    rho_a = c(a).reshape(c.dim_a, c.N)
    return rho_a @ np.asarray(h, dtype=complex)


def from_group_action(ga: GroupAction, *, name: str = "", hopf0: HopfAlgebra | None = None,
                      cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    """rho(a) = sum_t alpha_t(a) (x) delta_t, a coaction of C(G)."""
    hopf0 = hopf0 if hopf0 is not None else function_algebra(ga.group)
    alphas = np.array(ga.matrices)                       # (t, i, j)
    r = np.transpose(alphas, (1, 0, 2)).reshape(ga.algebra.dim * ga.group.order, ga.algebra.dim)
    return Coaction(ga.algebra, hopf0, r, name=name or ga.name, group_action=ga, cfg=cfg)


def trivial_coaction(algebra: StarAlgebra, hopf0: HopfAlgebra, *, name: str = "",
                     cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    r = np.kron(np.eye(algebra.dim), hopf0.unit.reshape(-1, 1))
    return Coaction(algebra, hopf0, r, name=name or "trivial", cfg=cfg)


def trivial_group_coaction(group: FiniteGroup, algebra: StarAlgebra, *, name: str = "",
                           cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    """Trivial coaction of C(G), remembered as the trivial group action."""
    ga = GroupAction(group, algebra, [np.eye(algebra.dim)] * group.order, name=name)
    return from_group_action(ga, name=name or "trivial", cfg=cfg)


def amplify(c: Coaction, n: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    """rho (x) id on A (x) M_n, with the H0 leg kept last."""
    if n < 1:
        raise ValueError("amplification size must be positive")
    if n == 1:
        return c
    da, nh = c.dim_a, c.N
    mn = BlockAlgebra([n])
    m2 = n * n
    # Kronecker coordinates (i * m2 + m) on A (x) M_n
    r3 = c.matrix.reshape(da, nh, da)
    big = np.einsum("ikj,mp->imkjp", r3, np.eye(m2)).reshape(da * m2 * nh, da * m2)
    if isinstance(c.algebra, BlockAlgebra):
        alg = tensor(c.algebra, mn)
        p = kron_to_blocks(c.algebra, mn)
        big = np.kron(p, np.eye(nh)) @ big @ p.T
    else:
        alg = TensorAlgebra(c.algebra, mn)
    ga = None
    if c.group_action is not None:
        ga_mats = []
        for m in c.group_action.matrices:
            km = np.kron(m, np.eye(m2))
            ga_mats.append(p @ km @ p.T if isinstance(c.algebra, BlockAlgebra) else km)
        ga = GroupAction(c.group_action.group, alg, ga_mats, name=f"{c.group_action.name}(x)M{n}")
    return Coaction(alg, c.hopf0, big, name=f"{c.name}(x)M{n}", group_action=ga, cfg=cfg)


# --------------------------------------------------------------------------- perturbations


@dataclass
class CocycleReport:
    unitary_defect: float
    cocycle_residual: float

    def ok(self, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
        return self.unitary_defect <= cfg.eq_tol and self.cocycle_residual <= cfg.eq_tol


def _triple(c: Coaction) -> TensorAlgebra:
    return TensorAlgebra(c.target, c.hopf0.algebra)


def cocycle_residual(c: Coaction, w) -> float:
    """max |(w (x) 1)(rho (x) id)(w) - (id (x) Delta0)(w)| in A (x) H0 (x) H0."""
    w = np.asarray(w, dtype=complex)
    n = c.N
    lhs = _triple(c).multiply(np.kron(w, c.hopf0.unit), np.kron(c.matrix, np.eye(n)) @ w)
    rhs = np.kron(np.eye(c.dim_a), c.hopf0.comult_matrix) @ w
    return max_abs(lhs - rhs)


def check_cocycle(c: Coaction, w) -> CocycleReport:
    return CocycleReport(unitary_defect(c.target, w), cocycle_residual(c, w))


def perturb(c: Coaction, w, cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    """Ad(w) o rho for a unitary cocycle w in A (x) H0; rejects anything else."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (c.dim_a * c.N,):
        raise CocycleError(f"cocycle has length {w.shape}, expected {c.dim_a * c.N}")
    ud = unitary_defect(c.target, w)
    if ud > cfg.eq_tol:
        raise NotUnitaryError(f"perturbing element is not unitary (defect {ud:.3g})")
    res = cocycle_residual(c, w)
    if res > cfg.eq_tol:
        raise CocycleError(f"cocycle identity fails with residual {res:.3g}")
    t = c.target
    r = t.left_matrix(w) @ t.right_matrix(t.adjoint(w)) @ c.matrix
    return Coaction(c.algebra, c.hopf0, r, name=f"{c.name}~", cfg=cfg)


def coboundary(c: Coaction, v) -> np.ndarray:
    """w = (v (x) 1) rho(v*), a cocycle for every unitary v in A."""
    v = np.asarray(v, dtype=complex)
    return c.target.multiply(np.kron(v, c.hopf0.unit), c(c.algebra.adjoint(v)))


def random_unitary(alg: StarAlgebra, seed: int, scale: float = 1.0) -> np.ndarray:
    """exp(i h) for a fixed-seed random self-adjoint h."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim)
    h = scale * (x + alg.adjoint(x)) / 2
    return alg.functional_calculus(h, lambda vals: np.exp(1j * vals))


def sample_perturbations(c: Coaction, count: int, seed: int = 0,
                         cfg: ToleranceConfig = DEFAULT_TOL) -> list[Coaction]:
    """Perturbations of c by coboundary cocycles built from fixed-seed random unitaries."""
    out = []
    for k in range(count):
        v = random_unitary(c.algebra, seed + k)
        out.append(perturb(c, coboundary(c, v), cfg))
    return out


# --------------------------------------------------------------------------- restriction


def restrict_via_quotient(c: Coaction, q: HopfQuotient, cfg: ToleranceConfig = DEFAULT_TOL) -> Coaction:
    """sigma = (id (x) pi0) o rho, a coaction of the quotient Hopf algebra."""
    if structure_residual(c.hopf0, q.source) > cfg.eq_tol:
        raise ParentMismatchError("coaction is not a coaction of the quotient's source Hopf algebra")
    r = np.kron(np.eye(c.dim_a), q.pi0) @ c.matrix
    ga = None
    if c.group_action is not None and c.group_action.group is q.group:
        ga = GroupAction(q.subgroup, c.algebra, [c.group_action.matrices[g] for g in q.embedding],
                         name=f"{c.group_action.name}|K")
    return Coaction(c.algebra, q.target, r, name=f"{c.name}|K", group_action=ga, cfg=cfg)


# --------------------------------------------------------------------------- fixed points


def fixed_point_space(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """{a : rho(a) = a (x) 1}."""
    return null_space(c.matrix - np.kron(np.eye(c.dim_a), c.hopf0.unit.reshape(-1, 1)), cfg)


def averaged_fixed_space(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """{a : e . a = a} for the Haar projection e of H."""
    return null_space(c.action_matrix(c.hopf.haar) - np.eye(c.dim_a), cfg)
