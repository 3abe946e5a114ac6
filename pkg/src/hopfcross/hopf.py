"""Finite-dimensional C*-Hopf algebras in a preferred basis.

Everything is a tensor in the basis b_0..b_{N-1}:

* ``comult[i, j, k]``: Delta(b_i) = sum_jk comult[i, j, k] b_j (x) b_k
* ``counit[i]`` = eps(b_i)
* ``antipode[:, i]`` = coordinates of S(b_i)

The dual is built on the dual basis, so the canonical pairing between a Hopf
algebra and its dual is the identity matrix: <phi, h> = phi @ h.
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
    matrix_units,
    presentation_residuals,
    projection_defect,
)
from .errors import HopfAxiomError, InvalidGroupError
from .groups import FiniteGroup
from .linalg import DEFAULT_TOL, ToleranceConfig, max_abs, null_space, numerical_rank


class HopfAlgebra:
    def __init__(self, algebra: StarAlgebra, comult, counit, antipode, *,
                 name: str = "", labels=None):
        n = algebra.dim
        comult = np.asarray(comult, dtype=complex)
        counit = np.asarray(counit, dtype=complex).ravel()
        antipode = np.asarray(antipode, dtype=complex)
        if comult.shape != (n, n, n):
            raise ValueError(f"comult must have shape {(n, n, n)}, got {comult.shape}")
        if counit.shape != (n,):
            raise ValueError(f"counit must have length {n}")
        if antipode.shape != (n, n):
            raise ValueError(f"antipode must have shape {(n, n)}")
        self.algebra = algebra
        self.comult = comult
        self.counit = counit
        self.antipode = antipode
        self.name = name or algebra.name
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
        self._dual = None

    def __repr__(self):
        return f"HopfAlgebra(N={self.N}, name={self.name!r})"

    @property
    def N(self) -> int:
        return self.algebra.dim

    @property
    def unit(self) -> np.ndarray:
        return self.algebra.unit

    @cached_property
    def comult_matrix(self) -> np.ndarray:
        """(N^2, N) matrix of Delta in Kronecker coordinates."""
        return self.comult.reshape(self.N, self.N * self.N).T

    @cached_property
    def mult_matrix(self) -> np.ndarray:
        """(N, N^2) matrix of multiplication m: H (x) H -> H."""
        return self.algebra.mult.reshape(self.N * self.N, self.N).T

    def coproduct(self, x) -> np.ndarray:
        return self.comult_matrix @ np.asarray(x, dtype=complex)

    @cached_property
    def tensor_square(self) -> TensorAlgebra:
        return TensorAlgebra(self.algebra, self.algebra)

    @cached_property
    def haar_solution_dim(self) -> int:
        return _haar_space(self).dim

    @cached_property
    def haar(self) -> np.ndarray:
        """The distinguished projection: h e = e h = eps(h) e, eps(e) = 1."""
        return haar_projection(self)

    @property
    def dual(self) -> "HopfAlgebra":
        if self._dual is None:
            d = dual(self)
            d._dual = self
            self._dual = d
        return self._dual

    def is_trivial(self) -> bool:
        return self.N == 1

    def change_basis(self, q) -> "HopfAlgebra":
        """Same Hopf algebra in the basis whose i-th vector has old coordinates q[:, i]."""
        q = np.asarray(q, dtype=complex)
        qi = np.linalg.inv(q)
        a = self.algebra
        mult = np.einsum("ai,bj,abc,kc->ijk", q, q, a.mult, qi, optimize=True)
        invol = qi @ a.invol @ np.conj(q)
        alg = StarAlgebra(mult, invol, qi @ a.unit, name=a.name)
        comult = np.einsum("ai,abc,jb,kc->ijk", q, self.comult, qi, qi, optimize=True)
        return HopfAlgebra(alg, comult, self.counit @ q, qi @ self.antipode @ q,
                           name=self.name, labels=[f"q{i}" for i in range(self.N)])


def _haar_space(h: HopfAlgebra, cfg: ToleranceConfig = DEFAULT_TOL):
    alg = h.algebra
    rows = []
    for i, b in enumerate(np.eye(h.N)):
        rows.append(alg.left_matrix(b) - h.counit[i] * np.eye(h.N))
        rows.append(alg.right_matrix(b) - h.counit[i] * np.eye(h.N))
    return null_space(np.concatenate(rows), cfg)


def haar_projection(h: HopfAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    space = _haar_space(h, cfg)
    if space.dim != 1:
        raise HopfAxiomError(f"Haar condition has a {space.dim}-dimensional solution space, expected 1")
    v = space.basis[0]
    s = h.counit @ v
    if abs(s) < cfg.eq_tol:
        raise HopfAxiomError("Haar element has zero counit")
    return v / s


@dataclass
class AxiomReport:
    residuals: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)

    def add(self, name: str, residual: float, ok: bool):
        self.residuals[name] = float(residual)
        self.passed[name] = bool(ok)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    @property
    def max_residual(self) -> float:
        return max((r for k, r in self.residuals.items() if not k.startswith("cstar")), default=0.0)

    def failures(self) -> list[str]:
        return [k for k, v in self.passed.items() if not v]


def verify_hopf_axioms(h: HopfAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> AxiomReport:
    rep = AxiomReport()
    n = h.N
    eye = np.eye(n)
    tol = cfg.eq_tol
    for k, r in presentation_residuals(h.algebra).items():
        rep.add(f"algebra_{k}", r, r <= tol)
    gram_ev = np.linalg.eigvalsh((h.algebra.trace_gram + h.algebra.trace_gram.conj().T) / 2)
    rep.add("cstar_trace_positive", float(gram_ev[0]), gram_ev[0] > cfg.rank_tol * max(gram_ev[-1], 1.0))

    dm = h.comult_matrix
    for k, r in hom_residuals(h.algebra, h.tensor_square, dm).items():
        rep.add(f"comult_{k}", r, r <= tol)
    coassoc = max_abs(np.kron(dm, eye) @ dm - np.kron(eye, dm) @ dm)
    rep.add("coassociative", coassoc, coassoc <= tol)
    eps = h.counit.reshape(1, n)
    cl = max_abs(np.kron(eps, eye) @ dm - eye)
    cr = max_abs(np.kron(eye, eps) @ dm - eye)
    rep.add("counit", max(cl, cr), max(cl, cr) <= tol)
    for k, r in hom_residuals(h.algebra, BlockAlgebra([1]), eps).items():
        rep.add(f"counit_{k}", r, r <= tol)
    m = h.mult_matrix
    target = np.outer(h.unit, h.counit)
    al = max_abs(m @ np.kron(h.antipode, eye) @ dm - target)
    ar = max_abs(m @ np.kron(eye, h.antipode) @ dm - target)
    rep.add("antipode", max(al, ar), max(al, ar) <= tol)
    j, s = h.algebra.invol, h.antipode
    star = max_abs(j @ np.conj(s) @ np.conj(j) @ s - eye)
    rep.add("antipode_star", star, star <= tol)

    space = _haar_space(h, cfg)
    rep.add("haar_unique", abs(space.dim - 1), space.dim == 1)
    if space.dim == 1:
        e = space.basis[0] / (h.counit @ space.basis[0])
        pd = projection_defect(h.algebra, e)
        rep.add("haar_projection", pd, pd <= tol)
        inv = 0.0
        for i, b in enumerate(eye):
            inv = max(inv, max_abs(h.algebra.multiply(b, e) - h.counit[i] * e),
                      max_abs(h.algebra.multiply(e, b) - h.counit[i] * e))
        rep.add("haar_invariant", inv, inv <= tol)
    return rep


def dual(h: HopfAlgebra) -> HopfAlgebra:
    """Dual Hopf algebra on the dual basis (product = transpose of Delta, and so on)."""
    a = h.algebra
    mult = np.transpose(h.comult, (1, 2, 0))
    comult = np.transpose(a.mult, (2, 0, 1))
    invol = (np.conj(a.invol) @ h.antipode).T
    alg = StarAlgebra(mult, invol, h.counit.copy(), name=f"({a.name})^0")
    name = h.name[:-2] if h.name.endswith("^0") else f"{h.name}^0"
    return HopfAlgebra(alg, comult, a.unit.copy(), h.antipode.T.copy(), name=name,
                       labels=[f"<{l}>" for l in h.labels])


def dual_dual_residual(h: HopfAlgebra) -> float:
    dd = dual(dual(h))
    return max(max_abs(dd.algebra.mult - h.algebra.mult), max_abs(dd.algebra.invol - h.algebra.invol),
               max_abs(dd.algebra.unit - h.algebra.unit), max_abs(dd.comult - h.comult),
               max_abs(dd.counit - h.counit), max_abs(dd.antipode - h.antipode))


def structure_residual(h: HopfAlgebra, k: HopfAlgebra) -> float:
    """Max difference of all structure constants (same basis assumed)."""
    if h.N != k.N:
        return float("inf")
    return max(max_abs(h.algebra.mult - k.algebra.mult), max_abs(h.algebra.invol - k.algebra.invol),
               max_abs(h.algebra.unit - k.algebra.unit), max_abs(h.comult - k.comult),
               max_abs(h.counit - k.counit), max_abs(h.antipode - k.antipode))


def pairing(h: HopfAlgebra, phi, x) -> complex:
    """<phi, x> for phi in the dual (dual-basis coordinates) and x in h."""
    return complex(np.asarray(phi) @ np.asarray(x))


# --------------------------------------------------------------------------- groups


def group_algebra(g: FiniteGroup) -> HopfAlgebra:
    """CG: Delta u_t = u_t (x) u_t, eps(u_t) = 1, S(u_t) = u_{t^-1}, u_t* = u_{t^-1}."""
    n = g.order
    mult = np.zeros((n, n, n), dtype=complex)
    invol = np.zeros((n, n), dtype=complex)
    comult = np.zeros((n, n, n), dtype=complex)
    antipode = np.zeros((n, n), dtype=complex)
    unit = np.zeros(n, dtype=complex)
    unit[g.identity] = 1
    for s in range(n):
        invol[g.inverse[s], s] = 1
        antipode[g.inverse[s], s] = 1
        comult[s, s, s] = 1
        for t in range(n):
            mult[s, t, g.mul(s, t)] = 1
    alg = StarAlgebra(mult, invol, unit, name=f"C[{g.name}]")
    return HopfAlgebra(alg, comult, np.ones(n), antipode, name=f"C[{g.name}]",
                       labels=[f"u_{x}" for x in g.names])


def function_algebra(g: FiniteGroup) -> HopfAlgebra:
    """C(G): delta functions, Delta d_t = sum_s d_s (x) d_{s^-1 t}, eps(d_t) = [t = e]."""
    n = g.order
    mult = np.zeros((n, n, n), dtype=complex)
    comult = np.zeros((n, n, n), dtype=complex)
    antipode = np.zeros((n, n), dtype=complex)
    counit = np.zeros(n, dtype=complex)
    counit[g.identity] = 1
    for t in range(n):
        mult[t, t, t] = 1
        antipode[g.inverse[t], t] = 1
        for s in range(n):
            comult[t, s, g.mul(g.inverse[s], t)] = 1
    alg = StarAlgebra(mult, np.eye(n), np.ones(n), name=f"C({g.name})")
    return HopfAlgebra(alg, comult, counit, antipode, name=f"C({g.name})",
                       labels=[f"d_{x}" for x in g.names])


def trivial_hopf() -> HopfAlgebra:
    alg = StarAlgebra(np.ones((1, 1, 1)), np.ones((1, 1)), np.ones(1), name="C")
    return HopfAlgebra(alg, np.ones((1, 1, 1)), np.ones(1), np.ones((1, 1)), name="C", labels=["1"])


# --------------------------------------------------------------------------- units


def comatrix_units(h: HopfAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Basis {w^k_ij} of h dual to a system of matrix units {phi^k_ij} of the dual.

    Returns {"phi": {(k,i,j): coords in dual}, "w": {(k,i,j): coords in h}}.
    """
    phis = matrix_units(h.dual.algebra, cfg)
    keys = sorted(phis)
    big_phi = np.array([phis[k] for k in keys])     # rows = phi's in dual-basis coords
    w = np.linalg.inv(big_phi)                      # columns: <phi_a, w_b> = delta_ab
    return {"phi": phis, "w": {k: w[:, i] for i, k in enumerate(keys)}}


def find_member(family: dict, target, tol: float = DEFAULT_TOL.eq_tol):
    """Key of the family member equal to target, or None."""
    for key, v in family.items():
        if max_abs(np.asarray(v) - target) <= tol:
            return key
    return None


# --------------------------------------------------------------------------- quotients


class HopfQuotient:
    """Restriction C(G) -> C(K) for a subgroup K (the surjective Hopf map pi^0)."""

    def __init__(self, group: FiniteGroup, subset, source: HopfAlgebra | None = None,
                 cfg: ToleranceConfig = DEFAULT_TOL):
        self.group = group
        self.source = source if source is not None else function_algebra(group)
        if self.source.N != group.order:
            raise InvalidGroupError("source Hopf algebra does not match the group order")
        self.subgroup, self.embedding = group.subgroup(subset)
        self.target = function_algebra(self.subgroup)
        pi0 = np.zeros((self.subgroup.order, group.order), dtype=complex)
        for k, g in enumerate(self.embedding):
            pi0[k, g] = 1
        self.pi0 = pi0
        self.residuals = quotient_residuals(self)
        bad = {k: v for k, v in self.residuals.items() if v > cfg.eq_tol}
        if bad:
            raise HopfAxiomError(f"restriction map is not a surjective Hopf *-homomorphism: {bad}")

    @property
    def pi(self) -> np.ndarray:
        """Dual injection CK -> CG (transpose of pi^0)."""
        return self.pi0.T

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(self.embedding)

    def __repr__(self):
        return f"HopfQuotient(K={sorted(self.embedding)})"


def quotient_residuals(q: HopfQuotient) -> dict[str, float]:
    src, tgt, p = q.source, q.target, q.pi0
    out = dict(hom_residuals(src.algebra, tgt.algebra, p))
    out["comult"] = max_abs(np.kron(p, p) @ src.comult_matrix - tgt.comult_matrix @ p)
    out["counit"] = max_abs(tgt.counit @ p - src.counit)
    out["antipode"] = max_abs(tgt.antipode @ p - p @ src.antipode)
    out["surjective"] = float(tgt.N - numerical_rank(p))
    return out


def enumerate_subgroups(g: FiniteGroup, max_order: int | None = None) -> list[HopfQuotient]:
    from .groups import MAX_SUBGROUP_ORDER
    src = function_algebra(g)
    subs = g.subgroups(max_order or MAX_SUBGROUP_ORDER)
    return [HopfQuotient(g, k, src) for k in subs]
