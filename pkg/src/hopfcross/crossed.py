"""Crossed products A x| H as structure-constant *-algebras on A (x) H.

Coordinates (i * N + j) stand for a_i x| h_j. Conventions:

    (a x| h)(b x| k) = a (h_(1) . b) x| h_(2) k
    (a x| h)*        = (h*_(1) . a*) x| h*_(2)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .coaction import Coaction, fixed_point_space
from .cstar import (
    StarAlgebra,
    StarHom,
    WedderburnData,
    center,
    commutant_in,
    presentation_residuals,
    projection_defect,
    wedderburn,
)
from .errors import ConstructionError, NotCStarError
from .hopf import comatrix_units
from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig, max_abs


class CrossedProduct:
    def __init__(self, source: Coaction, cfg: ToleranceConfig = DEFAULT_TOL):
        self.source = source
        self.cfg = cfg
        c = source
        a, h = c.algebra, c.hopf
        da, n = c.dim_a, c.N
        act = c.action_tensor                       # act[p, r, k]: coeff of a_r in b_p . a_k
        mult = np.einsum("jpq,prk,irm,qln->ijklmn", h.comult, act, a.mult, h.algebra.mult,
                         optimize=True).reshape(da * n, da * n, da * n)
        invol = np.einsum("sj,spn,pmr,ri->mnij", h.algebra.invol, h.comult, act, a.invol,
                          optimize=True).reshape(da * n, da * n)
        unit = np.kron(a.unit, h.unit)
        self.carrier = StarAlgebra(mult, invol, unit, name=f"{a.name} x| {h.name}")
        self.residuals = presentation_residuals(self.carrier)
        bad = {k: v for k, v in self.residuals.items() if v > cfg.eq_tol}
        if bad:
            raise ConstructionError(f"crossed product fails *-algebra axioms: {bad}")
        try:
            self.carrier._whitening
        except NotCStarError as exc:
            raise ConstructionError("crossed product has no faithful positive trace") from exc
        self.embed_a = StarHom(a, self.carrier, np.kron(np.eye(da), h.unit.reshape(-1, 1)), cfg=cfg)
        self.embed_h_matrix = np.kron(a.unit.reshape(-1, 1), np.eye(n))
        fact = self._factorization_residual()
        if fact > cfg.eq_tol:
            raise ConstructionError(f"(a x| 1)(1 x| h) != a x| h, residual {fact:.3g}")

    def __repr__(self):
        return f"CrossedProduct({self.source.name!r}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def N(self) -> int:
        return self.source.N

    @property
    def algebra(self) -> StarAlgebra:
        return self.source.algebra

    @property
    def hopf(self):
        return self.source.hopf

    def element(self, a, h) -> np.ndarray:
        """a x| h."""
        return np.kron(np.asarray(a, dtype=complex), np.asarray(h, dtype=complex))

    def embed_h(self, h) -> np.ndarray:
        return self.embed_h_matrix @ np.asarray(h, dtype=complex)

    def _factorization_residual(self) -> float:
        da, n = self.source.dim_a, self.N
        res = 0.0
        for i in range(da):
            ai = self.embed_a(np.eye(da)[i])
            prods = self.carrier.left_matrix(ai) @ self.embed_h_matrix
            res = max(res, max_abs(prods - np.eye(da * n)[:, i * n:(i + 1) * n]))
        return res

    @cached_property
    def wedderburn(self) -> WedderburnData:
        return wedderburn(self.carrier, self.cfg)

    @cached_property
    def e1_matrix(self) -> np.ndarray:
        """E1(a x| h) = tau(h) a."""
        tau = self.source.hopf0.haar
        return np.kron(np.eye(self.source.dim_a), tau.reshape(1, -1))

    def E1(self, x) -> np.ndarray:
        return self.e1_matrix @ np.asarray(x, dtype=complex)

    @cached_property
    def haar_element(self) -> np.ndarray:
        """1 x| e."""
        return self.embed_h(self.hopf.haar)

    @cached_property
    def relative_commutant(self) -> Subspace:
        """A' intersected with the crossed product, through embed_a."""
        return commutant_in(self.carrier, self.embed_a.image(np.eye(self.source.dim_a)), self.cfg)


def build(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> CrossedProduct:
    return CrossedProduct(c, cfg)


def E1(cp: CrossedProduct, x) -> np.ndarray:
    return cp.E1(x)


# --------------------------------------------------------------------------- E1 checks


@dataclass
class ExpectationReport:
    idempotence: float
    unital: float
    bimodule: float
    gram_min_eigenvalue: float
    positive_on_basis: float

    def ok(self, cfg: ToleranceConfig = DEFAULT_TOL, gram_floor: float = 1e-10) -> bool:
        return (max(self.idempotence, self.unital, self.bimodule) <= cfg.eq_tol
                and self.gram_min_eigenvalue > gram_floor
                and self.positive_on_basis >= -cfg.eq_tol)


def faithful_state(cp: CrossedProduct) -> np.ndarray:
    """omega = (normalized regular trace of A) o E1, a faithful state on the carrier."""
    a = cp.source.algebra
    phi = a.regular_trace / (a.regular_trace @ a.unit)
    return phi @ cp.e1_matrix


def e1_gram(cp: CrossedProduct) -> np.ndarray:
    """G[i, j] = omega(x_i* x_j) over the carrier basis."""
    car = cp.carrier
    omega = faithful_state(cp)
    return car.invol.T @ (car.mult @ omega)


def check_expectation(cp: CrossedProduct) -> ExpectationReport:
    da = cp.source.dim_a
    car = cp.carrier
    e, emb = cp.e1_matrix, cp.embed_a.matrix
    idem = max_abs(e @ emb @ e - e)
    unital = max_abs(e @ emb - np.eye(da))
    bim = 0.0
    basis_a = np.eye(da)
    basis_c = np.eye(cp.dim)
    for i in range(da):
        la = car.left_matrix(emb[:, i])
        for j in range(da):
            rb = car.right_matrix(emb[:, j])
            lhs = e @ la @ rb                                  # E1((a x|1) x (b x|1)), columns x
            rhs = cp.source.algebra.left_matrix(basis_a[i]) @ cp.source.algebra.right_matrix(basis_a[j]) @ e
            bim = max(bim, max_abs(lhs - rhs))
    g = e1_gram(cp)
    ev = np.linalg.eigvalsh((g + g.conj().T) / 2)
    # E1(x* x) is positive in A: check its spectrum through the regular representation
    pos = np.inf
    for x in basis_c:
        y = e @ car.multiply(car.adjoint(x), x)
        lh = cp.source.algebra.hermitian_left(y)
        pos = min(pos, float(np.linalg.eigvalsh((lh + lh.conj().T) / 2)[0]))
    return ExpectationReport(idem, unital, bim, float(ev[0]), pos)


def comatrix_product_residual(cp: CrossedProduct) -> float:
    """(a x| w_ij)(b x| 1) = sum_l a [w_il . b] x| w_lj on comatrix units of H."""
    c = cp.source
    cu = comatrix_units(c.hopf, cp.cfg)["w"]
    car = cp.carrier
    a_basis = np.eye(c.dim_a)
    res = 0.0
    for (k, i, j), w in cu.items():
        for ai in a_basis:
            for bj in a_basis:
                lhs = car.multiply(cp.element(ai, w), cp.embed_a(bj))
                rhs = np.zeros(cp.dim, dtype=complex)
                for (k2, i2, l), wil in cu.items():
                    if k2 != k or i2 != i:
                        continue
                    inner = c.algebra.multiply(ai, c.action_matrix(wil) @ bj)
                    rhs += cp.element(inner, cu[(k, l, j)])
                res = max(res, max_abs(lhs - rhs))
    return res


# --------------------------------------------------------------------------- dual coaction


def dual_coaction(cp: CrossedProduct, cfg: ToleranceConfig | None = None) -> Coaction:
    """rho^(a x| h) = (a x| h_(1)) (x) h_(2), a coaction of H on the carrier."""
    cfg = cfg or cp.cfg
    c = cp.source
    da, n = c.dim_a, c.N
    d = c.hopf.comult                                     # d[j, p, q]
    r = np.einsum("ik,jpq->ipqkj", np.eye(da), d).reshape(da * n * n, da * n)
    try:
        return Coaction(cp.carrier, c.hopf, r, name=f"dual({c.name})", cfg=cfg)
    except Exception as exc:
        raise ConstructionError(f"dual coaction failed verification: {exc}") from exc


def iterate(cp: CrossedProduct, cfg: ToleranceConfig | None = None) -> CrossedProduct:
    """(A x| H) x| H0 for the dual coaction."""
    return CrossedProduct(dual_coaction(cp, cfg), cfg or cp.cfg)


@dataclass
class SecondDualComparison:
    blocks: tuple
    expected: tuple
    match: bool

    def as_dict(self) -> dict:
        return {"blocks": list(self.blocks), "expected": list(self.expected), "match": self.match}


def second_dual_compare(cp2: CrossedProduct, a: StarAlgebra, n: int,
                        cfg: ToleranceConfig = DEFAULT_TOL) -> SecondDualComparison:
    """Block sizes of cp2 against those of A (x) M_n (a necessary isomorphism check)."""
    got = tuple(sorted(cp2.wedderburn.block_sizes))
    expected = tuple(sorted(k * n for k in wedderburn(a, cfg).block_sizes))
    return SecondDualComparison(got, expected, got == expected)


# --------------------------------------------------------------------------- fixed points


@dataclass
class FixedPointAlgebra:
    space: Subspace
    closure_residual: float

    @property
    def dim(self) -> int:
        return self.space.dim


def fixed_point_algebra(c: Coaction, cfg: ToleranceConfig = DEFAULT_TOL) -> FixedPointAlgebra:
    """{a : rho(a) = a (x) 1}, certified closed under product and adjoint."""
    space = fixed_point_space(c, cfg)
    alg = c.algebra
    res = 0.0
    for x in space.basis:
        res = max(res, space.residual(alg.adjoint(x)))
        for y in space.basis:
            res = max(res, space.residual(alg.multiply(x, y)))
    if res > cfg.eq_tol:
        raise ConstructionError(f"fixed points are not a *-subalgebra (residual {res:.3g})")
    return FixedPointAlgebra(space, res)


def haar_projection_defect(cp: CrossedProduct) -> float:
    return projection_defect(cp.carrier, cp.haar_element)


def center_dim(alg: StarAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    return center(alg, cfg).dim

