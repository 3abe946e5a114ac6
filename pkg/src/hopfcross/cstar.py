"""Finite-dimensional C*-algebras.

Two carriers share one coordinate interface:

* :class:`StarAlgebra` -- an abstract *-algebra given by structure constants
  ``b_i b_j = sum_k mult[i, j, k] b_k``, an antilinear involution whose i-th
  column holds the coordinates of ``b_i*``, and a unit vector.
* :class:`BlockAlgebra` -- a direct sum of full matrix blocks, coordinatised by
  the concatenated row-major blocks (the matrix-unit basis).

Elements are plain complex coordinate vectors; :class:`AlgElement` is a
block-matrix view for :class:`BlockAlgebra`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ConstructionError,
    NotCStarError,
    NotProjectionError,
    ParentMismatchError,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    hermitian_sqrt,
    max_abs,
    null_space,
)

INTEGER_TOL = 1e-6
FULL_CHECK_DIM = 64
_SEEDS = (20240917, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def certify_integer(value: float, what: str) -> int:
    r = int(round(value))
    if abs(value - r) >= INTEGER_TOL:
        raise NotCStarError(f"{what} = {value!r} is not an integer within {INTEGER_TOL}")
    return r


class StarAlgebra:
    """*-algebra presented by structure constants."""

    def __init__(self, mult, invol, unit, *, name: str = ""):
        mult = np.asarray(mult, dtype=complex)
        unit = np.asarray(unit, dtype=complex).ravel()
        d = unit.shape[0]
        invol = np.asarray(invol, dtype=complex)
        if mult.shape != (d, d, d):
            raise ValueError(f"mult must have shape {(d, d, d)}, got {mult.shape}")
        if invol.shape != (d, d):
            raise ValueError(f"invol must have shape {(d, d)}, got {invol.shape}")
        self.dim = d
        self._mult = mult
        self.invol = invol
        self.unit = unit
        self.name = name
        self._wedderburn = {}

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, name={self.name!r})"

    @property
    def mult(self) -> np.ndarray:
        return self._mult

    def multiply(self, x, y) -> np.ndarray:
        xm = np.tensordot(np.asarray(x, dtype=complex), self.mult, axes=(0, 0))
        return np.asarray(y, dtype=complex) @ xm

    def adjoint(self, x) -> np.ndarray:
        return self.invol @ np.conj(np.asarray(x, dtype=complex))

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        return np.tensordot(np.asarray(x, dtype=complex), self.mult, axes=(0, 0)).T

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of x -> x y."""
        return np.tensordot(self.mult, np.asarray(y, dtype=complex), axes=(1, 0)).T

    def basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    @cached_property
    def regular_trace(self) -> np.ndarray:
        """t(x) = Tr(L_x) as a coordinate functional; faithful and positive on C*-algebras."""
        return np.einsum("ijj->i", self.mult)

    @cached_property
    def trace_gram(self) -> np.ndarray:
        """G[i, j] = t(b_i* b_j), so t(x* y) = x^H G y."""
        return self.invol.T @ (self.mult @ self.regular_trace)

    @cached_property
    def _whitening(self) -> tuple[np.ndarray, np.ndarray]:
        g = self.trace_gram
        try:
            return hermitian_sqrt(g)
        except np.linalg.LinAlgError as exc:
            raise NotCStarError("regular trace form is not positive definite") from exc

    def hermitian_left(self, x) -> np.ndarray:
        """Left multiplication in trace-orthonormal coordinates (Hermitian if x = x*)."""
        w, winv = self._whitening
        return w @ self.left_matrix(x) @ winv

    def functional_calculus(self, x, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """f(x) for self-adjoint x, f applied to real eigenvalues."""
        w, winv = self._whitening
        lh = self.hermitian_left(x)
        vals, vecs = np.linalg.eigh((lh + lh.conj().T) / 2)
        fl = (vecs * f(vals)) @ vecs.conj().T
        return winv @ fl @ w @ self.unit

    def norm(self, x) -> float:
        xx = self.multiply(self.adjoint(x), x)
        lh = self.hermitian_left(xx)
        vals = np.linalg.eigvalsh((lh + lh.conj().T) / 2)
        return float(np.sqrt(max(vals[-1], 0.0)))

    def commutator(self, x, y) -> np.ndarray:
        return self.multiply(x, y) - self.multiply(y, x)

    def is_projection(self, p, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
        return projection_defect(self, p) <= cfg.eq_tol

    def is_unitary(self, u, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
        return unitary_defect(self, u) <= cfg.eq_tol

    def presentation(self) -> "StarAlgebra":
        return StarAlgebra(self.mult, self.invol, self.unit, name=self.name)


def projection_defect(alg: StarAlgebra, p) -> float:
    p = np.asarray(p, dtype=complex)
    return max(max_abs(alg.multiply(p, p) - p), max_abs(alg.adjoint(p) - p))


def unitary_defect(alg: StarAlgebra, u) -> float:
    u = np.asarray(u, dtype=complex)
    us = alg.adjoint(u)
    return max(max_abs(alg.multiply(us, u) - alg.unit), max_abs(alg.multiply(u, us) - alg.unit))


def presentation_residuals(alg: StarAlgebra, *, probes: int = 6) -> dict[str, float]:
    """Residuals of the *-algebra axioms: unit, involution, antimultiplicativity, associativity.

    Full-basis checks up to FULL_CHECK_DIM; above that, fixed-seed random probes.
    """
    d = alg.dim
    eye = np.eye(d)
    out = {
        "unit": max(max_abs(alg.left_matrix(alg.unit) - eye), max_abs(alg.right_matrix(alg.unit) - eye)),
        "involutive": max_abs(alg.invol @ np.conj(alg.invol) - eye),
    }
    m = alg.mult
    if d <= FULL_CHECK_DIM:
        assoc = 0.0
        flat = m.reshape(d, d * d)
        for i in range(d):
            lhs = (m[i] @ flat).reshape(d, d, d)             # (b_i b_j) b_k
            rhs = (m.reshape(d * d, d) @ m[i]).reshape(d, d, d)  # b_i (b_j b_k)
            assoc = max(assoc, max_abs(lhs - rhs))
        out["associative"] = assoc
        lhs = np.einsum("mk,ijk->ijm", alg.invol, np.conj(m))
        rhs = np.einsum("pj,qi,pqm->ijm", alg.invol, alg.invol, m, optimize=True)
        out["antimultiplicative"] = max_abs(lhs - rhs)
    else:
        rng = np.random.default_rng(_SEEDS[0])
        assoc = anti = 0.0
        for _ in range(probes):
            x, y, z = (v / np.linalg.norm(v) for v in (rng.normal(size=d) + 1j * rng.normal(size=d) for _ in range(3)))
            assoc = max(assoc, max_abs(alg.multiply(alg.multiply(x, y), z)
                                       - alg.multiply(x, alg.multiply(y, z))))
            anti = max(anti, max_abs(alg.adjoint(alg.multiply(x, y))
                                     - alg.multiply(alg.adjoint(y), alg.adjoint(x))))
        out["associative"] = assoc
        out["antimultiplicative"] = anti
    return out


# --------------------------------------------------------------------------- blocks


class BlockAlgebra(StarAlgebra):
    """Direct sum of full matrix algebras M_{n_1} + ... + M_{n_m}."""

    def __init__(self, block_dims: Sequence[int], *, name: str = ""):
        dims = tuple(int(n) for n in block_dims)
        if not dims or any(n <= 0 for n in dims):
            raise ValueError(f"block dimensions must be positive integers, got {block_dims!r}")
        self.block_dims = dims
        self.offsets = tuple(int(x) for x in np.cumsum((0,) + tuple(n * n for n in dims))[:-1])
        d = sum(n * n for n in dims)
        mult = np.zeros((d, d, d), dtype=complex)
        invol = np.zeros((d, d), dtype=complex)
        unit = np.zeros(d, dtype=complex)
        for off, n in zip(self.offsets, dims):
            for i in range(n):
                unit[off + i * n + i] = 1
                for j in range(n):
                    invol[off + j * n + i, off + i * n + j] = 1
                    for k in range(n):
                        mult[off + i * n + j, off + j * n + k, off + i * n + k] = 1
        super().__init__(mult, invol, unit, name=name or "+".join(f"M{n}" for n in dims))

    @property
    def coordinate_dim(self) -> int:
        return self.dim

    def to_blocks(self, x) -> list[np.ndarray]:
        x = np.asarray(x, dtype=complex)
        return [x[off:off + n * n].reshape(n, n) for off, n in zip(self.offsets, self.block_dims)]

    def from_blocks(self, blocks) -> np.ndarray:
        if len(blocks) != len(self.block_dims):
            raise ValueError("wrong number of blocks")
        parts = []
        for b, n in zip(blocks, self.block_dims):
            b = np.asarray(b, dtype=complex)
            if b.shape != (n, n):
                raise ValueError(f"block of shape {b.shape} does not match {n}x{n}")
            parts.append(b.ravel())
        return np.concatenate(parts)

    def element(self, blocks) -> "AlgElement":
        return AlgElement(self, tuple(np.asarray(b, dtype=complex) for b in blocks))

    def as_element(self, x) -> "AlgElement":
        return AlgElement(self, tuple(self.to_blocks(x)))

    def identity_element(self) -> "AlgElement":
        return self.as_element(self.unit)

    # blockwise overrides: exact and much cheaper than the structure tensor
    def multiply(self, x, y) -> np.ndarray:
        return self.from_blocks([a @ b for a, b in zip(self.to_blocks(x), self.to_blocks(y))])

    def adjoint(self, x) -> np.ndarray:
        return self.from_blocks([a.conj().T for a in self.to_blocks(x)])

    def norm(self, x) -> float:
        return max(float(np.linalg.norm(b, 2)) for b in self.to_blocks(x))

    def matrix_unit(self, k: int, i: int, j: int) -> np.ndarray:
        n = self.block_dims[k]
        v = self.zero()
        v[self.offsets[k] + i * n + j] = 1
        return v

    def conjugation_matrix(self, u) -> np.ndarray:
        """Coordinate matrix of Ad(u): a -> u a u*."""
        ub = self.to_blocks(u)
        cols = []
        for b in np.eye(self.dim):
            cols.append(self.from_blocks([v @ a @ v.conj().T for v, a in zip(ub, self.to_blocks(b))]))
        return np.array(cols).T


@dataclass(frozen=True, eq=False)
class AlgElement:
    parent: BlockAlgebra
    blocks: tuple

    def __post_init__(self):
        if len(self.blocks) != len(self.parent.block_dims):
            raise ValueError("wrong number of blocks for parent algebra")
        for b, n in zip(self.blocks, self.parent.block_dims):
            if np.shape(b) != (n, n):
                raise ValueError(f"block of shape {np.shape(b)} does not match {n}x{n}")

    def _same(self, other):
        if not isinstance(other, AlgElement) or other.parent is not self.parent:
            raise ParentMismatchError("elements belong to different algebras")

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._same(other)
            return AlgElement(self.parent, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return AlgElement(self.parent, tuple(a * other for a in self.blocks))

    __rmul__ = lambda self, c: AlgElement(self.parent, tuple(c * a for a in self.blocks))

    def __add__(self, other):
        self._same(other)
        return AlgElement(self.parent, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        self._same(other)
        return AlgElement(self.parent, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def adjoint(self) -> "AlgElement":
        return AlgElement(self.parent, tuple(a.conj().T for a in self.blocks))

    def norm(self) -> float:
        return max(float(np.linalg.norm(a, 2)) for a in self.blocks)

    def to_vector(self) -> np.ndarray:
        return self.parent.from_blocks(self.blocks)

    def allclose(self, other, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        self._same(other)
        return all(max_abs(a - b) <= tol for a, b in zip(self.blocks, other.blocks))


def multiply(x: AlgElement, y: AlgElement) -> AlgElement:
    return x * y


def adjoint(x: AlgElement) -> AlgElement:
    return x.adjoint()


def norm(x: AlgElement) -> float:
    return x.norm()


# --------------------------------------------------------------------------- tensors


def tensor(a: BlockAlgebra, b: BlockAlgebra) -> BlockAlgebra:
    """Block algebra of A (x) B: blocks n_i m_j in lexicographic (i, j) order."""
    return BlockAlgebra([n * m for n in a.block_dims for m in b.block_dims],
                        name=f"({a.name})x({b.name})")


def tensor_element(x: AlgElement, y: AlgElement, target: BlockAlgebra | None = None) -> AlgElement:
    target = target or tensor(x.parent, y.parent)
    return target.element([np.kron(p, q) for p in x.blocks for q in y.blocks])


def kron_to_blocks(a: BlockAlgebra, b: BlockAlgebra) -> np.ndarray:
    """Permutation P with P @ kron(x, y) = coordinates of x (x) y in ``tensor(a, b)``."""
    t = tensor(a, b)
    perm = np.zeros((t.dim, a.dim * b.dim))
    for k, (n, oa) in enumerate(zip(a.block_dims, a.offsets)):
        for l, (m, ob) in enumerate(zip(b.block_dims, b.offsets)):
            blk = k * len(b.block_dims) + l
            toff, tn = t.offsets[blk], t.block_dims[blk]
            for r in range(n):
                for s in range(n):
                    for u in range(m):
                        for v in range(m):
                            src = (oa + r * n + s) * b.dim + (ob + u * m + v)
                            dst = toff + (r * m + u) * tn + (s * m + v)
                            perm[dst, src] = 1
    return perm


class TensorAlgebra(StarAlgebra):
    """A (x) B in Kronecker coordinates (index i * dim B + j); structure tensor built lazily."""

    def __init__(self, a: StarAlgebra, b: StarAlgebra, *, name: str = ""):
        self.factors = (a, b)
        self.dim = a.dim * b.dim
        self.invol = np.kron(a.invol, b.invol)
        self.unit = np.kron(a.unit, b.unit)
        self.name = name or f"({a.name})x({b.name})"
        self._wedderburn = {}

    @cached_property
    def mult(self) -> np.ndarray:
        a, b = self.factors
        t = np.einsum("ijm,kln->ikjlmn", a.mult, b.mult, optimize=True)
        return t.reshape(self.dim, self.dim, self.dim)

    def _split(self, x):
        a, b = self.factors
        return np.asarray(x, dtype=complex).reshape(a.dim, b.dim)

    def multiply(self, x, y) -> np.ndarray:
        a, b = self.factors
        return np.einsum("ik,jl,ijm,kln->mn", self._split(x), self._split(y), a.mult, b.mult,
                         optimize=True).ravel()

    def adjoint(self, x) -> np.ndarray:
        a, b = self.factors
        return (a.invol @ np.conj(self._split(x)) @ b.invol.T).ravel()

    def left_matrix(self, x) -> np.ndarray:
        a, b = self.factors
        t = np.einsum("ik,ijm,kln->mnjl", self._split(x), a.mult, b.mult, optimize=True)
        return t.reshape(self.dim, self.dim)

    def right_matrix(self, y) -> np.ndarray:
        a, b = self.factors
        t = np.einsum("jl,ijm,kln->mnik", self._split(y), a.mult, b.mult, optimize=True)
        return t.reshape(self.dim, self.dim)

    @cached_property
    def regular_trace(self) -> np.ndarray:
        a, b = self.factors
        return np.kron(a.regular_trace, b.regular_trace)

    @cached_property
    def trace_gram(self) -> np.ndarray:
        a, b = self.factors
        return np.kron(a.trace_gram, b.trace_gram)


def tensor_presentation(a: StarAlgebra, b: StarAlgebra) -> TensorAlgebra:
    return TensorAlgebra(a, b)


# --------------------------------------------------------------------------- *-homs


def hom_residuals(domain: StarAlgebra, codomain: StarAlgebra, matrix) -> dict[str, float]:
    phi = np.asarray(matrix, dtype=complex)
    if phi.shape != (codomain.dim, domain.dim):
        raise ValueError(f"map has shape {phi.shape}, expected {(codomain.dim, domain.dim)}")
    mult_res = 0.0
    for i in range(domain.dim):
        lhs = phi @ domain.left_matrix(np.eye(domain.dim)[i])    # phi(b_i b_j), columns j
        rhs = codomain.left_matrix(phi[:, i]) @ phi               # phi(b_i) phi(b_j)
        mult_res = max(mult_res, max_abs(lhs - rhs))
    star_res = max_abs(phi @ domain.invol - codomain.invol @ np.conj(phi))
    unit_res = max_abs(phi @ domain.unit - codomain.unit)
    return {"multiplicative": mult_res, "star": star_res, "unital": unit_res}


class StarHom:
    """Unital *-homomorphism given by its coordinate matrix; verified on construction."""

    def __init__(self, domain: StarAlgebra, codomain: StarAlgebra, matrix, *,
                 cfg: ToleranceConfig = DEFAULT_TOL, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.matrix = np.asarray(matrix, dtype=complex)
        self.residuals = hom_residuals(domain, codomain, self.matrix) if check else {}
        bad = {k: v for k, v in self.residuals.items() if v > cfg.eq_tol}
        if bad:
            raise ConstructionError(f"not a unital *-homomorphism: {bad}")

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=complex)

    def image(self, vectors) -> np.ndarray:
        return np.asarray(vectors, dtype=complex) @ self.matrix.T


# --------------------------------------------------------------------------- commutants


def commutant_in(ambient: StarAlgebra, generators, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """{x in ambient : x g = g x for every generator g} as a Subspace of coordinates."""
    gens = np.atleast_2d(np.asarray(generators, dtype=complex))
    if gens.shape[0] == 0 or gens.size == 0:
        return null_space(np.zeros((0, ambient.dim)), cfg)
    return null_space(commutator_rows(ambient, gens), cfg)


def commutator_rows(ambient: StarAlgebra, gens: np.ndarray) -> np.ndarray:
    """Stacked matrices of x -> x g - g x, one block of rows per generator."""
    if isinstance(ambient, TensorAlgebra):
        rows = [ambient.right_matrix(g) - ambient.left_matrix(g) for g in gens]
        return np.concatenate(rows, axis=0)
    d = ambient.dim
    m = ambient.mult
    left = (gens @ m.reshape(d, d * d)).reshape(-1, d, d)                          # [g, j, out]
    right = (gens @ m.transpose(1, 0, 2).reshape(d, d * d)).reshape(-1, d, d)      # [g, i, out]
    return (right - left).transpose(0, 2, 1).reshape(-1, d)


def center(alg: StarAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    if isinstance(alg, BlockAlgebra):
        vecs = [alg.from_blocks([np.eye(n) if k == j else np.zeros((n, n))
                                 for k, n in enumerate(alg.block_dims)])
                for j in range(len(alg.block_dims))]
        vecs = [v / np.linalg.norm(v) for v in vecs]
        return Subspace(alg.dim, np.array(vecs), cfg.eq_tol)
    return commutant_in(alg, alg.basis(), cfg)


# --------------------------------------------------------------------------- Wedderburn


@dataclass(frozen=True, eq=False)
class WedderburnData:
    """Block decomposition: minimal central projections, block sizes, normalized block traces.

    ``traces[k] @ x`` is tr_k(x z_k) with tr_k(z_k) = 1.
    """

    algebra: StarAlgebra
    central_projections: tuple
    block_sizes: tuple
    traces: tuple

    @property
    def n_blocks(self) -> int:
        return len(self.block_sizes)

    def ranks(self, p) -> np.ndarray:
        """Real-valued n_k tr_k(p z_k) (uncertified)."""
        p = np.asarray(p, dtype=complex)
        return np.array([n * (f @ p) for n, f in zip(self.block_sizes, self.traces)])

    def rank_vector(self, p) -> tuple[int, ...]:
        vals = self.ranks(p)
        if max_abs(vals.imag) >= INTEGER_TOL:
            raise NotCStarError(f"rank vector has imaginary part {vals.imag!r}")
        return tuple(certify_integer(v.real, f"rank in block {k}") for k, v in enumerate(vals))


def _sort_key(z: np.ndarray):
    key = []
    for c in np.round(z, 6):
        key.extend((-c.real + 0.0, -c.imag + 0.0))
    return tuple(key)


def _finish_wedderburn(alg, zs, sizes, traces) -> WedderburnData:
    order = sorted(range(len(zs)), key=lambda k: _sort_key(zs[k]))
    return WedderburnData(alg, tuple(zs[k] for k in order), tuple(sizes[k] for k in order),
                          tuple(traces[k] for k in order))


def _cluster(vals: np.ndarray, gap: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] > gap:
            groups.append([i])
        else:
            groups[-1].append(i)
    return groups


def _spectral_projections(alg: StarAlgebra, x, restrict: np.ndarray | None = None):
    """Spectral projections of a self-adjoint x via its Hermitian left-regular matrix.

    Returns (eigenvalue clusters, projection coordinate vectors, min gap ratio).
    ``restrict`` is an orthonormal column basis (whitened coordinates) of an
    invariant subspace to diagonalize on.
    """
    w, winv = alg._whitening
    lh = alg.hermitian_left(x)
    lh = (lh + lh.conj().T) / 2
    if restrict is not None:
        lh = restrict.conj().T @ lh @ restrict
        lh = (lh + lh.conj().T) / 2
    vals, vecs = np.linalg.eigh(lh)
    if restrict is not None:
        vecs = restrict @ vecs
    spread = max(float(vals[-1] - vals[0]), 1.0)
    groups = _cluster(vals, 1e-6 * spread)
    projs = []
    for g in groups:
        q = vecs[:, g]
        projs.append(winv @ (q @ q.conj().T) @ w @ alg.unit)
    gaps = np.diff([vals[g[0]] for g in groups]) if len(groups) > 1 else np.array([spread])
    return groups, projs, float(np.min(gaps) / spread)


def _block_wedderburn(alg: BlockAlgebra) -> WedderburnData:
    zs, sizes, traces = [], [], []
    for k, n in enumerate(alg.block_dims):
        z = sum(alg.matrix_unit(k, i, i) for i in range(n))
        f = np.zeros(alg.dim, dtype=complex)
        for i in range(n):
            f[alg.offsets[k] + i * n + i] = 1.0 / n
        zs.append(z)
        sizes.append(n)
        traces.append(f)
    return _finish_wedderburn(alg, zs, sizes, traces)


def wedderburn(alg: StarAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> WedderburnData:
    """Wedderburn data of a finite-dimensional C*-algebra (cached per algebra and tolerance)."""
    cached = alg._wedderburn.get(cfg)
    if cached is not None:
        return cached
    if isinstance(alg, BlockAlgebra):
        data = _block_wedderburn(alg)
    else:
        data = _numeric_wedderburn(alg, cfg)
    alg._wedderburn[cfg] = data
    return data


def _numeric_wedderburn(alg: StarAlgebra, cfg: ToleranceConfig) -> WedderburnData:
    cen = commutant_in(alg, alg.basis(), cfg)
    m = cen.dim
    t = alg.regular_trace
    best = None
    for seed in _SEEDS:
        rng = np.random.default_rng(seed)
        coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
        z = coeffs @ cen.basis
        z = (z + alg.adjoint(z)) / 2
        groups, projs, sep = _spectral_projections(alg, z)
        if len(groups) == m and sep > 1e-4:
            best = projs
            break
        if len(groups) == m and best is None:
            best = projs
    if best is None:
        raise NotCStarError(f"could not split a center of dimension {m} into minimal projections")
    zs, sizes, traces = [], [], []
    for z in best:
        dimz = t @ z
        if abs(dimz.imag) >= INTEGER_TOL:
            raise NotCStarError(f"dim(zA) has imaginary part {dimz.imag}")
        n2 = certify_integer(dimz.real, "dim(z A)")
        n = certify_integer(np.sqrt(n2), "sqrt(dim(z A))")
        zs.append(z)
        sizes.append(n)
        traces.append((t @ alg.right_matrix(z)) / n2)
    total = sum(zs)
    if max_abs(total - alg.unit) > cfg.eq_tol:
        raise NotCStarError("central projections do not sum to the unit")
    for z in zs:
        if projection_defect(alg, z) > cfg.eq_tol:
            raise NotCStarError("spectral projection of the center is not a projection")
        if max_abs(alg.right_matrix(z) - alg.left_matrix(z)) > cfg.eq_tol:
            raise NotCStarError("spectral projection of the center is not central")
    return _finish_wedderburn(alg, zs, sizes, traces)


def tensor_wedderburn(tensor_alg: TensorAlgebra, wa: WedderburnData, wb: WedderburnData) -> WedderburnData:
    """Wedderburn data of A (x) B from that of the factors (blocks z_i (x) z'_j)."""
    zs, sizes, traces = [], [], []
    for za, na, fa in zip(wa.central_projections, wa.block_sizes, wa.traces):
        for zb, nb, fb in zip(wb.central_projections, wb.block_sizes, wb.traces):
            zs.append(np.kron(za, zb))
            sizes.append(na * nb)
            traces.append(np.kron(fa, fb))
    return _finish_wedderburn(tensor_alg, zs, sizes, traces)


def is_simple(w: WedderburnData) -> bool:
    return w.n_blocks == 1


def mvn_equivalent(p, q, w: WedderburnData, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Murray-von Neumann equivalence of projections via equal rank vectors."""
    alg = w.algebra
    for name, x in (("p", p), ("q", q)):
        if projection_defect(alg, x) > cfg.eq_tol:
            raise NotProjectionError(f"{name} is not a projection (defect {projection_defect(alg, x):.3g})")
    return w.rank_vector(p) == w.rank_vector(q)


# --------------------------------------------------------------------------- matrix units


def matrix_units(alg: StarAlgebra, cfg: ToleranceConfig = DEFAULT_TOL) -> dict[tuple[int, int, int], np.ndarray]:
    """System of matrix units {v^k_ij} indexed by (block, row, column)."""
    if isinstance(alg, BlockAlgebra):
        units = {}
        for k in range(len(alg.block_dims)):
            n = alg.block_dims[k]
            for i in range(n):
                for j in range(n):
                    units[(k, i, j)] = alg.matrix_unit(k, i, j)
        return units
    w = wedderburn(alg, cfg)
    units = {}
    wh, winv = alg._whitening
    for k, (z, n) in enumerate(zip(w.central_projections, w.block_sizes)):
        if n == 1:
            units[(k, 0, 0)] = z
            continue
        pz = wh @ alg.left_matrix(z) @ winv
        vals, vecs = np.linalg.eigh((pz + pz.conj().T) / 2)
        rangeb = vecs[:, vals > 0.5]
        projs = None
        for seed in _SEEDS:
            rng = np.random.default_rng(seed)
            r = rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim)
            x = alg.multiply((r + alg.adjoint(r)) / 2, z)
            groups, ps, sep = _spectral_projections(alg, x, restrict=rangeb)
            if len(groups) == n and all(len(g) == n for g in groups) and sep > 1e-4:
                projs = ps
                break
        if projs is None:
            raise NotCStarError(f"could not find {n} orthogonal minimal projections in block {k}")
        p1 = projs[0]
        first_row = [p1]
        lp1 = alg.left_matrix(p1)
        t = alg.regular_trace
        for pj in projs[1:]:
            cands = lp1 @ alg.right_matrix(pj)           # columns: p1 b_i pj
            col = int(np.argmax(np.linalg.norm(cands, axis=0)))
            y = cands[:, col]
            c = (t @ alg.multiply(y, alg.adjoint(y))) / (t @ p1)
            first_row.append(y / np.sqrt(c.real))
        for i in range(n):
            for j in range(n):
                units[(k, i, j)] = alg.multiply(alg.adjoint(first_row[i]), first_row[j])
    res = matrix_unit_residual(alg, units)
    if res > cfg.eq_tol:
        raise NotCStarError(f"matrix-unit relations fail with residual {res:.3g}")
    return units


def matrix_unit_residual(alg: StarAlgebra, units: dict) -> float:
    res = max_abs(sum(v for (k, i, j), v in units.items() if i == j) - alg.unit)
    keys = list(units)
    for a in keys:
        k, i, j = a
        res = max(res, max_abs(alg.adjoint(units[a]) - units[(k, j, i)]))
        for b in keys:
            l, m, n = b
            prod = alg.multiply(units[a], units[b])
            expected = units[(k, i, n)] if (k == l and j == m) else 0.0
            res = max(res, max_abs(prod - expected))
    return res


def to_blocks(alg: StarAlgebra, x, units: dict | None = None,
              cfg: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Coordinates of x in the matrix-unit basis, as block matrices."""
    w = wedderburn(alg, cfg)
    units = units or matrix_units(alg, cfg)
    out = []
    for k, n in enumerate(w.block_sizes):
        blk = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                blk[i, j] = n * (w.traces[k] @ alg.multiply(units[(k, j, i)], x))
        out.append(blk)
    return out
