"""Dense complex linear algebra with an explicit, deterministic tolerance policy.

All rank decisions treat singular values below ``rank_tol * sigma_max`` as
zero, and also anything below the absolute floor ``ZERO_FLOOR`` (so a matrix of
pure rounding noise has rank 0 rather than full rank).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbientDimensionError


@dataclass(frozen=True)
class ToleranceConfig:
    rank_tol: float = 1e-9
    eq_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "eq_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = ToleranceConfig()
ZERO_FLOOR = 1e-12


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _svd(m: np.ndarray):
    # a tall matrix only needs the thin factorization to expose all right singular vectors
    return np.linalg.svd(m, full_matrices=m.shape[0] < m.shape[1])


def _rank_from_singular_values(s: np.ndarray, cfg: ToleranceConfig) -> int:
    if s.size == 0:
        return 0
    return int(np.sum(s > max(cfg.rank_tol * s[0], ZERO_FLOOR)))


def numerical_rank(m, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    m = as_matrix(m)
    if m.size == 0:
        return 0
    return _rank_from_singular_values(np.linalg.svd(m, compute_uv=False), cfg)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of orthonormal rows of ``basis`` inside C^ambient_dim."""

    ambient_dim: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL.eq_tol

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(-1, self.ambient_dim)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def project(self, vectors) -> np.ndarray:
        """Orthogonal projection of row vectors onto the subspace."""
        v = np.atleast_2d(np.asarray(vectors, dtype=complex))
        if v.shape[1] != self.ambient_dim:
            raise AmbientDimensionError(
                f"vector length {v.shape[1]} != ambient dimension {self.ambient_dim}")
        return (v @ self.basis.conj().T) @ self.basis

    def residual(self, vectors) -> float:
        v = np.atleast_2d(np.asarray(vectors, dtype=complex))
        if v.size == 0:
            return 0.0
        r = v - self.project(v)
        return float(np.max(np.linalg.norm(r, axis=1)))

    def contains_vectors(self, vectors, tol: float | None = None) -> bool:
        return self.residual(vectors) <= (self.tol if tol is None else tol)

    def orthonormality_defect(self) -> float:
        if self.dim == 0:
            return 0.0
        return max_abs(self.basis @ self.basis.conj().T - np.eye(self.dim))

    def canonical_basis(self) -> np.ndarray:
        """Basis with each vector's largest entry made real positive (for reports)."""
        out = self.basis.copy()
        for row in out:
            k = int(np.argmax(np.abs(row) - 1e-12 * np.arange(len(row))))
            if abs(row[k]) > 0:
                row *= abs(row[k]) / row[k]
        return out


def span(vectors, ambient_dim: int | None = None, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    v = np.asarray(vectors, dtype=complex)
    if ambient_dim is None:
        ambient_dim = v.shape[-1]
    v = v.reshape(-1, ambient_dim)
    if v.shape[0] == 0:
        return Subspace(ambient_dim, np.zeros((0, ambient_dim)), cfg.eq_tol)
    _, s, vh = _svd(v)
    return Subspace(ambient_dim, vh[:_rank_from_singular_values(s, cfg)], cfg.eq_tol)


def null_space(m, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of ``{v : m v = 0}``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("null_space expects a 2-d matrix")
    n = m.shape[1]
    if m.shape[0] == 0:
        return Subspace(n, np.eye(n), cfg.eq_tol)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    _, s, vh = _svd(m)
    return Subspace(n, vh[_rank_from_singular_values(s, cfg):].conj(), cfg.eq_tol)


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise AmbientDimensionError(
            f"ambient dimensions differ: {u.ambient_dim} vs {v.ambient_dim}")


def subspace_contains(u: Subspace, v: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff span(v) is inside span(u)."""
    _check_ambient(u, v)
    if v.dim == 0:
        return True
    return u.residual(v.basis) <= cfg.eq_tol


def subspace_equal(u: Subspace, v: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    _check_ambient(u, v)
    return subspace_contains(u, v, cfg) and subspace_contains(v, u, cfg)


def intersection(u: Subspace, v: Subspace, cfg: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    _check_ambient(u, v)
    if u.dim == 0 or v.dim == 0:
        return Subspace(u.ambient_dim, np.zeros((0, u.ambient_dim)), cfg.eq_tol)
    # x = a.U = b.V  <=>  [U^T, -V^T] [a; b] = 0
    stacked = np.concatenate([u.basis.T, -v.basis.T], axis=1)
    ns = null_space(stacked, cfg)
    return span(ns.basis[:, :u.dim] @ u.basis, u.ambient_dim, cfg)


def hermitian_sqrt(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (g^(1/2), g^(-1/2)) for a Hermitian positive definite g."""
    w, q = np.linalg.eigh((g + g.conj().T) / 2)
    if w[0] <= 0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    root = np.sqrt(w)
    return (q * root) @ q.conj().T, (q / root) @ q.conj().T
