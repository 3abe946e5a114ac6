"""Finite groups given by multiplication tables over indices 0..n-1."""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .errors import InvalidGroupError, UnsupportedSizeError

MAX_SUBGROUP_ORDER = 24


class FiniteGroup:
    def __init__(self, table, names=None, *, name: str = ""):
        t = np.asarray(table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroupError("not a group: table must be a non-empty square array")
        if not np.issubdtype(t.dtype, np.integer):
            raise InvalidGroupError("not a group: table entries must be integers")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroupError(f"not a group: table entries must lie in 0..{n - 1}")
        self.table = t.astype(int)
        self.order = n
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        if len(self.names) != n:
            raise InvalidGroupError(f"expected {n} element names, got {len(self.names)}")
        self.name = name
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()
        bad = np.argwhere(self.table[self.table, :] != self.table[:, self.table])
        if bad.size:
            a, b, c = (int(v) for v in bad[0])
            raise InvalidGroupError(f"not a group: ({a}*{b})*{c} != {a}*({b}*{c})")

    def _find_identity(self) -> int:
        ar = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.table[e], ar) and np.array_equal(self.table[:, e], ar):
                return e
        raise InvalidGroupError("not a group: no identity element")

    def _find_inverses(self) -> list[int]:
        inv = []
        for s in range(self.order):
            hits = [t for t in range(self.order)
                    if self.table[s, t] == self.identity and self.table[t, s] == self.identity]
            if not hits:
                raise InvalidGroupError(f"not a group: no inverse for {s}")
            inv.append(hits[0])
        return inv

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, name={self.name!r})"

    def mul(self, s: int, t: int) -> int:
        return int(self.table[s, t])

    @property
    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def closure(self, gens) -> frozenset:
        elems = {self.identity} | set(int(g) for g in gens)
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for b in list(elems):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in elems:
                            elems.add(c)
                            new.append(c)
            frontier = new
        return frozenset(elems)

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def element_order(self, s: int) -> int:
        k, x = 1, s
        while x != self.identity:
            x = self.mul(x, s)
            k += 1
        return k

    def subgroups(self, max_order: int = MAX_SUBGROUP_ORDER) -> list[frozenset]:
        """All subgroups, found by closing known subgroups under one extra element."""
        if self.order > max_order:
            raise UnsupportedSizeError(
                f"subgroup enumeration supports order <= {max_order}, got {self.order}")
        found = {frozenset({self.identity})}
        frontier = list(found)
        while frontier:
            new = []
            for h in frontier:
                for g in self.elements:
                    if g in h:
                        continue
                    k = self.closure(set(h) | {g})
                    if k not in found:
                        found.add(k)
                        new.append(k)
            frontier = new
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def subgroup(self, subset) -> tuple["FiniteGroup", list[int]]:
        """(K as its own FiniteGroup, list mapping K-index -> G-index)."""
        elems = sorted(set(int(s) for s in subset))
        if not self.is_subgroup(elems):
            raise InvalidGroupError(f"{elems} is not a subgroup")
        # keep the identity at index 0 of K for readability
        elems.remove(self.identity)
        elems = [self.identity] + elems
        pos = {g: i for i, g in enumerate(elems)}
        table = [[pos[self.mul(a, b)] for b in elems] for a in elems]
        return FiniteGroup(table, [self.names[g] for g in elems], name=f"{self.name}|K"), elems


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], name=f"Z{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["e"], name="1")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    pairs = list(product(range(g.order), range(h.order)))
    pos = {p: i for i, p in enumerate(pairs)}
    table = [[pos[(g.mul(a, c), h.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({g.names[a]},{h.names[b]})" for a, b in pairs]
    return FiniteGroup(table, names, name=f"{g.name}x{h.name}")


def klein_four() -> FiniteGroup:
    g = direct_product(cyclic(2), cyclic(2))
    g.name = "Z2xZ2"
    return g


def symmetric(n: int) -> FiniteGroup:
    perms = sorted(permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    # (s t)(x) = s(t(x))
    table = [[pos[tuple(s[t[x]] for x in range(n))] for t in perms] for s in perms]
    return FiniteGroup(table, ["".join(map(str, p)) for p in perms], name=f"S{n}")


BUILTIN_GROUPS = {
    "trivial": trivial_group,
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z2xZ2": klein_four,
    "S3": lambda: symmetric(3),
}
