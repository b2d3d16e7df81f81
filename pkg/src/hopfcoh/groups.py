"""Finite groups by multiplication table."""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .config import require_budget


class NotAGroup(ValueError):
    def __init__(self, axiom: str, witness=None):
        super().__init__(f"{axiom} fails at {witness}")
        self.axiom = axiom
        self.witness = witness


class NotASubgroup(ValueError):
    pass


class FiniteGroup:
    """Group on ``range(order)``; ``table[a, b]`` is the index of ``ab``."""

    def __init__(self, table, labels=None, name: str = "G"):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise NotAGroup("shape", table.shape)
        if table.min() < 0 or table.max() >= n:
            raise NotAGroup("closure", int(table.max()))
        ids = [e for e in range(n) if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))]
        if not ids:
            raise NotAGroup("identity")
        e = ids[0]
        bad = np.argwhere(table[table, :] != table[:, table])
        if bad.size:
            raise NotAGroup("associativity", tuple(int(t) for t in bad[0]))
        inverse = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(table[a] == e)[0]
            if hits.size == 0 or table[hits[0], a] != e:
                raise NotAGroup("inverses", a)
            inverse[a] = hits[0]
        self.table = table
        self.order = n
        self.identity = e
        self.inverse = inverse
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.name = name

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, h: int) -> int:
        """``g h g^-1``."""
        return self.mul(self.mul(g, h), self.inv(g))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def check_subgroup(self, elements) -> list[int]:
        elems = sorted(set(int(x) for x in elements))
        if self.identity not in elems:
            raise NotASubgroup("identity missing")
        s = set(elems)
        for a in elems:
            if self.inv(a) not in s:
                raise NotASubgroup(f"inverse of {self.labels[a]} missing")
            for b in elems:
                if self.mul(a, b) not in s:
                    raise NotASubgroup(f"{self.labels[a]}*{self.labels[b]} missing")
        return elems

    def subgroup(self, elements, name: str | None = None) -> tuple["FiniteGroup", list[int]]:
        """Subgroup as a group in its own right plus the embedding list."""
        elems = self.check_subgroup(elements)
        pos = {a: i for i, a in enumerate(elems)}
        table = [[pos[self.mul(a, b)] for b in elems] for a in elems]
        return FiniteGroup(table, [self.labels[a] for a in elems], name or f"sub({self.name})"), elems


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, [str(i) for i in range(n)], f"Z{n}")


def trivial() -> FiniteGroup:
    return FiniteGroup([[0]], ["e"], "1")


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = perm[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def symmetric(n: int) -> FiniteGroup:
    """S_n with ``(s t)(x) = s(t(x))``; elements in lexicographic order of images."""
    perms = list(permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(s[t[x]] for x in range(n))] for t in perms] for s in perms]
    return FiniteGroup(table, [_cycle_label(p) for p in perms], f"S{n}")


def homomorphisms_to_units(G: FiniteGroup, p: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """All homomorphisms ``G -> F_p^x`` as tuples of values, found by brute force."""
    require_budget((p - 1) ** G.order, "Hom(G, k^x)", budget)
    out = []
    for values in product(range(1, p), repeat=G.order):
        if values[G.identity] != 1:
            continue
        if all(values[G.mul(a, b)] == values[a] * values[b] % p for a in range(G.order) for b in range(G.order)):
            out.append(values)
    return out
