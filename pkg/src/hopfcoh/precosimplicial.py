"""Degree-0 and degree-1 cohomology of a truncated pre-cosimplicial group.

Both the Hopf side and the classical group side reduce to the same data:
three groups ``C0, C1, C2`` whose elements are integer coordinate rows,
cofaces ``d0, d1: C0 -> C1`` and ``d0, d1, d2: C1 -> C2``, and a source of
candidate cocycles.  Everything is vectorised over blocks of rows so the
same code serves both sides.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .config import pmap


def key(row) -> tuple[int, ...]:
    return tuple(int(v) for v in row)


def lex_sort(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= 1:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


class ActionLeavesCocycles(RuntimeError):
    pass


@dataclass
class Orbit:
    representative: tuple[int, ...]
    members: list[tuple[int, ...]]
    # member -> index into the acting group's element list
    witnesses: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __len__(self):
        return len(self.members)


@dataclass
class CohomologyResult:
    h0: np.ndarray
    h0_table: np.ndarray
    z1: np.ndarray
    orbits: list[Orbit]
    units: np.ndarray
    # invertible elements of C0 that act on cocycles, lexicographic

    @property
    def h1_size(self) -> int:
        return len(self.orbits)

    def class_of(self, X) -> int:
        k = key(X)
        for i, orb in enumerate(self.orbits):
            if k in orb.witnesses:
                return i
        raise KeyError(k)


class PreCosimplicialGroup(ABC):
    """Three levels of groups with cofaces; subclasses supply the arithmetic."""

    @abstractmethod
    def unit(self, level: int) -> np.ndarray: ...

    @abstractmethod
    def mul(self, level: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise products."""

    @abstractmethod
    def coface(self, level: int, i: int, rows: np.ndarray) -> np.ndarray:
        """``d^i`` applied row-wise to elements of ``C_level``."""

    @abstractmethod
    def units0(self) -> tuple[np.ndarray, np.ndarray]:
        """All elements of ``C0`` (lexicographic) and their inverses."""

    @abstractmethod
    def candidate_blocks(self) -> list:
        """Opaque block descriptors covering a set of ``C1`` rows that contains every cocycle."""

    @abstractmethod
    def candidate_rows(self, block) -> np.ndarray:
        """Materialise one block from :meth:`candidate_blocks`."""

    @abstractmethod
    def invertible1(self, rows: np.ndarray) -> np.ndarray:
        """Mask of rows that are invertible in ``C1``."""

    # -- generic cohomology ---------------------------------------------

    def cocycle_mask(self, X: np.ndarray) -> np.ndarray:
        lhs = self.mul(2, self.coface(1, 2, X), self.coface(1, 0, X))
        return np.all(lhs == self.coface(1, 1, X), axis=1)

    def h0_elements(self) -> np.ndarray:
        units, _ = self.units0()
        keep = np.all(self.coface(0, 0, units) == self.coface(0, 1, units), axis=1)
        return units[keep]

    def z1_elements(self) -> np.ndarray:
        def scan(block):
            rows = self.candidate_rows(block)
            rows = rows[self.cocycle_mask(rows)]
            return rows[self.invertible1(rows)]

        found = pmap(scan, self.candidate_blocks())
        width = self.unit(1).shape[0]
        rows = np.concatenate(found) if found else np.zeros((0, width), dtype=np.int64)
        return lex_sort(rows)

    def act(self, X: np.ndarray, units: np.ndarray, inverses: np.ndarray) -> np.ndarray:
        """Rows ``X <- u`` for every ``u``: ``d1(u^-1) X d0(u)``."""
        Xs = np.broadcast_to(X, (units.shape[0], X.shape[-1]))
        left = self.mul(1, self.coface(0, 1, inverses), Xs)
        return self.mul(1, left, self.coface(0, 0, units))

    def group_table(self, level: int, rows: np.ndarray) -> np.ndarray:
        pos = {key(r): i for i, r in enumerate(rows)}
        n = rows.shape[0]
        if n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        A = np.repeat(rows, n, axis=0)
        B = np.tile(rows, (n, 1))
        prod = self.mul(level, A, B)
        return np.array([pos[key(r)] for r in prod], dtype=np.int64).reshape(n, n)

    def cohomology(self, z1: np.ndarray | None = None) -> CohomologyResult:
        h0 = self.h0_elements()
        z1 = self.z1_elements() if z1 is None else z1
        units, inverses = self.units0()
        orbits = partition_orbits(z1, lambda X: self.act(X, units, inverses), key(self.unit(1)))
        return CohomologyResult(h0, self.group_table(0, h0), z1, orbits, units)


def partition_orbits(points: np.ndarray, act_all, distinguished: tuple[int, ...]) -> list[Orbit]:
    """Orbits of a group acting on ``points``, in any row order.

    ``act_all(x)`` returns the images of ``x`` under every group element in a
    fixed order.  Each representative is the least member of its orbit; the
    orbit containing ``distinguished`` comes first.
    """
    index = {key(r): i for i, r in enumerate(points)}
    assigned = np.zeros(len(index), dtype=bool)
    orbits: list[Orbit] = []

    def images(rep):
        witnesses: dict[tuple[int, ...], int] = {}
        for g, img in enumerate(act_all(np.array(rep, dtype=np.int64))):
            k = key(img)
            if k not in index:
                raise ActionLeavesCocycles(f"{rep} acted on by element {g} gives {k}")
            witnesses.setdefault(k, g)
        return witnesses

    for i, row in enumerate(points):
        if assigned[i]:
            continue
        witnesses = images(key(row))
        rep = min(witnesses)
        if rep != key(row):
            # witnesses must be read from the least member
            witnesses = images(rep)
        for k in witnesses:
            assigned[index[k]] = True
        orbits.append(Orbit(rep, sorted(witnesses), witnesses))
    orbits.sort(key=lambda o: (distinguished not in o.witnesses, o.representative))
    return orbits


def iter_chunks(rows: np.ndarray, size: int = 1 << 14) -> Iterator[np.ndarray]:
    for lo in range(0, rows.shape[0], size):
        yield rows[lo:lo + size]
