"""Classical non-abelian cohomology of a finite group, and its comparison with
the Hopf side for coefficients coacted on by a function algebra k^G.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import AxiomReport, linear_map_is_algebra_morphism, unit_group
from .cohomology import AlgebraDiagram
from .comodule import ComoduleAlgebra, trivial_coefficients
from .config import require_budget
from .exactmath import Field
from .groups import FiniteGroup, homomorphisms_to_units
from .hopf import build_function_hopf, grouplikes, recognize_function_hopf
from .precosimplicial import CohomologyResult, PreCosimplicialGroup, key


class NotAFunctionAlgebra(ValueError):
    pass


class NotAnAction(ValueError):
    pass


class GGroup:
    """A group ``A`` on ``range(n)`` with a left ``G``-action ``act[g, a]``."""

    def __init__(self, G: FiniteGroup, table, identity: int, act, labels=None):
        self.G = G
        self.table = np.asarray(table, dtype=np.int64)
        self.order = self.table.shape[0]
        self.identity = identity
        self.inverse = np.array([int(np.nonzero(self.table[a] == identity)[0][0]) for a in range(self.order)],
                                dtype=np.int64)
        self.act = np.asarray(act, dtype=np.int64)
        self.labels = list(labels) if labels is not None else [str(a) for a in range(self.order)]
        self.verify()

    def verify(self) -> None:
        G, T, act = self.G, self.table, self.act
        if not np.array_equal(act[G.identity], np.arange(self.order)):
            raise NotAnAction("the neutral element does not act trivially")
        for g in range(G.order):
            # g acts by a group automorphism
            if not np.array_equal(act[g][T], T[act[g]][:, act[g]]):
                raise NotAnAction(f"{G.labels[g]} is not multiplicative")
            for h in range(G.order):
                if not np.array_equal(act[G.mul(g, h)], act[g][act[h]]):
                    raise NotAnAction(f"composition fails at ({G.labels[g]}, {G.labels[h]})")


def trivial_action(G: FiniteGroup, table, identity: int = 0, labels=None) -> GGroup:
    n = len(table)
    return GGroup(G, table, identity, np.tile(np.arange(n), (G.order, 1)), labels)


def units_of_field(p: int) -> tuple[np.ndarray, list[str]]:
    """Multiplication table of F_p^x on the residues 1..p-1 (index = residue - 1)."""
    res = np.arange(1, p)
    return (res[:, None] * res[None, :] % p) - 1, [str(r) for r in res]


def function_group(E: ComoduleAlgebra) -> FiniteGroup:
    G = recognize_function_hopf(E.hopf)
    if G is None:
        raise NotAFunctionAlgebra(f"{E.hopf.name} is not recognisably k^G")
    return G


def twist_matrices(E: ComoduleAlgebra) -> np.ndarray:
    """``twist[g]`` is the matrix of ``x -> ^g x``, read off the coaction."""
    G = function_group(E)
    m = G.order
    return np.stack([E.coaction[g::m, :] for g in range(m)])


class UnitCoder:
    """Maps coordinate rows of units to their index in the sorted unit list."""

    def __init__(self, rows: np.ndarray, p: int):
        self.rows = rows
        self.p = p
        dim = rows.shape[1]
        self.weights = p ** np.arange(dim - 1, -1, -1, dtype=np.int64)
        self.lookup = np.full(p**dim, -1, dtype=np.int64)
        self.lookup[rows @ self.weights] = np.arange(rows.shape[0])

    def index(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the rows; -1 for non-units.  Last axis is the coordinate axis."""
        return self.lookup[np.asarray(rows, dtype=np.int64) @ self.weights]


def action_from_coaction(E: ComoduleAlgebra) -> tuple[GGroup, np.ndarray, np.ndarray]:
    """The G-group ``E^x`` together with its unit rows and their inverses."""
    G = function_group(E)
    p = E.field.p
    twists = twist_matrices(E)
    for g in range(G.order):
        ok, w = linear_map_is_algebra_morphism(twists[g], E.alg, E.alg)
        if not ok:
            raise NotAnAction(f"{G.labels[g]} is not an algebra map at {w}")
    units, inverses = unit_group(E.alg)
    require_budget(units.shape[0] ** 2, "unit group table")
    coder = UnitCoder(units, p)
    n = units.shape[0]
    A = np.repeat(units, n, axis=0)
    B = np.tile(units, (n, 1))
    table = coder.index(E.alg.batch_mul(A, B)).reshape(n, n)
    act = np.stack([coder.index(units @ twists[g].T % p) for g in range(G.order)])
    if (act < 0).any():
        raise NotAnAction("twisting a unit gave a non-unit")
    identity = int(coder.index(E.alg.unit[None, :])[0])
    labels = [repr(E.alg.element(r)) for r in units]
    return GGroup(G, table, identity, act, labels), units, inverses


class GroupDiagram(PreCosimplicialGroup):
    """``A -> Map(G, A) -> Map(G x G, A)`` with the classical cofaces.

    Elements of level ``n`` are rows of length ``|G|**n`` holding indices into ``A``;
    the pair ``(g, h)`` sits at position ``g * |G| + h``.
    """

    def __init__(self, A: GGroup):
        self.A = A
        G = A.G
        m = G.order
        self.m = m
        g_idx, h_idx = np.divmod(np.arange(m * m), m)
        self._pair_g = g_idx
        self._pair_h = h_idx
        self._pair_gh = G.table[g_idx, h_idx]

    def unit(self, level: int) -> np.ndarray:
        return np.full(self.m**level, self.A.identity, dtype=np.int64)

    def mul(self, level: int, X, Y) -> np.ndarray:
        return self.A.table[np.asarray(X), np.asarray(Y)]

    def coface(self, level: int, i: int, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        act = self.A.act
        if level == 0:
            a = rows[:, 0]
            if i == 0:
                return act[:, a].T.copy()
            return np.repeat(a[:, None], self.m, axis=1)
        if i == 0:
            return act[self._pair_g[None, :], rows[:, self._pair_h]]
        if i == 1:
            return rows[:, self._pair_gh]
        return rows[:, self._pair_g]

    def units0(self):
        idx = np.arange(self.A.order, dtype=np.int64)
        return idx[:, None], self.A.inverse[:, None]

    def candidate_blocks(self):
        free = self.m - 1
        total = self.A.order**free
        require_budget(total, "group cocycle search")
        step = 1 << 14
        return [(lo, min(total, lo + step)) for lo in range(0, total, step)]

    def candidate_rows(self, block) -> np.ndarray:
        lo, hi = block
        free = [g for g in range(self.m) if g != self.A.G.identity]
        n = self.A.order
        idx = np.arange(lo, hi, dtype=np.int64)
        rows = np.full((idx.size, self.m), self.A.identity, dtype=np.int64)
        for pos, g in enumerate(free):
            rows[:, g] = idx // n ** (len(free) - 1 - pos) % n
        return rows

    def invertible1(self, rows) -> np.ndarray:
        return np.ones(rows.shape[0], dtype=bool)


def group_z1(A: GGroup) -> np.ndarray:
    return GroupDiagram(A).z1_elements()


def group_h0(A: GGroup) -> np.ndarray:
    return GroupDiagram(A).h0_elements()[:, 0]


def group_h1(A: GGroup) -> CohomologyResult:
    return GroupDiagram(A).cohomology()


@dataclass
class Gamma:
    """Levelwise identifications of the Hopf-side and group-side diagrams."""

    E: ComoduleAlgebra
    G: FiniteGroup
    A: GGroup
    units: np.ndarray
    perms: tuple[np.ndarray, np.ndarray]
    # perms[j - 1][pos] is the coordinate of E (x) (k^G)^j feeding slot ``pos``

    @cached_property
    def coder(self) -> UnitCoder:
        return UnitCoder(self.units, self.E.field.p)

    def coords(self, level: int, rows) -> np.ndarray:
        """Hopf-side coordinates rearranged as ``|G|**level`` blocks of E-coordinates."""
        rows = np.asarray(rows, dtype=np.int64)
        if level == 0:
            return rows[:, None, :]
        perm = self.perms[level - 1]
        dim_e = self.E.alg.dim
        return rows[:, perm].reshape(rows.shape[0], self.G.order**level, dim_e)

    def __call__(self, level: int, rows) -> np.ndarray:
        """Unit rows at ``level`` to group-side rows of indices into ``A``; -1 marks non-units."""
        return self.coder.index(self.coords(level, rows))


def gamma_iso(E: ComoduleAlgebra) -> tuple[Gamma, AxiomReport]:
    A, units, _ = action_from_coaction(E)
    G = A.G
    m, de = G.order, E.alg.dim
    # slot (s, i) of level j collects coordinate i * m**j + s
    perm1 = np.array([i * m + s for s in range(m) for i in range(de)], dtype=np.int64)
    perm2 = np.array([i * m * m + s for s in range(m * m) for i in range(de)], dtype=np.int64)
    gamma = Gamma(E, G, A, units, (perm1, perm2))
    report = AxiomReport(f"gamma {E.name}")
    hopf = AlgebraDiagram(E)
    group = GroupDiagram(A)

    # multiplicativity as a bilinear identity on basis pairs of each level
    for level in (1, 2):
        alg = hopf.levels[level]
        ok = True
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = gamma.coords(level, alg.mult[i, j][None, :])[0]
                a = gamma.coords(level, alg.basis_vector(i)[None, :])[0]
                b = gamma.coords(level, alg.basis_vector(j)[None, :])[0]
                rhs = np.stack([E.alg.mul(a[s], b[s]) for s in range(m**level)])
                if not np.array_equal(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
        report.record(f"gamma{level} multiplicative", ok, (level, i, j) if not ok else None)

    for level, perm in zip((1, 2), gamma.perms):
        report.record(f"gamma{level} is a coordinate permutation",
                      np.array_equal(np.sort(perm), np.arange(hopf.levels[level].dim)), level)

    # intertwining on every unit of levels 0 and 1
    L0 = units
    for i in (0, 1):
        lhs = gamma(1, hopf.coface(0, i, L0))
        rhs = group.coface(0, i, np.arange(A.order)[:, None])
        report.record(f"gamma1 d{i} = d{i} gamma0", np.array_equal(lhs, rhs), i)
    # units of E (x) k^G found by their own enumeration, then matched by cardinality
    L1 = unit_group(hopf.levels[1])[0]
    X_idx = gamma(1, L1)
    report.record("gamma1 lands in units", bool((X_idx >= 0).all()), None)
    report.record("gamma1 injective", np.unique(X_idx, axis=0).shape[0] == X_idx.shape[0], None)
    report.record("gamma1 surjective", L1.shape[0] == A.order**m, (L1.shape[0], A.order**m))
    for i in (0, 1, 2):
        lhs = gamma(2, hopf.coface(1, i, L1))
        rhs = group.coface(1, i, X_idx)
        report.record(f"gamma2 d{i} = d{i} gamma1", np.array_equal(lhs, rhs), i)
    return gamma, report


def compare_group_cohomology(E: ComoduleAlgebra) -> AxiomReport:
    """Both cohomologies computed independently and matched through gamma."""
    gamma, report = gamma_iso(E)
    hopf = AlgebraDiagram(E)
    group = GroupDiagram(gamma.A)
    hres = hopf.cohomology()
    gres = group.cohomology()
    h0_hopf = sorted(int(i) for i in gamma(0, hres.h0)[:, 0])
    h0_group = sorted(int(i) for i in gres.h0[:, 0])
    report.record("H0 equal as sets", h0_hopf == h0_group, (h0_hopf, h0_group))
    report.record("Z1 sizes", hres.z1.shape[0] == gres.z1.shape[0], (hres.z1.shape[0], gres.z1.shape[0]))
    pairing = []
    for orb in hres.orbits:
        targets = {gres.class_of(r) for r in gamma(1, np.array(orb.members))}
        if len(targets) != 1:
            report.record("H1 pairing well defined", False, orb.representative)
            return report
        pairing.append(targets.pop())
    report.record("H1 pairing bijective", sorted(pairing) == list(range(len(gres.orbits))), pairing)
    report.record("distinguished points matched", bool(pairing) and pairing[0] == 0, pairing[:1])
    report.data = {
        "H0": [len(hres.h0), len(gres.h0)],
        "Z1": [int(hres.z1.shape[0]), int(gres.z1.shape[0])],
        "H1": [len(hres.orbits), len(gres.orbits)],
        "pairing": pairing,
        "hopf_representatives": [list(o.representative) for o in hres.orbits],
        "group_representatives": [[gamma.A.labels[a] for a in o.representative] for o in gres.orbits],
    }
    return report


def pontryagin_check(G: FiniteGroup, field: Field) -> AxiomReport:
    """Characters of ``G`` against grouplikes of k^G and degree-1 cohomology."""
    p = field.p
    chars = homomorphisms_to_units(G, p)
    H = build_function_hopf(G, field)
    rows, gr = grouplikes(H)
    res = AlgebraDiagram(trivial_coefficients(H)).cohomology()
    report = AxiomReport(f"characters of {G.name} over {field}")
    report.record("sizes agree", len(chars) == rows.shape[0] == len(res.orbits),
                  (len(chars), rows.shape[0], len(res.orbits)))
    as_rows = sorted(key(c) for c in chars)
    report.record("grouplikes are the characters", as_rows == [key(r) for r in rows], as_rows)
    reps = sorted(o.representative for o in res.orbits)
    report.record("cohomology classes are the grouplikes", reps == [key(r) for r in rows], reps)
    pos = {key(r): i for i, r in enumerate(rows)}
    hom = all(
        gr.table[i, j] == pos[tuple(a * b % p for a, b in zip(rows[i], rows[j]))]
        for i in range(len(rows)) for j in range(len(rows))
    )
    report.record("pointwise product is the group law", hom, None)
    report.data = {"order": len(chars), "characters": [list(c) for c in as_rows]}
    return report
