"""Non-abelian Hopf cohomology in degrees 0 and 1.

The coefficient object is a comodule algebra ``E`` over ``H``.  Its units
and the units of ``E (x) H`` and ``E (x) H (x) H`` form a truncated
pre-cosimplicial group; :class:`AlgebraDiagram` packages the coface and
codegeneracy matrices and plugs into the shared engine in
:mod:`hopfcoh.precosimplicial`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .algebra import (
    AffineSubspace,
    AxiomReport,
    Element,
    NotInvertible,
    StructureAlgebra,
    affine_preimage,
    all_points,
    block_ranges,
    linear_map_is_algebra_morphism,
    points_in_range,
    unit_group,
)
from .comodule import ComoduleAlgebra
from .config import EnumerationOverBudget, pmap, require_budget
from .exactmath import Unsolvable, kernel_basis, matrix_rank, solve_linear
from .precosimplicial import (
    CohomologyResult,
    Orbit,
    PreCosimplicialGroup,
    key,
    lex_sort,
    partition_orbits,
)


class NotCommutative(ValueError):
    pass


class NotInjective(ValueError):
    pass


class NotAMorphism(ValueError):
    pass


class LiftNotInSubalgebra(ArithmeticError):
    pass


class AlgebraDiagram(PreCosimplicialGroup):
    """``E -> E(x)H -> E(x)H(x)H`` with cofaces and codegeneracies as matrices."""

    def __init__(self, E: ComoduleAlgebra):
        self.comod = E
        f = E.field
        H = E.hopf
        ie, ih = f.eye(E.alg.dim), f.eye(H.dim)
        ieh = f.eye(E.alg.dim * H.dim)
        eta = H.unit_col
        self.field = f
        self.levels: tuple[StructureAlgebra, ...] = (E.alg, E.level1, E.level2)
        self.cofaces = {
            (0, 0): E.coaction,
            (0, 1): f.kron(ie, eta),
            (1, 0): f.kron(E.coaction, ih),
            (1, 1): f.kron(ie, H.comult),
            (1, 2): f.kron(ieh, eta),
        }
        self.codegeneracies = {
            (1, 0): f.kron(ie, H.counit),
            (2, 0): f.kron(ie, H.counit, ih),
            (2, 1): f.kron(ieh, H.counit),
        }

    def d(self, level: int, i: int) -> np.ndarray:
        return self.cofaces[(level, i)]

    def s(self, level: int, i: int) -> np.ndarray:
        return self.codegeneracies[(level, i)]

    # -- pre-cosimplicial group interface ------------------------------

    def unit(self, level: int) -> np.ndarray:
        return self.levels[level].unit

    def mul(self, level: int, A, B) -> np.ndarray:
        return self.levels[level].batch_mul(A, B)

    def coface(self, level: int, i: int, rows) -> np.ndarray:
        return np.asarray(rows, dtype=np.int64) @ self.cofaces[(level, i)].T % self.field.p

    def units0(self):
        return self._units0

    @cached_property
    def _units0(self):
        return unit_group(self.levels[0])

    @cached_property
    def normalized_slice(self) -> AffineSubspace:
        """``{X | (id (x) eps) X = 1}``; every cocycle lies here."""
        return affine_preimage(self.codegeneracies[(1, 0)], self.levels[0].unit, self.field)

    def candidate_space(self, normalized: bool = True) -> AffineSubspace:
        if normalized:
            return self.normalized_slice
        n = self.levels[1].dim
        return AffineSubspace(np.zeros(n, dtype=np.int64), np.eye(n, dtype=np.int64))

    def candidate_blocks(self, normalized: bool = True) -> list:
        space = self.candidate_space(normalized)
        total = self.field.p ** space.dim
        require_budget(total, f"cocycle search in {self.levels[1].name}")
        return [(space, lo, hi) for lo, hi in block_ranges(total)]

    def candidate_rows(self, block) -> np.ndarray:
        space, lo, hi = block
        return points_in_range(space, self.field.p, lo, hi)

    def invertible1(self, rows) -> np.ndarray:
        return self.levels[1].batch_inverse(rows)[0]

    @cached_property
    def _relation_data(self):
        csr = _kernels.csr_from_dense
        return (csr(self.cofaces[(1, 2)]), csr(self.cofaces[(1, 0)]), csr(self.cofaces[(1, 1)]),
                self.levels[2].triples)

    def cocycle_mask(self, X) -> np.ndarray:
        left, right, rhs, triples = self._relation_data
        return _kernels.relation_mask(X, left, right, rhs, triples, self.field.p)

    def h0_elements(self) -> np.ndarray:
        f = self.field
        diff = f.reduce(self.cofaces[(0, 0)] - self.cofaces[(0, 1)])
        basis = kernel_basis(diff, f)
        space = AffineSubspace(np.zeros(self.levels[0].dim, dtype=np.int64), basis)
        return unit_group(self.levels[0], space)[0]

    def z1_elements(self, normalized: bool = True) -> np.ndarray:
        left, right, rhs, triples = self._relation_data
        p = self.field.p

        def scan(block):
            space, lo, hi = block
            idx = _kernels.slice_survivors(space.particular, space.basis, lo, hi, left, right, rhs, triples, p)
            rows = _kernels.points_at(space.particular, space.basis, idx, p)
            return rows[self.invertible1(rows)]

        found = pmap(scan, self.candidate_blocks(normalized))
        return lex_sort(np.concatenate(found))


def build_diagram(E: ComoduleAlgebra) -> AlgebraDiagram:
    return AlgebraDiagram(E)


def check_diagram(D: AlgebraDiagram) -> AxiomReport:
    """Algebra-morphism property plus every coface/codegeneracy identity."""
    f = D.field
    report = AxiomReport(f"diagram {D.comod.name}")
    for (level, i), mat in sorted(D.cofaces.items()):
        ok, w = linear_map_is_algebra_morphism(mat, D.levels[level], D.levels[level + 1])
        report.record(f"d{i} at level {level} multiplicative", ok, w)
    for (level, i), mat in sorted(D.codegeneracies.items()):
        ok, w = linear_map_is_algebra_morphism(mat, D.levels[level], D.levels[level - 1])
        report.record(f"s{i} at level {level} multiplicative", ok, w)

    d, s = D.d, D.s
    eye0 = f.eye(D.levels[0].dim)
    eye1 = f.eye(D.levels[1].dim)
    checks = [
        ("d1d0 = d0d0", f.matmul(d(1, 1), d(0, 0)), f.matmul(d(1, 0), d(0, 0))),
        ("d2d0 = d0d1", f.matmul(d(1, 2), d(0, 0)), f.matmul(d(1, 0), d(0, 1))),
        ("d2d1 = d1d1", f.matmul(d(1, 2), d(0, 1)), f.matmul(d(1, 1), d(0, 1))),
        ("s0d0 = id", f.matmul(s(1, 0), d(0, 0)), eye0),
        ("s0d1 = id", f.matmul(s(1, 0), d(0, 1)), eye0),
        ("s0d0 = id (top)", f.matmul(s(2, 0), d(1, 0)), eye1),
        ("s0d1 = id (top)", f.matmul(s(2, 0), d(1, 1)), eye1),
        ("s1d1 = id (top)", f.matmul(s(2, 1), d(1, 1)), eye1),
        ("s1d2 = id (top)", f.matmul(s(2, 1), d(1, 2)), eye1),
        ("s0d2 = d1s0", f.matmul(s(2, 0), d(1, 2)), f.matmul(d(0, 1), s(1, 0))),
        ("s1d0 = d0s0", f.matmul(s(2, 1), d(1, 0)), f.matmul(d(0, 0), s(1, 0))),
    ]
    for name, lhs, rhs in checks:
        report.record(name, np.array_equal(lhs, rhs), name)
    return report


# -- element-level operations ---------------------------------------------


@dataclass
class UnitGroupResult:
    algebra: StructureAlgebra
    rows: np.ndarray
    table: np.ndarray

    @property
    def elements(self) -> list[Element]:
        return [Element(self.algebra, r) for r in self.rows]

    def __len__(self):
        return self.rows.shape[0]


def h0(E: ComoduleAlgebra) -> UnitGroupResult:
    """Invertible coinvariants, solved linearly then filtered for units."""
    D = AlgebraDiagram(E)
    rows = D.h0_elements()
    return UnitGroupResult(E.alg, rows, D.group_table(0, rows))


def z1(E: ComoduleAlgebra, normalized: bool = True) -> list[Element]:
    D = AlgebraDiagram(E)
    return [Element(E.level1, r) for r in D.z1_elements(normalized)]


def cocycle_action(E: ComoduleAlgebra, X: Element, x: Element, check: bool = False) -> Element:
    """``X <- x = d1(x^-1) X d0(x)``."""
    D = AlgebraDiagram(E)
    f = E.field
    x_inv = x.inverse()
    left = Element(E.level1, f.matmul(D.d(0, 1), x_inv.coords))
    right = Element(E.level1, f.matmul(D.d(0, 0), x.coords))
    out = left * X * right
    if check and is_cocycle(D, X) and not is_cocycle(D, out):
        raise ArithmeticError("action left the cocycle set")
    return out


def is_cocycle(D: AlgebraDiagram, X: Element) -> bool:
    f = D.field
    try:
        X.inverse()
    except NotInvertible:
        return False
    L2 = D.levels[2]
    lhs = L2.mul(f.matmul(D.d(1, 2), X.coords), f.matmul(D.d(1, 0), X.coords))
    return np.array_equal(lhs, f.matmul(D.d(1, 1), X.coords))


def h1(E: ComoduleAlgebra, diagram: AlgebraDiagram | None = None) -> CohomologyResult:
    D = diagram or AlgebraDiagram(E)
    return D.cohomology()


@dataclass
class H1Group:
    result: CohomologyResult
    table: np.ndarray
    # class index -> class index of the product


def commutative_h1_group(E: ComoduleAlgebra, exhaustive: bool = True) -> H1Group:
    """Group structure on degree-1 cohomology when ``E`` and ``H`` commute."""
    if not E.is_commutative():
        raise NotCommutative(f"{E.name} is not commutative")
    D = AlgebraDiagram(E)
    res = D.cohomology()
    n = len(res.orbits)
    table = np.zeros((n, n), dtype=np.int64)
    for i, oi in enumerate(res.orbits):
        for j, oj in enumerate(res.orbits):
            left = oi.members if exhaustive else [oi.representative]
            right = oj.members if exhaustive else [oj.representative]
            A = np.array([a for a in left for _ in right], dtype=np.int64)
            B = np.array([b for _ in left for b in right], dtype=np.int64)
            classes = {res.class_of(r) for r in D.mul(1, A, B)}
            if len(classes) != 1:
                raise ArithmeticError(f"product of classes {i}, {j} is not well defined")
            table[i, j] = classes.pop()
    return H1Group(res, table)


# -- inclusions, relative cohomology, exact sequence ------------------------


def check_inclusion(Dc: ComoduleAlgebra, Ec: ComoduleAlgebra, incl) -> np.ndarray:
    f = Ec.field
    incl = f.array(incl)
    if incl.shape != (Ec.alg.dim, Dc.alg.dim):
        raise NotAMorphism(f"inclusion must be {Ec.alg.dim}x{Dc.alg.dim}")
    if not Dc.hopf == Ec.hopf:
        raise NotAMorphism("comodule algebras over different Hopf algebras")
    if matrix_rank(incl, f) != Dc.alg.dim:
        raise NotInjective("inclusion has a kernel")
    ok, w = linear_map_is_algebra_morphism(incl, Dc.alg, Ec.alg)
    if not ok:
        raise NotAMorphism(f"not multiplicative at {w}")
    lhs = f.matmul(f.kron(incl, f.eye(Ec.hopf.dim)), Dc.coaction)
    if not np.array_equal(lhs, f.matmul(Ec.coaction, incl)):
        raise NotAMorphism("does not commute with the coactions")
    return incl


class Inclusion:
    """An injective comodule-algebra morphism ``D -> E`` with its level maps."""

    def __init__(self, Dc: ComoduleAlgebra, Ec: ComoduleAlgebra, incl):
        self.D, self.E = Dc, Ec
        self.incl = check_inclusion(Dc, Ec, incl)
        f = Ec.field
        ih = f.eye(Ec.hopf.dim)
        self.level_maps = (self.incl, f.kron(self.incl, ih), f.kron(self.incl, ih, ih))
        self.dD = AlgebraDiagram(Dc)
        self.dE = AlgebraDiagram(Ec)
        self.p = f.p
        self.surjective = Dc.alg.dim == Ec.alg.dim

    def push(self, level: int, rows) -> np.ndarray:
        return np.asarray(rows, dtype=np.int64) @ self.level_maps[level].T % self.p

    def pull(self, level: int, row) -> np.ndarray | None:
        """Preimage of ``row`` under the level map, or None outside the image."""
        try:
            return solve_linear(self.level_maps[level], row, self.E.field).particular
        except Unsolvable:
            return None

    @cached_property
    def image_units(self) -> tuple[np.ndarray, ...]:
        """Images of the unit groups of ``D`` at levels 0 and 1."""
        return tuple(self.push(lv, unit_group(self.dD.levels[lv])[0]) for lv in (0, 1))

    @cached_property
    def cosets(self) -> list[Orbit]:
        """Left cosets ``b . D^x`` of ``E^x``, least member first, unit coset first."""
        units = self.dE.units0()[0]
        N = self.image_units[0]
        L0 = self.dE.levels[0]

        def translates(b):
            return L0.batch_mul(np.broadcast_to(b, N.shape), N)

        return partition_orbits(units, translates, key(L0.unit))

    def coset_of(self, b) -> int:
        k = key(b)
        for i, c in enumerate(self.cosets):
            if k in c.witnesses:
                return i
        raise KeyError(k)

    def defect(self, b) -> np.ndarray:
        """``d1(b)^-1 d0(b)`` in ``E (x) H``."""
        L0, L1 = self.dE.levels[0], self.dE.levels[1]
        b = np.asarray(b, dtype=np.int64)
        b_inv = L0.inverse(b)
        return L1.mul(self.dE.coface(0, 1, b_inv[None, :])[0], self.dE.coface(0, 0, b[None, :])[0])


def relative_h0(Dc: ComoduleAlgebra, Ec: ComoduleAlgebra, incl, inc: Inclusion | None = None) -> list[Orbit]:
    """Cosets ``b . D^x`` on which the two cofaces agree modulo ``(D (x) H)^x``."""
    inc = inc or Inclusion(Dc, Ec, incl)
    return [c for c in inc.cosets if inc.pull(1, inc.defect(c.representative)) is not None]


def connecting_map(Dc: ComoduleAlgebra, Ec: ComoduleAlgebra, incl, coset: Orbit,
                   inc: Inclusion | None = None, h1_D: CohomologyResult | None = None) -> int:
    """Class index in degree-1 cohomology of ``D`` hit by a relative coset."""
    inc = inc or Inclusion(Dc, Ec, incl)
    h1_D = h1_D or inc.dD.cohomology()
    classes = set()
    for member in coset.members:
        Y = inc.pull(1, inc.defect(member))
        if Y is None:
            raise LiftNotInSubalgebra(f"lift {member} leaves the subalgebra")
        if not inc.dD.cocycle_mask(Y[None, :])[0]:
            raise LiftNotInSubalgebra(f"pullback of lift {member} is not a cocycle")
        classes.add(h1_D.class_of(Y))
    if len(classes) != 1:
        raise LiftNotInSubalgebra(f"lifts of {coset.representative} give classes {sorted(classes)}")
    return classes.pop()


def normality(inc: Inclusion) -> tuple[bool, str | None]:
    """Whether the unit groups of ``D`` sit normally at all three levels.

    Commutative levels are skipped; the search stops at the first failure.
    """
    if inc.surjective:
        return True, None
    for level in range(3):
        E_l = inc.dE.levels[level]
        if E_l.is_commutative():
            continue
        big = unit_group(E_l)
        small = inc.push(level, unit_group(inc.dD.levels[level])[0])
        small_keys = {key(r) for r in small}
        for b, b_inv in zip(*big):
            conj = E_l.batch_mul(E_l.batch_mul(np.broadcast_to(b, small.shape), small),
                                 np.broadcast_to(b_inv, small.shape))
            for r in conj:
                if key(r) not in small_keys:
                    return False, f"level {level}: conjugating by {key(b)} leaves the subgroup"
    return True, None


class QuotientDiagram(PreCosimplicialGroup):
    """Levelwise quotient by a normal sub-diagram; cosets named by least member."""

    def __init__(self, inc: Inclusion):
        self.inc = inc
        self.big = inc.dE

    @cached_property
    def normal(self) -> list[np.ndarray]:
        return [self.inc.push(lv, unit_group(self.inc.dD.levels[lv])[0]) for lv in range(3)]

    def canon(self, level: int, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        if self.inc.surjective:
            return np.broadcast_to(self.big.unit(level), rows.shape).copy()
        N = self.normal[level]
        out = np.empty_like(rows)
        for t, r in enumerate(rows):
            coset = self.big.mul(level, np.broadcast_to(r, N.shape), N)
            out[t] = lex_sort(coset)[0]
        return out

    def unit(self, level):
        return self.canon(level, self.big.unit(level)[None, :])[0]

    def mul(self, level, A, B):
        return self.canon(level, self.big.mul(level, A, B))

    def coface(self, level, i, rows):
        return self.canon(level + 1, self.big.coface(level, i, rows))

    @cached_property
    def _units0(self):
        units, inverses = self.big.units0()
        reps = np.unique(self.canon(0, units), axis=0)
        inv = []
        pos = {key(u): i for i, u in enumerate(units)}
        for r in reps:
            inv.append(inverses[pos[key(r)]])
        return reps, self.canon(0, np.array(inv))

    def units0(self):
        return self._units0

    def candidate_blocks(self):
        if self.inc.surjective:
            return [self.big.unit(1)[None, :]]
        units = unit_group(self.big.levels[1])[0]
        return [np.unique(self.canon(1, units), axis=0)]

    def candidate_rows(self, block):
        return block

    def invertible1(self, rows):
        return np.ones(rows.shape[0], dtype=bool)


@dataclass
class ExactnessNode:
    name: str
    ok: bool
    image: list
    kernel: list


@dataclass
class ExactSequenceReport:
    sizes: dict
    nodes: list[ExactnessNode]
    normal: bool
    normality_note: str | None
    six_term: bool

    @property
    def ok(self) -> bool:
        return all(n.ok for n in self.nodes)


def verify_exact_sequence(Dc: ComoduleAlgebra, Ec: ComoduleAlgebra, incl) -> ExactSequenceReport:
    inc = Inclusion(Dc, Ec, incl)
    dD, dE = inc.dD, inc.dE
    h0D = dD.h0_elements()
    h0E = dE.h0_elements()
    rel = relative_h0(Dc, Ec, incl, inc)
    h1D = dD.cohomology()
    h1E = dE.cohomology()
    nodes: list[ExactnessNode] = []

    # H0(D) -> H0(E): injective with trivial kernel
    pushed = [key(r) for r in inc.push(0, h0D)]
    unit_e = key(dE.unit(0))
    kernel = sorted(key(x) for x, y in zip(h0D, pushed) if y == unit_e)
    image = [key(dD.unit(0))]
    nodes.append(ExactnessNode("H0(D)", image == kernel and len(set(pushed)) == len(pushed), image, kernel))
    # H0(E): image of H0(D) = elements landing in the unit coset
    image = sorted(set(pushed))
    kernel = sorted(key(x) for x in h0E if inc.coset_of(x) == 0)
    nodes.append(ExactnessNode("H0(E)", image == kernel, image, kernel))
    # relative H0: image of H0(E) = preimage of the trivial class under the connecting map
    rel_index = {c.representative: i for i, c in enumerate(rel)}
    image = sorted({rel_index[inc.cosets[inc.coset_of(x)].representative] for x in h0E})
    delta = [connecting_map(Dc, Ec, incl, c, inc, h1D) for c in rel]
    kernel = [i for i, cls in enumerate(delta) if cls == 0]
    nodes.append(ExactnessNode("H0(D->E)", image == kernel, image, kernel))
    # H1(D): image of the connecting map = classes dying in H1(E)
    image = sorted(set(delta))
    pushed_classes = []
    for orb in h1D.orbits:
        targets = {h1E.class_of(r) for r in inc.push(1, np.array(orb.members))}
        if len(targets) != 1:
            raise ArithmeticError("pushforward of a class is not well defined")
        pushed_classes.append(targets.pop())
    kernel = [i for i, cls in enumerate(pushed_classes) if cls == 0]
    nodes.append(ExactnessNode("H1(D)", image == kernel, image, kernel))

    try:
        normal, note = normality(inc)
    except EnumerationOverBudget as exc:
        normal, note = False, f"normality not decided: {exc}"
    sizes = {"H0(D)": len(h0D), "H0(E)": len(h0E), "H0(D->E)": len(rel),
             "H1(D)": len(h1D.orbits), "H1(E)": len(h1E.orbits)}
    if normal:
        Q = QuotientDiagram(inc)
        h1Q = Q.cohomology()
        sizes["H1(D->E)"] = len(h1Q.orbits)
        image = sorted(set(pushed_classes))
        kernel = []
        for i, orb in enumerate(h1E.orbits):
            targets = {h1Q.class_of(r) for r in Q.canon(1, np.array(orb.members))}
            if len(targets) != 1:
                raise ArithmeticError("projection of a class is not well defined")
            if targets.pop() == 0:
                kernel.append(i)
        nodes.append(ExactnessNode("H1(E)", image == kernel, image, kernel))
    return ExactSequenceReport(sizes, nodes, normal, note, normal)
