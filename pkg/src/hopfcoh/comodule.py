"""Comodule algebras and (H, E)-Hopf modules, with their axiom suites."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .algebra import (
    AxiomReport,
    StructureAlgebra,
    check_algebra_axioms,
    ground_algebra,
    linear_map_is_algebra_morphism,
    tensor_algebra,
)
from .exactmath import DimensionMismatch, Field, matrix_rank
from .groups import FiniteGroup
from .hopf import HopfAlgebra, build_function_hopf, build_sweedler_h4, check_hopf_axioms, trivial_hopf


class ComoduleAlgebra:
    """Right H-comodule algebra; ``coaction`` is (dim E * dim H) x dim E."""

    def __init__(self, hopf: HopfAlgebra, alg: StructureAlgebra, coaction, name: str | None = None):
        if hopf.field != alg.field:
            raise DimensionMismatch("Hopf algebra and algebra live over different fields")
        self.hopf = hopf
        self.alg = alg
        self.coaction = alg.field.array(coaction)
        if self.coaction.shape != (alg.dim * hopf.dim, alg.dim):
            raise DimensionMismatch(
                f"coaction must be {alg.dim * hopf.dim}x{alg.dim}, got {self.coaction.shape}"
            )
        self.name = name or f"({hopf.name}, {alg.name})"

    def __repr__(self):
        return f"ComoduleAlgebra{self.name}"

    def __eq__(self, other):
        return (
            isinstance(other, ComoduleAlgebra)
            and self.hopf == other.hopf
            and self.alg == other.alg
            and np.array_equal(self.coaction, other.coaction)
        )

    __hash__ = object.__hash__

    @property
    def field(self) -> Field:
        return self.alg.field

    @cached_property
    def level1(self) -> StructureAlgebra:
        return tensor_algebra(self.alg, self.hopf.alg)

    @cached_property
    def level2(self) -> StructureAlgebra:
        return tensor_algebra(self.level1, self.hopf.alg)

    def is_commutative(self) -> bool:
        return self.alg.is_commutative() and self.hopf.alg.is_commutative()


def check_comodule_algebra(E: ComoduleAlgebra) -> AxiomReport:
    f = E.field
    H = E.hopf
    D = E.coaction
    eye_e, eye_h = f.eye(E.alg.dim), f.eye(H.dim)
    report = AxiomReport(f"comodule algebra {E.name}")
    report.extend(check_algebra_axioms(E.alg))
    lhs = f.matmul(f.kron(D, eye_h), D)
    rhs = f.matmul(f.kron(eye_e, H.comult), D)
    report.record("coassociativity", np.array_equal(lhs, rhs), _first_col(lhs, rhs, E.alg.labels))
    back = f.matmul(f.kron(eye_e, H.counit), D)
    report.record("counit", np.array_equal(back, eye_e), _first_col(back, eye_e, E.alg.labels))
    ok, w = linear_map_is_algebra_morphism(D, E.alg, E.level1)
    report.record("coaction multiplicative", ok, w)
    return report


def _first_col(lhs, rhs, labels):
    bad = np.nonzero(np.any(lhs != rhs, axis=0))[0]
    return labels[bad[0]] if bad.size else None


class HopfModule:
    """Right E-module ``m . e_j = action[j] @ m`` with a compatible H-coaction."""

    def __init__(self, comod: ComoduleAlgebra, action, coaction, labels=None, name: str = "M"):
        f = comod.field
        self.comod = comod
        self.action = f.array(action)
        if self.action.ndim != 3 or self.action.shape[0] != comod.alg.dim or self.action.shape[1] != self.action.shape[2]:
            raise DimensionMismatch("need one square action matrix per basis element of E")
        self.dim = self.action.shape[1]
        self.coaction = f.array(coaction)
        if self.coaction.shape != (self.dim * comod.hopf.dim, self.dim):
            raise DimensionMismatch(f"module coaction must be {self.dim * comod.hopf.dim}x{self.dim}")
        self.labels = list(labels) if labels is not None else [f"m{i}" for i in range(self.dim)]
        self.name = name

    def __repr__(self):
        return f"HopfModule({self.name}, dim={self.dim} over {self.comod.name})"

    @property
    def field(self) -> Field:
        return self.comod.field

    @property
    def hopf(self) -> HopfAlgebra:
        return self.comod.hopf

    def act(self, s: np.ndarray) -> np.ndarray:
        """Matrix of ``m -> m . s`` for ``s`` in E."""
        return self.field.reduce(np.tensordot(s, self.action, axes=(0, 0)))

    def tensor_act(self, t: np.ndarray) -> np.ndarray:
        """Matrix of the right action of ``t`` in E (x) H on M (x) H."""
        f = self.field
        dh = self.hopf.dim
        out = f.zeros((self.dim * dh, self.dim * dh))
        rb = self.hopf.alg.right_basis
        for idx in np.nonzero(t)[0]:
            j, l = divmod(int(idx), dh)
            out = out + t[idx] * np.kron(self.action[j], rb[l])
        return f.reduce(out)

    def with_coaction(self, coaction, name: str | None = None) -> "HopfModule":
        return HopfModule(self.comod, self.action, coaction, self.labels, name or self.name)


def check_hopf_module(M: HopfModule) -> AxiomReport:
    f = M.field
    E, H = M.comod.alg, M.hopf
    eye_m, eye_h = f.eye(M.dim), f.eye(H.dim)
    report = AxiomReport(f"hopf module {M.name}")
    bad_unit = not np.array_equal(M.act(E.unit), eye_m)
    report.record("module unit", not bad_unit, "unit")
    witness = None
    for i in range(E.dim):
        for j in range(E.dim):
            if not np.array_equal(f.matmul(M.action[j], M.action[i]), M.act(E.mult[i, j])):
                witness = (E.labels[i], E.labels[j])
                break
        if witness:
            break
    report.record("module associativity", witness is None, witness)
    D = M.coaction
    lhs = f.matmul(f.kron(D, eye_h), D)
    rhs = f.matmul(f.kron(eye_m, H.comult), D)
    report.record("coassociativity", np.array_equal(lhs, rhs), _first_col(lhs, rhs, M.labels))
    back = f.matmul(f.kron(eye_m, H.counit), D)
    report.record("counit", np.array_equal(back, eye_m), _first_col(back, eye_m, M.labels))
    witness = None
    for j in range(E.dim):
        lhs = f.matmul(D, M.action[j])
        rhs = f.matmul(M.tensor_act(M.comod.coaction[:, j]), D)
        if not np.array_equal(lhs, rhs):
            witness = (_first_col(lhs, rhs, M.labels), E.labels[j])
            break
    report.record("compatibility", witness is None, witness)
    return report


def hopf_module_morphism_check(fmat, M: HopfModule, N: HopfModule) -> bool:
    """True iff ``fmat: M -> N`` is E-linear and commutes with the coactions."""
    f = M.field
    fmat = f.array(fmat)
    if fmat.shape != (N.dim, M.dim):
        raise DimensionMismatch(f"map must be {N.dim}x{M.dim}, got {fmat.shape}")
    if M.comod.alg.dim != N.comod.alg.dim or M.hopf.dim != N.hopf.dim:
        raise DimensionMismatch("modules over different algebras")
    for j in range(M.comod.alg.dim):
        if not np.array_equal(f.matmul(fmat, M.action[j]), f.matmul(N.action[j], fmat)):
            return False
    lhs = f.matmul(f.kron(fmat, f.eye(M.hopf.dim)), M.coaction)
    return np.array_equal(lhs, f.matmul(N.coaction, fmat))


def hopf_module_isomorphism_check(fmat, M: HopfModule, N: HopfModule) -> bool:
    return M.dim == N.dim and hopf_module_morphism_check(fmat, M, N) and matrix_rank(fmat, M.field) == M.dim


# -- builders -------------------------------------------------------------


def dual_numbers(field: Field) -> StructureAlgebra:
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    return StructureAlgebra(field, mult, [1, 0], ["1", "h"], name="E2")


def build_dual_numbers_comodule(field: Field, hopf: HopfAlgebra | None = None) -> ComoduleAlgebra:
    """k[h]/(h^2) coacted on by Sweedler's algebra through h -> h(x)g + 1(x)h."""
    H = hopf or build_sweedler_h4(field)
    coaction = np.zeros((8, 2), dtype=np.int64)
    coaction[0 * 4 + 0, 0] = 1
    coaction[1 * 4 + 1, 1] = 1
    coaction[0 * 4 + 2, 1] = 1
    return ComoduleAlgebra(H, dual_numbers(field), coaction, name="(H4, E2)")


def trivial_coefficients(H: HopfAlgebra) -> ComoduleAlgebra:
    """The ground field with coaction 1 -> 1 (x) 1."""
    return ComoduleAlgebra(H, ground_algebra(H.field), H.unit_col, name=f"({H.name}, k)")


def self_comodule(H: HopfAlgebra) -> ComoduleAlgebra:
    return ComoduleAlgebra(H, H.alg, H.comult, name=f"({H.name}, {H.name})")


def over_trivial_hopf(alg: StructureAlgebra) -> ComoduleAlgebra:
    """``alg`` as a comodule algebra over the ground field, coaction the identity."""
    return ComoduleAlgebra(trivial_hopf(alg.field), alg, alg.field.eye(alg.dim), name=f"(k, {alg.name})")


def group_algebra(L: FiniteGroup, field: Field) -> StructureAlgebra:
    n = L.order
    mult = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            mult[a, b, L.mul(a, b)] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[L.identity] = 1
    return StructureAlgebra(field, mult, unit, list(L.labels), name=f"k[{L.name}]")


def build_conjugation_comodule(L: FiniteGroup, G_elements, field: Field) -> ComoduleAlgebra:
    """k[L] over k^G with ``x -> sum_g g x g^-1 (x) d_g`` for a subgroup ``G`` of ``L``."""
    G, embed = L.subgroup(G_elements, name=f"{L.name}|{len(G_elements)}")
    H = build_function_hopf(G, field)
    n, m = L.order, G.order
    coaction = np.zeros((n * m, n), dtype=np.int64)
    for x in range(n):
        for gi, g in enumerate(embed):
            coaction[L.conj(g, x) * m + gi, x] = 1
    return ComoduleAlgebra(H, group_algebra(L, field), coaction, name=f"({H.name}, k[{L.name}])")


def regular_module(E: ComoduleAlgebra) -> HopfModule:
    """E as an (H, E)-Hopf module over itself by right multiplication."""
    return HopfModule(E, E.alg.right_basis, E.coaction, E.alg.labels, name=E.alg.name)


def check_all(E: ComoduleAlgebra) -> AxiomReport:
    """Hopf axioms plus comodule-algebra axioms."""
    report = AxiomReport(f"{E.name}")
    report.extend(check_hopf_axioms(E.hopf), "hopf: ")
    report.extend(check_comodule_algebra(E), "comodule: ")
    return report
