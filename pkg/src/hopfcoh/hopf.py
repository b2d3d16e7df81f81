"""Hopf algebras as structure-constant algebras with comultiplication, counit, antipode."""

from __future__ import annotations

import warnings
from functools import cached_property

import numpy as np

from .algebra import (
    AffineSubspace,
    AxiomReport,
    StructureAlgebra,
    affine_preimage,
    check_algebra_axioms,
    ground_algebra,
    iter_batches,
    linear_map_is_algebra_morphism,
    tensor_algebra,
)
from .exactmath import DimensionMismatch, Field, Unsolvable
from .groups import FiniteGroup, NotAGroup


class CharacteristicTwoWarning(UserWarning):
    pass


class HopfAlgebra:
    """``comult`` is dim**2 x dim, ``counit`` is 1 x dim, ``antipode`` dim x dim."""

    def __init__(self, alg: StructureAlgebra, comult, counit, antipode, group: FiniteGroup | None = None,
                 warning: str | None = None):
        f = alg.field
        n = alg.dim
        self.alg = alg
        self.comult = f.array(comult)
        self.counit = f.array(counit).reshape(1, -1)
        self.antipode = f.array(antipode)
        if self.comult.shape != (n * n, n):
            raise DimensionMismatch(f"comultiplication must be {n * n}x{n}, got {self.comult.shape}")
        if self.counit.shape != (1, n):
            raise DimensionMismatch("counit must be 1 x dim")
        if self.antipode.shape != (n, n):
            raise DimensionMismatch("antipode must be dim x dim")
        self.group = group
        self.warning = warning

    @property
    def field(self) -> Field:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def name(self) -> str:
        return self.alg.name

    def __repr__(self):
        return f"HopfAlgebra({self.name}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        return (
            isinstance(other, HopfAlgebra)
            and self.alg == other.alg
            and np.array_equal(self.comult, other.comult)
            and np.array_equal(self.counit, other.counit)
            and np.array_equal(self.antipode, other.antipode)
        )

    __hash__ = object.__hash__

    @cached_property
    def unit_col(self) -> np.ndarray:
        """eta as a dim x 1 matrix."""
        return self.alg.unit.reshape(-1, 1)

    @cached_property
    def square(self) -> StructureAlgebra:
        return tensor_algebra(self.alg, self.alg)


def check_hopf_axioms(H: HopfAlgebra) -> AxiomReport:
    f = H.field
    n = H.dim
    eye = f.eye(n)
    D, e, s = H.comult, H.counit, H.antipode
    report = AxiomReport(f"hopf {H.name}")
    report.extend(check_algebra_axioms(H.alg))

    def first_bad_column(lhs, rhs):
        bad = np.nonzero(np.any(lhs != rhs, axis=0))[0]
        return H.alg.labels[bad[0]] if bad.size else None

    w = first_bad_column(f.matmul(f.kron(D, eye), D), f.matmul(f.kron(eye, D), D))
    report.record("coassociativity", w is None, w)
    w = first_bad_column(f.matmul(f.kron(e, eye), D), eye) or first_bad_column(f.matmul(f.kron(eye, e), D), eye)
    report.record("counit", w is None, w)
    ok, w = linear_map_is_algebra_morphism(D, H.alg, H.square)
    report.record("comultiplication multiplicative", ok, w)
    ok, w = linear_map_is_algebra_morphism(e, H.alg, ground_algebra(f))
    report.record("counit multiplicative", ok, w)
    mu = H.alg.mult_matrix
    eta_eps = f.matmul(H.unit_col, e)
    w = first_bad_column(f.matmul(mu, f.matmul(f.kron(s, eye), D)), eta_eps) or first_bad_column(
        f.matmul(mu, f.matmul(f.kron(eye, s), D)), eta_eps
    )
    report.record("antipode", w is None, w)
    return report


def build_function_hopf(G: FiniteGroup, field: Field) -> HopfAlgebra:
    """k^G with basis the indicator functions of ``G``."""
    n = G.order
    mult = np.zeros((n, n, n), dtype=np.int64)
    for g in range(n):
        mult[g, g, g] = 1
    comult = np.zeros((n * n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            comult[a * n + b, G.mul(a, b)] = 1
    counit = np.zeros((1, n), dtype=np.int64)
    counit[0, G.identity] = 1
    antipode = np.zeros((n, n), dtype=np.int64)
    for g in range(n):
        antipode[G.inv(g), g] = 1
    labels = [f"d{lab}" for lab in G.labels]
    alg = StructureAlgebra(field, mult, np.ones(n, dtype=np.int64), labels, name=f"k^{G.name}")
    return HopfAlgebra(alg, comult, counit, antipode, group=G)


H4_LABELS = ["1", "g", "h", "gh"]


def sweedler_multiplication() -> np.ndarray:
    mult = np.zeros((4, 4, 4), dtype=np.int64)
    one, g, h, gh = range(4)
    for x in range(4):
        mult[one, x, x] = 1
        mult[x, one, x] = 1
    mult[g, g, one] = 1
    mult[g, h, gh] = 1
    mult[g, gh, h] = 1
    mult[h, g, gh] = -1
    mult[gh, g, h] = -1
    return mult


def build_sweedler_h4(field: Field) -> HopfAlgebra:
    """Sweedler's four-dimensional Hopf algebra on the basis 1, g, h, gh."""
    warning = None
    if field.characteristic == 2:
        warning = "gh + hg = 0 degenerates to commutation in characteristic 2"
        warnings.warn(warning, CharacteristicTwoWarning, stacklevel=2)
    alg = StructureAlgebra(field, sweedler_multiplication(), [1, 0, 0, 0], H4_LABELS, name="H4")
    one, g, h, gh = range(4)
    comult = np.zeros((16, 4), dtype=np.int64)
    comult[one * 4 + one, one] = 1
    comult[g * 4 + g, g] = 1
    comult[h * 4 + g, h] = 1
    comult[one * 4 + h, h] = 1
    comult[gh * 4 + one, gh] = 1
    comult[g * 4 + gh, gh] = 1
    counit = [[1, 1, 0, 0]]
    antipode = np.zeros((4, 4), dtype=np.int64)
    antipode[one, one] = 1
    antipode[g, g] = 1
    antipode[gh, h] = 1
    antipode[h, gh] = -1
    return HopfAlgebra(alg, comult, counit, antipode, warning=warning)


def trivial_hopf(field: Field) -> HopfAlgebra:
    """The ground field as a one-dimensional Hopf algebra."""
    return HopfAlgebra(ground_algebra(field), [[1]], [[1]], [[1]])


def grouplike_mask(H: HopfAlgebra, X: np.ndarray) -> np.ndarray:
    p = H.field.p
    delta = X @ H.comult.T % p
    square = (X[:, :, None] * X[:, None, :]).reshape(X.shape[0], -1) % p
    return np.all(delta == square, axis=1)


def grouplikes(H: HopfAlgebra, budget: int | None = None) -> tuple[np.ndarray, FiniteGroup]:
    """Grouplike elements (sorted coordinate rows) and their multiplication table."""
    try:
        slice_ = affine_preimage(H.counit, [1], H.field)
    except Unsolvable:
        slice_ = AffineSubspace(np.zeros(H.dim, dtype=np.int64), np.zeros((0, H.dim), dtype=np.int64))
    found = [block[grouplike_mask(H, block)] for block in iter_batches(H.alg, slice_, budget=budget)]
    rows = np.concatenate(found) if found else np.zeros((0, H.dim), dtype=np.int64)
    rows = rows[np.lexsort(rows.T[::-1])] if rows.size else rows
    pos = {tuple(int(v) for v in r): i for i, r in enumerate(rows)}
    table = [[pos[tuple(int(v) for v in H.alg.mul(a, b))] for b in rows] for a in rows]
    labels = [_describe(H.alg, r) for r in rows]
    return rows, FiniteGroup(table, labels, name=f"Gr({H.name})")


def _describe(A: StructureAlgebra, coords) -> str:
    return repr(A.element(coords))


def recognize_function_hopf(H: HopfAlgebra) -> FiniteGroup | None:
    """Recover ``G`` when ``H`` is literally k^G in its indicator basis."""
    if H.group is not None:
        return H.group
    n = H.dim
    m = H.alg.mult
    expected = np.zeros_like(m)
    for g in range(n):
        expected[g, g, g] = 1
    if not np.array_equal(m, expected) or np.any(H.alg.unit != 1):
        return None
    comult = H.comult
    if np.any((comult != 0) & (comult != 1)) or np.any(comult.sum(axis=1) != 1):
        return None
    table = np.argmax(comult, axis=1).reshape(n, n)
    try:
        G = FiniteGroup(table, [lab[1:] if lab.startswith("d") else lab for lab in H.alg.labels], name="G")
    except NotAGroup:
        return None
    if not _same_up_to_labels(H, build_function_hopf(G, H.field)):
        return None
    return G


def _same_up_to_labels(H: HopfAlgebra, K: HopfAlgebra) -> bool:
    return (
        np.array_equal(H.comult, K.comult)
        and np.array_equal(H.counit, K.counit)
        and np.array_equal(H.antipode, K.antipode)
        and np.array_equal(H.alg.mult, K.alg.mult)
    )
