"""Finite-dimensional unital algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from . import _kernels
from .config import require_budget
from .exactmath import (
    DimensionMismatch,
    Field,
    RationalFieldNotEnumerable,
    Singular,
    Unsolvable,
    matrix_inverse,
    solve_linear,
)


class ParentMismatch(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


@dataclass
class AxiomReport:
    """Outcome of an axiom suite: one entry per axiom, with a witness on failure."""

    subject: str
    results: list[tuple[str, bool, object]] = dc_field(default_factory=list)
    data: dict = dc_field(default_factory=dict)

    def record(self, name: str, ok: bool, witness=None) -> bool:
        self.results.append((name, bool(ok), None if ok else witness))
        return ok

    def extend(self, other: "AxiomReport", prefix: str = "") -> None:
        for name, ok, witness in other.results:
            self.results.append((prefix + name, ok, witness))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[tuple[str, object]]:
        return [(name, w) for name, ok, w in self.results if not ok]

    def failed(self, name: str) -> bool:
        return any(n == name and not ok for n, ok, _ in self.results)

    def to_dict(self) -> dict:
        out = {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"name": n, "ok": ok, **({} if ok else {"witness": repr(w)})} for n, ok, w in self.results
            ],
        }
        if self.data:
            out["data"] = self.data
        return out


class StructureAlgebra:
    """Associative unital algebra: ``e_i e_j = sum_k mult[i, j, k] e_k``."""

    def __init__(self, field: Field, mult, unit, labels=None, name: str = ""):
        self.field = field
        self.mult = field.array(mult)
        if self.mult.ndim != 3 or len(set(self.mult.shape)) != 1:
            raise DimensionMismatch(f"structure constants must be n*n*n, got {self.mult.shape}")
        self.dim = self.mult.shape[0]
        self.unit = field.array(unit).reshape(-1)
        if self.unit.shape != (self.dim,):
            raise DimensionMismatch("unit vector has wrong length")
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.dim)]
        if len(self.labels) != self.dim:
            raise DimensionMismatch("label count differs from dimension")
        self.name = name or f"A{self.dim}"

    def __repr__(self):
        return f"StructureAlgebra({self.name}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        return (
            isinstance(other, StructureAlgebra)
            and self.field == other.field
            and self.labels == other.labels
            and np.array_equal(self.mult, other.mult)
            and np.array_equal(self.unit, other.unit)
        )

    __hash__ = object.__hash__

    # -- elements ---------------------------------------------------------

    def element(self, coords) -> "Element":
        return Element(self, self.field.array(coords).reshape(-1))

    def basis(self, i: int) -> "Element":
        v = self.field.zeros(self.dim)
        v[i] = self.field.one()
        return Element(self, v)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.one()
        return v

    def one(self) -> "Element":
        return Element(self, self.unit.copy())

    def zero(self) -> "Element":
        return Element(self, self.field.zeros(self.dim))

    def from_dict(self, terms: dict) -> "Element":
        """Element from ``{label: coefficient}``."""
        v = self.field.zeros(self.dim)
        for label, c in terms.items():
            v[self.labels.index(label)] = self.field.scalar(c)
        return Element(self, self.field.reduce(v))

    # -- raw-array arithmetic --------------------------------------------

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        n = self.dim
        left = self.field.reduce(a @ self.mult.reshape(n, n * n)).reshape(n, n)
        return self.field.reduce(b @ left)

    @cached_property
    def left_basis(self) -> np.ndarray:
        """``left_basis[i]`` is the matrix of ``x -> e_i x``."""
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right_basis(self) -> np.ndarray:
        """``right_basis[j]`` is the matrix of ``x -> x e_j``."""
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        return self.field.reduce(np.tensordot(a, self.left_basis, axes=(0, 0)))

    def right_matrix(self, b: np.ndarray) -> np.ndarray:
        return self.field.reduce(np.tensordot(b, self.right_basis, axes=(0, 0)))

    @cached_property
    def mult_matrix(self) -> np.ndarray:
        """mu as a linear map A (x) A -> A, i.e. dim x dim**2."""
        n = self.dim
        return np.ascontiguousarray(self.mult.reshape(n * n, n).T)

    @cached_property
    def triples(self):
        if not self.field.is_prime:
            raise RationalFieldNotEnumerable("kernels need a prime field")
        return _kernels.triples_from_constants(self.mult)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Two-sided inverse of ``a`` or NotInvertible."""
        try:
            x = solve_linear(self.left_matrix(a), self.unit, self.field)
        except Unsolvable:
            raise NotInvertible("left multiplication is singular") from None
        if x.kernel.shape[0]:
            raise NotInvertible("left multiplication is singular")
        b = x.particular
        if not np.array_equal(self.mul(b, a), self.unit):
            raise NotInvertible("left inverse is not a right inverse")
        return b

    def is_commutative(self) -> bool:
        return np.array_equal(self.mult, self.mult.transpose(1, 0, 2))

    # -- batch helpers over prime fields ---------------------------------

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return _kernels.batch_mul(A, B, self.triples, self.field.p)

    def batch_inverse(self, A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(mask, inverses)`` for the rows of ``A``; inverses valid where mask."""
        p = self.field.p
        A = np.asarray(A, dtype=np.int64)
        if A.shape[0] == 0:
            return np.zeros(0, dtype=bool), np.zeros((0, self.dim), dtype=np.int64)
        chunk = 1 << 14
        if A.shape[0] > chunk:
            parts = [self.batch_inverse(A[lo:lo + chunk]) for lo in range(0, A.shape[0], chunk)]
            return np.concatenate([m for m, _ in parts]), np.concatenate([s for _, s in parts])
        L = np.tensordot(A, self.left_basis, axes=(1, 0)) % p
        ok, sol = _kernels.batch_solve(L, self.unit, p)
        if ok.any():
            idx = np.nonzero(ok)[0]
            back = self.batch_mul(sol[idx], A[idx])
            ok[idx] = np.all(back == self.unit[None, :], axis=1)
        return ok, sol


class Element:
    """An element of a :class:`StructureAlgebra`, by coordinates."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent: StructureAlgebra, coords: np.ndarray):
        if coords.shape != (parent.dim,):
            raise DimensionMismatch("coordinate vector has wrong length")
        self.parent = parent
        self.coords = coords

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.parent is not self.parent:
            if not (isinstance(other, Element) and other.parent == self.parent):
                raise ParentMismatch("elements live in different algebras")

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.parent, self.parent.mul(self.coords, other.coords))
        f = self.parent.field
        return Element(self.parent, f.reduce(self.coords * f.scalar(other)))

    def __rmul__(self, scalar):
        f = self.parent.field
        return Element(self.parent, f.reduce(self.coords * f.scalar(scalar)))

    def __add__(self, other):
        self._check(other)
        return Element(self.parent, self.parent.field.reduce(self.coords + other.coords))

    def __sub__(self, other):
        self._check(other)
        return Element(self.parent, self.parent.field.reduce(self.coords - other.coords))

    def __neg__(self):
        return Element(self.parent, self.parent.field.reduce(-self.coords))

    def __eq__(self, other):
        return isinstance(other, Element) and other.parent == self.parent and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        return tuple(int(c) if self.parent.field.is_prime else c for c in self.coords)

    def is_zero(self) -> bool:
        return self.parent.field.is_zero(self.coords)

    def inverse(self) -> "Element":
        return Element(self.parent, self.parent.inverse(self.coords))

    def __repr__(self):
        terms = []
        for c, label in zip(self.coords, self.parent.labels):
            if c != 0:
                terms.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(terms) if terms else "0"


def multiply(a: Element, b: Element) -> Element:
    return a * b


def try_inverse(a: Element) -> Element:
    return a.inverse()


def check_algebra_axioms(A: StructureAlgebra) -> AxiomReport:
    report = AxiomReport(f"algebra {A.name}")
    n = A.dim
    f = A.field
    # (e_i e_j) e_l vs e_i (e_j e_l) for all triples at once
    flat = A.mult.reshape(n * n, n)
    left = _dot(flat, A.mult.reshape(n, n * n), f).reshape(n, n, n, n)
    right = _dot(flat, A.mult.transpose(1, 0, 2).reshape(n, n * n), f).reshape(n, n, n, n).transpose(2, 0, 1, 3)
    bad = np.argwhere(left != right)
    witness = tuple(int(t) for t in bad[0][:3]) if bad.size else None
    report.record("associativity", not bad.size, witness)
    lu = A.left_matrix(A.unit)
    ru = A.right_matrix(A.unit)
    eye = f.eye(n)
    bad_cols = [j for j in range(n) if not (np.array_equal(lu[:, j], eye[:, j]) and np.array_equal(ru[:, j], eye[:, j]))]
    report.record("unit", not bad_cols, A.labels[bad_cols[0]] if bad_cols else None)
    return report


def tensor_algebra(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """A (x) B with basis pair (i, j) at index ``i * dim(B) + j``."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    f = A.field
    n, m = A.dim, B.dim
    mult = f.reduce(np.einsum("ikm,jln->ijklmn", A.mult, B.mult).reshape(n * m, n * m, n * m))
    labels = [f"{a}⊗{b}" for a in A.labels for b in B.labels]
    return StructureAlgebra(f, mult, f.kron(A.unit, B.unit), labels, name=f"{A.name}⊗{B.name}")


def ground_algebra(field: Field) -> StructureAlgebra:
    return StructureAlgebra(field, [[[1]]], [1], ["1"], name="k")


class AffineSubspace(NamedTuple):
    """``{particular + sum_t c_t * basis[t]}``; ``basis`` rows are directions."""

    particular: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def affine_preimage(mat: np.ndarray, target, field: Field) -> AffineSubspace:
    """``{x | mat x = target}``; raises Unsolvable when empty."""
    sol = solve_linear(mat, target, field)
    return AffineSubspace(sol.particular, sol.kernel)


def count_points(space: AffineSubspace | None, A: StructureAlgebra) -> int:
    p = A.field.size()
    k = A.dim if space is None else space.dim
    return p**k


def _full_space(A: StructureAlgebra) -> AffineSubspace:
    return AffineSubspace(np.zeros(A.dim, dtype=np.int64), np.eye(A.dim, dtype=np.int64))


def block_ranges(total: int, batch: int = 1 << 15) -> list[tuple[int, int]]:
    return [(lo, min(total, lo + batch)) for lo in range(0, total, batch)]


def points_in_range(space: AffineSubspace, p: int, lo: int, hi: int) -> np.ndarray:
    """Points number ``lo .. hi-1`` of ``space`` in lexicographic parameter order."""
    if space.dim == 0:
        return np.repeat(space.particular[None, :] % p, hi - lo, axis=0)
    return _kernels.slice_points(space.particular, space.basis, lo, hi, p)


def iter_batches(A: StructureAlgebra, constraint: AffineSubspace | None = None, batch: int = 1 << 15,
                 budget: int | None = None) -> Iterator[np.ndarray]:
    """Coordinate arrays of every point, lexicographic in the parameters."""
    if not A.field.is_prime:
        raise RationalFieldNotEnumerable("cannot enumerate elements over Q")
    space = _full_space(A) if constraint is None else constraint
    total = A.field.p ** space.dim
    require_budget(total, f"enumeration of {A.name}", budget)
    for lo, hi in block_ranges(total, batch):
        yield points_in_range(space, A.field.p, lo, hi)


def enumerate_elements(A: StructureAlgebra, constraint: AffineSubspace | None = None,
                       budget: int | None = None) -> Iterator[Element]:
    """Every element (of the affine subspace), in lexicographic coordinate order."""
    if constraint is None:
        blocks = iter_batches(A, None, budget=budget)
    else:
        # parameter order and coordinate order differ on a general slice
        blocks = [all_points(A, constraint, budget)]
    for block in blocks:
        for row in block:
            yield Element(A, row)


def all_points(A: StructureAlgebra, constraint: AffineSubspace | None = None, budget: int | None = None) -> np.ndarray:
    """All points as rows, sorted lexicographically."""
    blocks = list(iter_batches(A, constraint, budget=budget))
    pts = np.concatenate(blocks) if blocks else np.zeros((0, A.dim), dtype=np.int64)
    return pts if constraint is None or pts.shape[0] < 2 else pts[np.lexsort(pts.T[::-1])]


def unit_group(A: StructureAlgebra, constraint: AffineSubspace | None = None,
               budget: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """All invertible points (lexicographically sorted rows) and their inverses."""
    pts = all_points(A, constraint, budget)
    ok, inv = A.batch_inverse(pts)
    return pts[ok], inv[ok]


def linear_map_is_algebra_morphism(mat: np.ndarray, src: StructureAlgebra, dst: StructureAlgebra):
    """Return ``(ok, witness)``: unit preserved and ``f(e_i e_j) = f(e_i) f(e_j)``."""
    f = src.field
    if not np.array_equal(f.matmul(mat, src.unit), dst.unit):
        return False, "unit"
    n, m = src.dim, dst.dim
    lhs = _dot(src.mult.reshape(n * n, n), mat.T, f).reshape(n, n, m)
    # images of e_i times images of e_j, contracted one factor at a time
    step = _dot(mat.T, dst.mult.reshape(m, m * m), f).reshape(n, m, m)
    rhs = _dot(mat.T, step.transpose(1, 0, 2).reshape(m, n * m), f).reshape(n, n, m).transpose(1, 0, 2)
    bad = np.argwhere(np.any(lhs != rhs, axis=2))
    if bad.size:
        i, j = bad[0]
        return False, (src.labels[i], src.labels[j])
    return True, None


def _dot(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    """Exact product; float64 BLAS over F_p while every partial sum stays below 2**53."""
    if field.is_prime and a.shape[-1] * (field.p - 1) ** 2 < 2**53:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % field.p
    return field.reduce(a @ b)


def solve_in_span(mat: np.ndarray, vec: np.ndarray, field: Field) -> np.ndarray:
    """Unique ``x`` with ``mat x = vec``; raises Singular when not unique."""
    try:
        sol = solve_linear(mat, vec, field)
    except Unsolvable:
        raise Singular("vector outside the span") from None
    if sol.kernel.shape[0]:
        raise Singular("columns are dependent")
    return sol.particular


__all__ = [
    "AffineSubspace",
    "AxiomReport",
    "Element",
    "FieldMismatch",
    "NotInvertible",
    "ParentMismatch",
    "StructureAlgebra",
    "affine_preimage",
    "all_points",
    "check_algebra_axioms",
    "enumerate_elements",
    "ground_algebra",
    "iter_batches",
    "linear_map_is_algebra_morphism",
    "matrix_inverse",
    "multiply",
    "tensor_algebra",
    "try_inverse",
    "unit_group",
]
