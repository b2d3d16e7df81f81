"""Exact scalars and dense linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays: ``int64`` residues for a prime field,
``object`` arrays of :class:`fractions.Fraction` for the rationals.  Every
function takes the :class:`Field` explicitly; nothing here uses floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

MAX_ENUM_PRIME = 2**16


class ZeroInverse(ZeroDivisionError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


class Singular(ArithmeticError):
    pass


class Unsolvable(ArithmeticError):
    pass


class RationalFieldNotEnumerable(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """Either the prime field F_p (``p`` set) or Q (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rational(cls) -> "Field":
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def dtype(self):
        return np.int64 if self.p is not None else object

    @property
    def enumerable(self) -> bool:
        return self.p is not None and self.p < MAX_ENUM_PRIME

    def size(self) -> int:
        if self.p is None:
            raise RationalFieldNotEnumerable("Q is infinite")
        return self.p

    def __str__(self):
        return f"F{self.p}" if self.p is not None else "Q"

    # -- scalars ----------------------------------------------------------

    def scalar(self, value):
        if self.p is not None:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def elements(self):
        """All scalars of F_p in increasing order."""
        return range(self.size())

    # -- arrays -----------------------------------------------------------

    def array(self, data) -> np.ndarray:
        if self.p is not None:
            arr = np.asarray(data)
            if arr.dtype == object:
                arr = np.vectorize(self.scalar, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
            return np.asarray(arr, dtype=np.int64) % self.p
        arr = np.asarray(data, dtype=object)
        if arr.size:
            arr = np.vectorize(Fraction, otypes=[object])(arr)
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return arr % self.p
        return arr

    def zeros(self, shape) -> np.ndarray:
        if self.p is not None:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out[...] = Fraction(0)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        return self.reduce(a @ b)

    def kron(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.reduce(np.kron(out, m))
        return out

    def is_zero(self, arr: np.ndarray) -> bool:
        return not np.any(arr != 0)


def scalar_inverse(a, field: Field):
    if field.p is not None:
        a = int(a) % field.p
        if a == 0:
            raise ZeroInverse("0 has no inverse")
        return pow(a, -1, field.p)
    a = Fraction(a)
    if a == 0:
        raise ZeroInverse("0 has no inverse")
    return 1 / a


def _scale_row(row: np.ndarray, pivot, field: Field) -> np.ndarray:
    if field.p is not None:
        return row * pow(int(pivot), -1, field.p) % field.p
    return row / pivot


def rref(A: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting."""
    R = field.array(A).copy()
    if R.ndim != 2:
        raise DimensionMismatch("rref needs a 2-d array")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = _scale_row(R[r], R[r, c], field)
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = field.reduce(R[i] - R[i, c] * R[r])
        pivots.append(c)
        r += 1
    return R, pivots


def matrix_rank(A: np.ndarray, field: Field) -> int:
    A = field.array(A)
    if A.size == 0:
        return 0
    return len(rref(A, field)[1])


def kernel_basis(A: np.ndarray, field: Field) -> np.ndarray:
    """Rows form a basis of ``{x | A x = 0}`` (free-variable parametrisation)."""
    A = field.array(A)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return field.eye(cols)
    R, pivots = rref(A, field)
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros((len(free), cols))
    for t, f in enumerate(free):
        basis[t, f] = field.one()
        for row, pc in enumerate(pivots):
            basis[t, pc] = field.reduce(np.array([-R[row, f]], dtype=R.dtype))[0]
    return basis


class LinearSolution(NamedTuple):
    particular: np.ndarray
    kernel: np.ndarray  # rows


def solve_linear(A: np.ndarray, b, field: Field) -> LinearSolution:
    """Particular solution plus kernel basis of ``A x = b``; raises Unsolvable."""
    A = field.array(A)
    b = field.array(b).reshape(-1)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"matrix {A.shape} vs right-hand side {b.shape}")
    rows, cols = A.shape
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1) if rows else field.zeros((0, cols + 1))
    R, pivots = rref(aug, field) if rows else (aug, [])
    if cols in pivots:
        raise Unsolvable("inconsistent system")
    x = field.zeros(cols)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, cols]
    return LinearSolution(x, kernel_basis(A, field) if rows else field.eye(cols))


def matrix_inverse(A: np.ndarray, field: Field) -> np.ndarray:
    A = field.array(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquare(f"shape {A.shape}")
    n = A.shape[0]
    R, pivots = rref(np.concatenate([A, field.eye(n)], axis=1), field)
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return R[:, n:]


def project_to_quotient(basis_rows: np.ndarray, field: Field):
    """Deterministic complement of a row span.

    Returns ``(R, pivots, free)`` where ``R`` is the RREF of the span; the
    quotient ``V / span`` has the coordinates ``free`` as basis, and a vector
    is reduced by clearing its pivot coordinates with rows of ``R``.
    """
    dim = basis_rows.shape[1]
    if basis_rows.shape[0] == 0:
        return field.zeros((0, dim)), [], list(range(dim))
    R, pivots = rref(basis_rows, field)
    R = R[: len(pivots)]
    free = [c for c in range(dim) if c not in pivots]
    return R, pivots, free


def quotient_coords(v: np.ndarray, R: np.ndarray, pivots: list[int], free: list[int], field: Field):
    v = field.array(v).copy()
    for row, pc in enumerate(pivots):
        if v[pc] != 0:
            v = field.reduce(v - v[pc] * R[row])
    return v[free]
