"""Restricted cohomology of a Hopf module on the spaces Hom(M, M (x) H^n).

A level-``n`` element is a ``(dim M * dim H**n) x dim M`` matrix.  The
S-linear maps form a subspace computed once by solving the linearity
constraints; searches and group operations run in RREF coordinates on that
subspace.  The composition-type product multiplies the M-parts by
composition and the H-parts in the algebra ``H^(x)n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .algebra import (
    AffineSubspace,
    affine_preimage,
    AxiomReport,
    StructureAlgebra,
    block_ranges,
    check_algebra_axioms,
    ground_algebra,
    linear_map_is_algebra_morphism,
    points_in_range,
    tensor_algebra,
)
from .cohomology import AlgebraDiagram
from .comodule import ComoduleAlgebra, HopfModule, check_comodule_algebra
from .config import pmap, require_budget
from .exactmath import Field, Singular, kernel_basis, matrix_inverse, matrix_rank, rref
from .precosimplicial import CohomologyResult, PreCosimplicialGroup, key, lex_sort


class LevelMismatch(ValueError):
    pass


class BadIndex(IndexError):
    pass


class ConditionFFailed(ArithmeticError):
    pass


class NotInSubspace(ArithmeticError):
    pass


# -- flips and intertwiners --------------------------------------------------


def flip_matrix(d: int, field: Field) -> np.ndarray:
    """``T: a (x) b -> b (x) a`` on ``V (x) V`` with ``dim V = d``."""
    out = field.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            out[b * d + a, a * d + b] = field.one()
    return out


def chi_matrix(d: int, n: int, field: Field) -> np.ndarray:
    """``(a_1..a_n) (x) (b_1..b_n) -> (a_1 (x) b_1) .. (a_n (x) b_n)``."""
    size = d**n
    out = field.zeros((size * size, size * size))
    for a in range(size):
        a_digits = np.unravel_index(a, (d,) * n) if n else ()
        for b in range(size):
            b_digits = np.unravel_index(b, (d,) * n) if n else ()
            pairs = [x for pair in zip(a_digits, b_digits) for x in pair]
            target = int(np.ravel_multi_index(pairs, (d,) * (2 * n))) if n else 0
            out[target, a * size + b] = field.one()
    return out


@dataclass
class FlipAndChi:
    flip: np.ndarray
    chi: dict[int, np.ndarray]

    @classmethod
    def build(cls, d: int, field: Field, levels=(0, 1, 2)) -> "FlipAndChi":
        return cls(flip_matrix(d, field), {n: chi_matrix(d, n, field) for n in levels})


def hopf_power(H, n: int) -> StructureAlgebra:
    """``H^(x)n`` as an algebra; ``n = 0`` is the ground field."""
    if n == 0:
        return ground_algebra(H.field)
    A = H.alg
    for _ in range(n - 1):
        A = tensor_algebra(A, H.alg)
    return A


# -- the spaces W^n ----------------------------------------------------------


class WSpace:
    """``Hom(M, M (x) H^n)``, or its S-linear part when ``s_linear``."""

    def __init__(self, M: HopfModule, n: int, s_linear: bool = True):
        if n < 0:
            raise LevelMismatch(f"level {n} is negative")
        f = M.field
        self.module = M
        self.level = n
        self.field = f
        self.s_linear = s_linear
        self.power = hopf_power(M.hopf, n)
        self.hn = self.power.dim
        self.shape = (M.dim * self.hn, M.dim)
        total = self.shape[0] * self.shape[1]
        if s_linear:
            raw = kernel_basis(self._linearity_system(), f)
        else:
            raw = f.eye(total)
        if raw.shape[0]:
            R, pivots = rref(raw, f)
            self.basis = R[: len(pivots)]
            self.pivots = list(pivots)
        else:
            self.basis, self.pivots = raw, []
        self.dim = self.basis.shape[0]

    def __repr__(self):
        kind = "S" if self.s_linear else "k"
        return f"W_{kind}^{self.level}({self.module.name}), dim {self.dim}"

    def _linearity_system(self) -> np.ndarray:
        """Rows of ``Phi rho_j - (rho_j (x) id) Phi = 0`` acting on row-major ``vec(Phi)``."""
        f = self.field
        rows, cols = self.shape
        blocks = []
        for rho in self.module.action:
            right = f.kron(f.eye(rows), rho.T)
            left = f.kron(f.kron(rho, f.eye(self.hn)), f.eye(cols))
            blocks.append(f.reduce(right - left))
        if not blocks:
            return f.zeros((0, rows * cols))
        return np.concatenate(blocks, axis=0)

    # -- coordinates --------------------------------------------------------

    def contains(self, mat: np.ndarray) -> bool:
        mat = self.field.array(mat)
        if mat.shape != self.shape:
            return False
        flat = mat.reshape(-1)
        return np.array_equal(self.field.matmul(flat[self.pivots], self.basis), flat)

    def coords(self, mat: np.ndarray, check: bool = True) -> np.ndarray:
        mat = self.field.array(mat)
        if mat.shape != self.shape:
            raise LevelMismatch(f"expected a {self.shape} matrix, got {mat.shape}")
        if check and not self.contains(mat):
            raise NotInSubspace(f"map is not in {self!r}")
        return mat.reshape(-1)[self.pivots]

    def batch_coords(self, mats: np.ndarray) -> np.ndarray:
        return mats.reshape(mats.shape[0], -1)[:, self.pivots]

    def matrix(self, coords) -> np.ndarray:
        flat = self.field.matmul(self.field.array(coords), self.basis)
        return flat.reshape(self.shape)

    def batch_matrices(self, rows: np.ndarray) -> np.ndarray:
        flat = self.field.reduce(np.asarray(rows) @ self.basis)
        return flat.reshape((-1,) + self.shape)

    # -- products -----------------------------------------------------------

    @cached_property
    def unit(self) -> np.ndarray:
        """``m -> m (x) 1 (x) .. (x) 1``."""
        f = self.field
        return f.kron(f.eye(self.module.dim), self.power.unit.reshape(-1, 1))

    def product(self, phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
        return circ_dot(self, phi, psi)

    def batch_product(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise products of stacks of matrices of shape ``(N,) + shape``."""
        f = self.field
        dm = self.module.dim
        a = A.reshape(-1, dm, self.hn, dm)
        b = B.reshape(-1, dm, self.hn, dm)
        inner = f.reduce(np.einsum("nixk,nkbm->nixbm", a, b))
        out = f.reduce(np.einsum("nixbm,xby->niym", inner, self.power.mult))
        return out.reshape((-1,) + self.shape)

    @cached_property
    def algebra(self) -> StructureAlgebra:
        """The space as a structure-constant algebra in its own coordinates."""
        f = self.field
        mats = self.batch_matrices(f.eye(self.dim)) if self.dim else f.zeros((0,) + self.shape)
        d = self.dim
        left = np.repeat(mats, d, axis=0)
        right = np.tile(mats, (d, 1, 1))
        prods = self.batch_product(left, right)
        mult = self.batch_coords(prods).reshape(d, d, d)
        recon = self.batch_matrices(mult.reshape(d * d, d))
        if not np.array_equal(recon, prods):
            raise NotInSubspace("the product leaves the subspace")
        kind = "S" if self.s_linear else "k"
        labels = [f"w{i}" for i in range(d)]
        return StructureAlgebra(f, mult, self.coords(self.unit), labels, name=f"W_{kind}^{self.level}")


def circ_dot(space: WSpace, phi, psi) -> np.ndarray:
    """``(id (x) mu^(x)n)(id (x) chi_n)(phi (x) id)psi``; plain composition at level 0."""
    f = space.field
    phi, psi = f.array(phi), f.array(psi)
    if phi.shape != space.shape or psi.shape != space.shape:
        raise LevelMismatch(f"{space!r} needs {space.shape} matrices, got {phi.shape} and {psi.shape}")
    if space.level == 0:
        return f.matmul(phi, psi)
    return space.batch_product(phi[None], psi[None])[0]


def product_by_chi(space: WSpace, phi, psi) -> np.ndarray:
    """The same product assembled literally from ``chi_n`` and ``mu^(x)n``."""
    f = space.field
    H = space.module.hopf
    n = space.level
    if n == 0:
        return f.matmul(f.array(phi), f.array(psi))
    mu_n = H.alg.mult_matrix
    for _ in range(n - 1):
        mu_n = f.kron(mu_n, H.alg.mult_matrix)
    chi = chi_matrix(H.dim, n, f)
    P = f.kron(f.eye(space.module.dim), f.matmul(mu_n, chi))
    return f.matmul(P, f.matmul(f.kron(f.array(phi), f.eye(space.hn)), f.array(psi)))


def b_coboundary(M: HopfModule, level: int, i: int, phi) -> np.ndarray:
    """The coface ``b^i`` from level ``level`` to ``level + 1``."""
    f = M.field
    H = M.hopf
    phi = f.array(phi)
    im, ih = f.eye(M.dim), f.eye(H.dim)
    eta, mu, sigma, dm = H.unit_col, H.alg.mult_matrix, H.antipode, M.coaction
    if level == 0 and i == 0:
        return f.matmul(f.kron(im, mu), f.matmul(f.kron(dm, ih), f.matmul(f.kron(phi, sigma), dm)))
    if level == 0 and i == 1:
        return f.matmul(f.kron(im, eta), phi)
    if level == 1 and i == 0:
        flip = flip_matrix(H.dim, f)
        return f.matmul(
            f.kron(im, mu, ih),
            f.matmul(f.kron(dm, flip), f.matmul(f.kron(phi, sigma), dm)),
        )
    if level == 1 and i == 1:
        return f.matmul(f.kron(im, H.comult), phi)
    if level == 1 and i == 2:
        return f.matmul(f.kron(im, ih, eta), phi)
    raise BadIndex(f"no coface b^{i} at level {level}")


COFACES = ((0, 0), (0, 1), (1, 0), (1, 1), (1, 2))


# -- the restricted diagram --------------------------------------------------


class RestrictedDiagram(PreCosimplicialGroup):
    """Units of ``W_S^0 -> W_S^1 -> W_S^2`` under the composition-type product."""

    def __init__(self, M: HopfModule):
        self.module = M
        self.field = M.field
        self.spaces = tuple(WSpace(M, n) for n in range(3))
        self.full1 = WSpace(M, 1, s_linear=False)

    @cached_property
    def b_matrices(self) -> dict[tuple[int, int], np.ndarray]:
        """Each ``b^i`` as a matrix between coordinate spaces."""
        f = self.field
        out = {}
        for level, i in COFACES:
            src, dst = self.spaces[level], self.spaces[level + 1]
            cols = [dst.coords(b_coboundary(self.module, level, i, src.matrix(row))) for row in f.eye(src.dim)]
            out[(level, i)] = np.stack(cols, axis=1) if cols else f.zeros((dst.dim, 0))
        return out

    @cached_property
    def omegas(self) -> tuple[OmegaResult, ...]:
        return tuple(_omega(self.module, n, self) for n in range(3))

    def b(self, level: int, i: int) -> np.ndarray:
        try:
            return self.b_matrices[(level, i)]
        except KeyError:
            raise BadIndex(f"no coface b^{i} at level {level}") from None

    # -- pre-cosimplicial group interface ------------------------------

    def unit(self, level: int) -> np.ndarray:
        W = self.spaces[level]
        return W.coords(W.unit)

    def mul(self, level: int, A, B) -> np.ndarray:
        return self.spaces[level].algebra.batch_mul(np.asarray(A), np.asarray(B))

    def coface(self, level: int, i: int, rows) -> np.ndarray:
        return self.field.reduce(np.asarray(rows) @ self.b(level, i).T)

    def units0(self):
        return self._units0

    @cached_property
    def _units0(self):
        W = self.spaces[0]
        p = self.field.p
        total = p**W.dim
        require_budget(total, "enumeration of End_S(M)")
        pts = points_in_range(_coordinate_space(W.dim), p, 0, total)
        keep, inverses = [], []
        for row in pts:
            try:
                inv = matrix_inverse(W.matrix(row), self.field)
            except Singular:
                continue
            keep.append(row)
            inverses.append(W.coords(inv))
        width = W.dim
        if not keep:
            return np.zeros((0, width), dtype=np.int64), np.zeros((0, width), dtype=np.int64)
        return np.array(keep, dtype=np.int64), np.array(inverses, dtype=np.int64)

    @cached_property
    def normalized_slice(self) -> AffineSubspace:
        """``{Phi | (id (x) eps) Phi = id}`` in W_S^1 coordinates; every cocycle lies here."""
        f = self.field
        M = self.module
        W0, W1 = self.spaces[0], self.spaces[1]
        counit = f.kron(f.eye(M.dim), M.hopf.counit)
        cols = [W0.coords(f.matmul(counit, W1.matrix(row))) for row in f.eye(W1.dim)]
        mat = np.stack(cols, axis=1) if cols else f.zeros((W0.dim, 0))
        return affine_preimage(mat, W0.coords(f.eye(M.dim)), f)

    def candidate_space(self, normalized: bool = True) -> AffineSubspace:
        return self.normalized_slice if normalized else _coordinate_space(self.spaces[1].dim)

    def candidate_blocks(self, normalized: bool = True) -> list:
        space = self.candidate_space(normalized)
        total = self.field.p**space.dim
        require_budget(total, "restricted cocycle search")
        return [(space, lo, hi) for lo, hi in block_ranges(total)]

    def candidate_rows(self, block) -> np.ndarray:
        space, lo, hi = block
        return points_in_range(space, self.field.p, lo, hi)

    @cached_property
    def _relation_data(self):
        csr = _kernels.csr_from_dense
        return csr(self.b(1, 2)), csr(self.b(1, 0)), csr(self.b(1, 1)), self.spaces[2].algebra.triples

    def cocycle_mask(self, X) -> np.ndarray:
        left, right, rhs, triples = self._relation_data
        return _kernels.relation_mask(np.asarray(X, dtype=np.int64), left, right, rhs, triples, self.field.p)

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

    def inverses1(self, rows) -> tuple[np.ndarray, np.ndarray]:
        """Two-sided inverses of level-1 elements, solved over all k-linear maps.

        Returns ``(mask, inverses)`` with inverses in W_S^1 coordinates; the
        mask is false where no inverse exists or where it fails to be S-linear.
        """
        W, K = self.spaces[1], self.full1
        rows = np.asarray(rows, dtype=np.int64)
        if rows.shape[0] == 0:
            return np.zeros(0, dtype=bool), np.zeros((0, W.dim), dtype=np.int64)
        flat = self.field.reduce(rows @ W.basis)
        ok, inv = K.algebra.batch_inverse(flat)
        mats = inv.reshape((-1,) + W.shape)
        linear = np.array([W.contains(m) for m in mats])
        return ok & linear, W.batch_coords(mats)

    def inverse1(self, row) -> np.ndarray | None:
        ok, inv = self.inverses1(np.asarray(row)[None, :])
        return inv[0] if ok[0] else None

    def invertible1(self, rows) -> np.ndarray:
        return self.inverses1(rows)[0]


def _coordinate_space(dim: int) -> AffineSubspace:
    return AffineSubspace(np.zeros(dim, dtype=np.int64), np.eye(dim, dtype=np.int64))


def build_restricted(M: HopfModule) -> RestrictedDiagram:
    return RestrictedDiagram(M)


def check_restricted_diagram(D: RestrictedDiagram) -> AxiomReport:
    """Cosimplicial identities on coordinate matrices, closure, associativity."""
    f = D.field
    report = AxiomReport(f"restricted diagram of {D.module.name}")
    b = D.b
    report.record("b1 b0 = b0 b0", np.array_equal(f.matmul(b(1, 1), b(0, 0)), f.matmul(b(1, 0), b(0, 0))))
    report.record("b2 b0 = b0 b1", np.array_equal(f.matmul(b(1, 2), b(0, 0)), f.matmul(b(1, 0), b(0, 1))))
    report.record("b2 b1 = b1 b1", np.array_equal(f.matmul(b(1, 2), b(0, 1)), f.matmul(b(1, 1), b(0, 1))))
    for n, W in enumerate(D.spaces):
        sub = check_algebra_axioms(W.algebra)
        report.record(f"level {n} associative", sub.ok, sub.failures or None)
    return report


# -- cocycle conditions ------------------------------------------------------


def cocycle_conditions(D: RestrictedDiagram, Phi: np.ndarray) -> AxiomReport:
    """The three defining conditions of a restricted 1-cocycle, on a raw map."""
    M = D.module
    f = D.field
    H = M.hopf
    W1, W2 = D.spaces[1], D.spaces[2]
    report = AxiomReport("restricted 1-cocycle")
    report.record("S-linear", W1.contains(Phi))
    counit = f.matmul(f.kron(f.eye(M.dim), H.counit), Phi)
    report.record("counit normalised", np.array_equal(counit, f.eye(M.dim)))
    lhs = W2.product(b_coboundary(M, 1, 2, Phi), b_coboundary(M, 1, 0, Phi))
    report.record("cocycle relation", np.array_equal(lhs, b_coboundary(M, 1, 1, Phi)))
    return report


def inverse_by_formula(M: HopfModule, Phi) -> np.ndarray:
    """``Delta_M o. ((id (x) sigma) o (Phi o. Delta_M))`` computed in Hom_k."""
    f = M.field
    K = WSpace(M, 1, s_linear=False)
    inner = K.product(f.array(Phi), M.coaction)
    twisted = f.matmul(f.kron(f.eye(M.dim), M.hopf.antipode), inner)
    return K.product(M.coaction, twisted)


# -- restricted H0, Z1, H1 ---------------------------------------------------


@dataclass
class RestrictedCocycles:
    diagram: RestrictedDiagram
    rows: np.ndarray
    inverses: np.ndarray
    conditions: AxiomReport

    def __len__(self):
        return self.rows.shape[0]

    def matrices(self) -> list[np.ndarray]:
        W = self.diagram.spaces[1]
        return [W.matrix(r) for r in self.rows]


def restricted_z1(M: HopfModule, diagram: RestrictedDiagram | None = None) -> RestrictedCocycles:
    """All S-linear invertible cocycles, with every defining condition re-checked."""
    D = diagram or RestrictedDiagram(M)
    W1 = D.spaces[1]
    rows = D.z1_elements()
    conditions = AxiomReport("restricted cocycles")
    inverses = []
    for row in rows:
        Phi = W1.matrix(row)
        sub = cocycle_conditions(D, Phi)
        inv = D.inverse1(row)
        sub.record("S-linear inverse", inv is not None)
        if inv is not None:
            inverses.append(inv)
            sub.record("inverse formula", np.array_equal(W1.matrix(inv), inverse_by_formula(M, Phi)))
        conditions.extend(sub, f"{key(row)}: ")
    inv_rows = np.array(inverses, dtype=np.int64).reshape(-1, W1.dim)
    return RestrictedCocycles(D, rows, inv_rows, conditions)


def restricted_h0(M: HopfModule, diagram: RestrictedDiagram | None = None) -> np.ndarray:
    """Coordinates (in End_S(M)) of the automorphisms equalised by ``b^0, b^1``."""
    D = diagram or RestrictedDiagram(M)
    return D.h0_elements()


def restricted_h1(M: HopfModule, diagram: RestrictedDiagram | None = None) -> CohomologyResult:
    D = diagram or RestrictedDiagram(M)
    return D.cohomology()


def restricted_action(D: RestrictedDiagram, Phi_row, f_row) -> np.ndarray:
    """``Phi <- f = b^1(f^-1) o. Phi o. b^0(f)`` on coordinates."""
    W0 = D.spaces[0]
    inv = W0.coords(matrix_inverse(W0.matrix(f_row), D.field))
    left = D.coface(0, 1, np.asarray(inv)[None])
    mid = D.mul(1, left, np.asarray(Phi_row)[None])
    return D.mul(1, mid, D.coface(0, 0, np.asarray(f_row)[None]))[0]


# -- omega and Condition (F_n) ----------------------------------------------


@dataclass
class OmegaResult:
    level: int
    matrix: np.ndarray
    # End_S(M) (x) H^n coordinates -> W_S^n coordinates
    bijective: bool
    morphism: bool
    witness: object = None

    @property
    def condition(self) -> bool:
        return self.bijective and self.morphism


def end_algebra(M: HopfModule) -> StructureAlgebra:
    """End_S(M) in the coordinates of W_S^0."""
    A = WSpace(M, 0).algebra
    return StructureAlgebra(A.field, A.mult, A.unit, [f"f{i}" for i in range(A.dim)], name=f"End({M.name})")


def omega(M: HopfModule, n: int, diagram: RestrictedDiagram | None = None) -> OmegaResult:
    """``f (x) h -> (m -> f(m) (x) h)`` with its isomorphism verdict."""
    if diagram is not None and n < 3:
        return diagram.omegas[n]
    return _omega(M, n, None)


def _omega(M: HopfModule, n: int, D: RestrictedDiagram | None) -> OmegaResult:
    f = M.field
    W0 = D.spaces[0] if D else WSpace(M, 0)
    Wn = D.spaces[n] if D and n < 3 else WSpace(M, n)
    hn = Wn.hn
    cols = []
    for a in range(W0.dim):
        fa = W0.matrix(f.eye(W0.dim)[a])
        for x in range(hn):
            cols.append(Wn.coords(f.kron(fa, f.eye(hn)[:, x : x + 1])))
    mat = np.stack(cols, axis=1) if cols else f.zeros((Wn.dim, 0))
    bijective = mat.shape[0] == mat.shape[1] and matrix_rank(mat, f) == mat.shape[0]
    src = tensor_algebra(end_algebra(M), Wn.power) if n else end_algebra(M)
    morphism, witness = linear_map_is_algebra_morphism(mat, src, Wn.algebra)
    return OmegaResult(n, mat, bijective, morphism, witness)


def condition_f(M: HopfModule, n: int) -> bool:
    return omega(M, n).condition


def end_comodule_structure(M: HopfModule, diagram: RestrictedDiagram | None = None) -> ComoduleAlgebra:
    """End_S(M) coacted on through ``omega_1^-1 o b^0``."""
    D = diagram or RestrictedDiagram(M)
    f = D.field
    omegas = [omega(M, n, D) for n in range(3)]
    failed = [w.level for w in omegas if not w.condition]
    if failed:
        raise ConditionFFailed(f"omega is not an algebra isomorphism at levels {failed}")
    coaction = f.matmul(matrix_inverse(omegas[1].matrix, f), D.b(0, 0))
    return ComoduleAlgebra(M.hopf, end_algebra(M), coaction, name=f"({M.hopf.name}, End({M.name}))")


# -- comparison with the general theory --------------------------------------


@dataclass
class RestrictedComparison:
    module: HopfModule
    end_comodule: ComoduleAlgebra
    general: CohomologyResult
    restricted: CohomologyResult
    checks: AxiomReport
    pairing: list[tuple[int, int]] = field(default_factory=list)
    # (general class, restricted class)

    @property
    def ok(self) -> bool:
        return self.checks.ok

    def to_dict(self) -> dict:
        return {
            "module": self.module.name,
            "h0": [list(key(r)) for r in self.restricted.h0],
            "z1": len(self.restricted.z1),
            "h1_general": [list(o.representative) for o in self.general.orbits],
            "h1_restricted": [list(o.representative) for o in self.restricted.orbits],
            "pairing": [list(p) for p in self.pairing],
            "checks": self.checks.to_dict(),
        }


def compare_restricted(M: HopfModule) -> RestrictedComparison:
    """Degree-0 and degree-1 comparison between ``End_S(M)`` coefficients and ``M``."""
    D = RestrictedDiagram(M)
    f = D.field
    checks = AxiomReport(f"restricted vs general for {M.name}")
    checks.extend(check_restricted_diagram(D), "restricted diagram: ")
    omegas = [omega(M, n, D) for n in range(3)]
    checks.record("omega_0 is the identity", np.array_equal(omegas[0].matrix, f.eye(D.spaces[0].dim)))
    for w in omegas:
        checks.record(f"condition F_{w.level}", w.condition, w.witness)
    E = end_comodule_structure(M, D)
    checks.extend(check_comodule_algebra(E), "End comodule: ")
    G = AlgebraDiagram(E)
    for level, i in COFACES:
        lhs = f.matmul(omegas[level + 1].matrix, G.d(level, i))
        rhs = f.matmul(D.b(level, i), omegas[level].matrix)
        checks.record(f"omega d^{i} = b^{i} omega at level {level + 1}", np.array_equal(lhs, rhs))

    general = G.cohomology()
    z1 = restricted_z1(M, D)
    checks.extend(z1.conditions)
    restricted = D.cohomology(z1.rows)

    checks.record("H0 equal", _row_set(general.h0) == _row_set(restricted.h0))
    pushed = f.reduce(general.z1 @ omegas[1].matrix.T) if general.z1.size else general.z1
    checks.record("omega_1 maps Z1 onto Z1", _row_set(pushed) == _row_set(restricted.z1))

    pairing = []
    whole = True
    for gi, orb in enumerate(general.orbits):
        images = f.reduce(np.array(orb.members, dtype=np.int64) @ omegas[1].matrix.T)
        classes = {restricted.class_of(r) for r in images}
        whole = whole and len(classes) == 1
        pairing.append((gi, min(classes)))
    checks.record("orbits map into single classes", whole)
    targets = [r for _, r in pairing]
    checks.record("classes paired bijectively", sorted(targets) == list(range(len(restricted.orbits))))
    checks.record("distinguished classes match", bool(pairing) and pairing[0] == (0, 0))
    return RestrictedComparison(M, E, general, restricted, checks, pairing)


def _row_set(rows: np.ndarray) -> set[tuple[int, ...]]:
    return {key(r) for r in lex_sort(np.asarray(rows))}
