"""Hopf torsors: deformed coactions, classification, products, group torsors.

A torsor is an (H, E)-Hopf module ``T`` (a right E-module) with an element
``u`` for which ``x -> u.x`` is bijective and ``Delta_T(u)`` is again such an
element of ``T (x) H``.  Classes of torsors correspond to classes of
1-cocycles; everything here is checked by exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .algebra import (
    AffineSubspace,
    AxiomReport,
    Element,
    all_points,
    points_in_range,
    unit_group,
)
from .cohomology import AlgebraDiagram, NotCommutative, commutative_h1_group, is_cocycle
from .comodule import ComoduleAlgebra, HopfModule, check_hopf_module, hopf_module_morphism_check
from .config import require_budget
from .exactmath import Field, kernel_basis, matrix_inverse, project_to_quotient, quotient_coords
from .groupcoh import UnitCoder, action_from_coaction, function_group
from .precosimplicial import CohomologyResult, key
from .restricted import RestrictedDiagram, WSpace, compare_restricted


class NotInTBullet(ValueError):
    pass


# -- deformed coactions ------------------------------------------------------


@dataclass
class DeformedComodule:
    base: ComoduleAlgebra
    cocycle: np.ndarray
    module: HopfModule
    report: AxiomReport

    @property
    def coaction(self) -> np.ndarray:
        return self.module.coaction

    @property
    def is_hopf_module(self) -> bool:
        return self.report.ok


def deform_coaction(E: ComoduleAlgebra, X) -> DeformedComodule:
    """E with the coaction ``x -> X Delta_E(x)``; raises NotInvertible unless X is a unit."""
    f = E.field
    X = X.coords if isinstance(X, Element) else f.array(X)
    E.level1.inverse(X)
    coaction = f.matmul(E.level1.left_matrix(X), E.coaction)
    module = HopfModule(E, E.alg.right_basis, coaction, E.alg.labels, name=f"{E.alg.name}^X")
    return DeformedComodule(E, X, module, check_hopf_module(module))


# -- units of a module -------------------------------------------------------


def theta(T: HopfModule, u) -> np.ndarray:
    """Matrix of ``x -> u.x`` from E to T."""
    u = T.field.array(u)
    return np.stack([T.field.matmul(a, u) for a in T.action], axis=1)


def _tensor_actions(T: HopfModule) -> np.ndarray:
    f = T.field
    n = T.comod.alg.dim * T.hopf.dim
    return np.stack([T.tensor_act(row) for row in f.eye(n)])


def _bijective_mask(mats: np.ndarray, p: int) -> np.ndarray:
    if mats.shape[0] == 0 or mats.shape[1] != mats.shape[2]:
        return np.zeros(mats.shape[0], dtype=bool)
    return _kernels.batch_solve(mats, np.zeros(mats.shape[1], dtype=np.int64), p)[0]


@dataclass
class TorsorRecord:
    module: HopfModule
    units: np.ndarray
    # T^x, lexicographic coordinate rows
    bullet: np.ndarray
    checks: AxiomReport

    @property
    def is_torsor(self) -> bool:
        return self.bullet.shape[0] > 0


def bullet_mask(T: HopfModule, rows: np.ndarray) -> np.ndarray:
    """Rows ``u`` with ``Delta_T(u)`` bijective on ``E (x) H``."""
    p = T.field.p
    rows = np.asarray(rows, dtype=np.int64)
    images = rows @ T.coaction.T % p
    mats = np.einsum("tab,nb->nat", _tensor_actions(T), images) % p
    return _bijective_mask(mats, p)


def module_units(T: HopfModule, budget: int | None = None) -> TorsorRecord:
    """``T^x`` and ``T-bullet`` by exhaustive search, with their structural checks."""
    E = T.comod
    p = T.field.p
    pts = _all_vectors(T.dim, T.field, budget)
    thetas = np.einsum("jab,nb->naj", T.action, pts) % p
    units = pts[_bijective_mask(thetas, p)]
    bullet = units[bullet_mask(T, units)] if units.shape[0] else units
    checks = AxiomReport(f"units of {T.name}")
    e_units = unit_group(E.alg)[0]
    unit_set = {key(r) for r in units}
    onto = True
    for u in units:
        images = {key(r) for r in e_units @ theta(T, u).T % p}
        onto = onto and images == unit_set
    checks.record("theta_u maps E^x onto T^x", onto)
    if bullet.shape[0]:
        checks.record("T-bullet equals T^x", bullet.shape[0] == units.shape[0])
        checks.record("|T^x| = |E^x|", units.shape[0] == e_units.shape[0], (units.shape[0], e_units.shape[0]))
    return TorsorRecord(T, units, bullet, checks)


def _all_vectors(dim: int, field: Field, budget: int | None = None) -> np.ndarray:
    """Every vector of ``F_p^dim``, lexicographic."""
    require_budget(field.p**dim, "module enumeration", budget)
    full = AffineSubspace(np.zeros(dim, dtype=np.int64), np.eye(dim, dtype=np.int64))
    return points_in_range(full, field.p, 0, field.p**dim)


def extract_cocycle(T: HopfModule, u, check: bool = True) -> np.ndarray:
    """``(theta_u^-1 (x) id)(Delta_T(u))`` in E (x) H coordinates."""
    E = T.comod
    f = T.field
    u = f.array(u)
    th = theta(T, u)
    if not _bijective_mask(th[None], f.p)[0] or not bullet_mask(T, u[None])[0]:
        raise NotInTBullet(f"{key(u)} is not in T-bullet of {T.name}")
    inv = matrix_inverse(th, f)
    X = f.matmul(f.kron(inv, f.eye(T.hopf.dim)), f.matmul(T.coaction, u))
    if check:
        if not is_cocycle(AlgebraDiagram(E), Element(E.level1, X)):
            raise ArithmeticError("extracted element is not a cocycle")
        if not hopf_module_morphism_check(th, deform_coaction(E, X).module, T):
            raise ArithmeticError("theta_u is not a Hopf-module map")
    return X


# -- isomorphisms of Hopf modules --------------------------------------------


def hopf_module_homs(M: HopfModule, N: HopfModule) -> np.ndarray:
    """Basis (rows, row-major ``dim N x dim M`` matrices) of all Hopf-module maps M -> N."""
    f = M.field
    dm, dn, dh = M.dim, N.dim, M.hopf.dim
    blocks = []
    for am, an in zip(M.action, N.action):
        blocks.append(f.reduce(f.kron(f.eye(dn), am.T) - f.kron(an, f.eye(dm))))
    # (F (x) id_H) Delta_M = Delta_N F, both sides linear in F
    lhs = np.zeros((dn * dh * dm, dn * dm), dtype=f.dtype)
    for r in range(dn):
        for c in range(dm):
            F = f.zeros((dn, dm))
            F[r, c] = f.one()
            lhs[:, r * dm + c] = f.reduce(f.matmul(f.kron(F, f.eye(dh)), M.coaction) - f.matmul(N.coaction, F)).reshape(-1)
    blocks.append(lhs)
    return kernel_basis(np.concatenate(blocks, axis=0), f)


def find_isomorphism(M: HopfModule, N: HopfModule, budget: int | None = None) -> np.ndarray | None:
    """Least (lexicographically in parameters) Hopf-module isomorphism M -> N, or None."""
    if M.dim != N.dim:
        return None
    f = M.field
    basis = hopf_module_homs(M, N)
    total = f.p ** basis.shape[0]
    require_budget(total, "Hopf-module isomorphism search", budget)
    space = AffineSubspace(np.zeros(M.dim * N.dim, dtype=np.int64), basis)
    for lo in range(0, total, 1 << 14):
        hi = min(total, lo + (1 << 14))
        flats = points_in_range(space, f.p, lo, hi)
        mats = flats.reshape(-1, N.dim, M.dim)
        ok = _bijective_mask(mats, f.p)
        if ok.any():
            return mats[int(np.argmax(ok))]
    return None


# -- cocycles versus deformed Hopf modules -----------------------------------


def tau_witness(E: ComoduleAlgebra, result: CohomologyResult, X, Y) -> np.ndarray | None:
    """Left multiplication ``tau_y`` carrying ``(E, Delta^X)`` to ``(E, Delta^Y)``, read off the orbits."""
    kx, ky = key(X), key(Y)
    for orb in result.orbits:
        if kx in orb.witnesses and ky in orb.witnesses:
            a = result.units[orb.witnesses[kx]]
            b = result.units[orb.witnesses[ky]]
            # Y = X <- a^-1 b, and tau_y works exactly when Y = X <- y^-1
            y = E.alg.mul(E.alg.inverse(b), a)
            return E.alg.left_matrix(y)
    return None


def deformation_check(E: ComoduleAlgebra, normalized: bool = True) -> AxiomReport:
    """Cocycle iff Hopf module, and cohomologous iff isomorphic, exhaustively."""
    D = AlgebraDiagram(E)
    report = AxiomReport(f"deformed coactions of {E.name}")
    space = D.candidate_space(normalized)
    pts = all_points(E.level1, space)
    ok, _ = E.level1.batch_inverse(pts)
    candidates = pts[ok]
    cocycles = D.cocycle_mask(candidates)
    agree = True
    witness = None
    for X, is_z in zip(candidates, cocycles):
        hopf = deform_coaction(E, X).is_hopf_module
        if hopf != bool(is_z):
            agree, witness = False, key(X)
            break
    report.record("cocycle iff Hopf module", agree, witness)

    res = D.cohomology()
    modules = {key(X): deform_coaction(E, X).module for X in res.z1}
    pairs_ok, witnessed = True, True
    bad = None
    for X in res.z1:
        for Y in res.z1:
            same = res.class_of(X) == res.class_of(Y)
            iso = find_isomorphism(modules[key(X)], modules[key(Y)]) is not None
            if same != iso:
                pairs_ok, bad = False, (key(X), key(Y))
            if same:
                tau = tau_witness(E, res, X, Y)
                if tau is None or not hopf_module_morphism_check(tau, modules[key(X)], modules[key(Y)]):
                    witnessed = False
    report.record("cohomologous iff isomorphic", pairs_ok, bad)
    report.record("tau witnesses verified", witnessed)
    report.data = {
        "candidates": int(candidates.shape[0]),
        "cocycles": int(cocycles.sum()),
        "pairs": int(res.z1.shape[0]) ** 2,
    }
    return report


# -- classification ----------------------------------------------------------


@dataclass
class TorsorClassification:
    comod: ComoduleAlgebra
    result: CohomologyResult
    classes: list[DeformedComodule]
    checks: AxiomReport

    def __len__(self):
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            "comodule": self.comod.name,
            "classes": [
                {"cocycle": [int(v) for v in c.cocycle], "coaction": c.coaction.tolist()} for c in self.classes
            ],
            "checks": self.checks.to_dict(),
        }


def classify_torsors(E: ComoduleAlgebra) -> TorsorClassification:
    """One torsor per cohomology class; the first is ``(E, Delta_E)`` itself."""
    D = AlgebraDiagram(E)
    res = D.cohomology()
    checks = AxiomReport(f"torsors of {E.name}")
    classes = []
    unit1 = E.level1.unit
    for i, orb in enumerate(res.orbits):
        X = unit1 if i == 0 else np.array(orb.representative, dtype=np.int64)
        classes.append(deform_coaction(E, X))
    if classes:
        checks.record("distinguished class is E", np.array_equal(classes[0].coaction, E.coaction))
    for i, c in enumerate(classes):
        checks.record(f"class {i} is a Hopf module", c.is_hopf_module, c.report.failures or None)
        rec = module_units(c.module)
        checks.record(f"class {i} is a torsor", rec.is_torsor)
        checks.extend(rec.checks, f"class {i}: ")
        back = {res.class_of(extract_cocycle(c.module, u)) for u in rec.bullet}
        checks.record(f"class {i} round trip", back == {i}, sorted(back))
        within = all(
            (tau := tau_witness(E, res, c.cocycle, Y)) is not None
            and hopf_module_morphism_check(tau, c.module, deform_coaction(E, Y).module)
            for Y in map(np.array, orb_members(res, i))
        )
        checks.record(f"class {i} members isomorphic", within)
    distinct = True
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if find_isomorphism(classes[i].module, classes[j].module) is not None:
                distinct = False
    checks.record("classes pairwise non-isomorphic", distinct)
    return TorsorClassification(E, res, classes, checks)


def orb_members(res: CohomologyResult, i: int) -> list[tuple[int, ...]]:
    return res.orbits[i].members


# -- products in the commutative case ----------------------------------------


@dataclass
class TensorProduct:
    module: HopfModule
    projection: np.ndarray
    # T (x) T' -> T (x)_E T'
    checks: AxiomReport


def torsor_tensor(T: HopfModule, T2: HopfModule) -> TensorProduct:
    """``T (x)_E T'`` as the cokernel of the balancing map, with the diagonal coaction."""
    E = T.comod
    if not E.is_commutative():
        raise NotCommutative(f"{E.name} is not commutative")
    f = T.field
    d1, d2, dh = T.dim, T2.dim, T.hopf.dim
    n = d1 * d2
    balance = [f.reduce(f.kron(a, f.eye(d2)) - f.kron(f.eye(d1), b)) for a, b in zip(T.action, T2.action)]
    relations = np.concatenate([m.T for m in balance], axis=0)
    R, pivots, free = project_to_quotient(relations, f)
    proj = np.stack([quotient_coords(v, R, pivots, free, f) for v in f.eye(n)], axis=1)
    section = f.eye(n)[:, free]
    checks = AxiomReport(f"{T.name} (x)_E {T2.name}")

    action = []
    stable = True
    for a in T.action:
        big = f.kron(a, f.eye(d2))
        small = f.matmul(proj, f.matmul(big, section))
        stable = stable and np.array_equal(f.matmul(proj, big), f.matmul(small, proj))
        action.append(small)
    checks.record("action descends", stable)

    swap = np.zeros((n * dh * dh, n * dh * dh), dtype=np.int64)
    for t in range(d1):
        for h in range(dh):
            for s in range(d2):
                for k in range(dh):
                    swap[((t * d2 + s) * dh + h) * dh + k, ((t * dh + h) * d2 + s) * dh + k] = 1
    diag = f.matmul(f.kron(f.eye(n), T.hopf.alg.mult_matrix), f.matmul(f.array(swap), f.kron(T.coaction, T2.coaction)))
    lifted = f.kron(proj, f.eye(dh))
    coaction = f.matmul(lifted, f.matmul(diag, section))
    checks.record("coaction descends", np.array_equal(f.matmul(lifted, diag), f.matmul(coaction, proj)))
    module = HopfModule(E, np.stack(action) if action else f.zeros((0, len(free), len(free))), coaction,
                        name=f"{T.name}(x){T2.name}")
    checks.extend(check_hopf_module(module), "product: ")
    return TensorProduct(module, proj, checks)


def tensor_product_check(E: ComoduleAlgebra) -> AxiomReport:
    """Products of torsor classes against the group law on cohomology classes."""
    group = commutative_h1_group(E)
    cls = classify_torsors(E)
    report = AxiomReport(f"torsor products over {E.name}")
    p = E.field.p
    for i, ci in enumerate(cls.classes):
        rec_i = module_units(ci.module)
        for j, cj in enumerate(cls.classes):
            rec_j = module_units(cj.module)
            prod = torsor_tensor(ci.module, cj.module)
            report.extend(prod.checks, f"{i}*{j}: ")
            u = rec_i.bullet[0]
            v = rec_j.bullet[0]
            w = prod.projection @ np.kron(u, v) % p
            report.record(f"{i}*{j}: u (x) u' in bullet", bool(bullet_mask(prod.module, w[None])[0]))
            target = cls.classes[int(group.table[i, j])].module
            report.record(f"{i}*{j}: class matches group law", find_isomorphism(prod.module, target) is not None)
    # the class map is multiplicative on cocycles, not only on classes
    res = cls.result
    mult_ok = True
    for X in res.z1:
        for Y in res.z1:
            XY = E.level1.mul(X, Y)
            prod = torsor_tensor(deform_coaction(E, X).module, deform_coaction(E, Y).module)
            mult_ok = mult_ok and find_isomorphism(prod.module, deform_coaction(E, XY).module) is not None
    report.record("cocycle products map to torsor products", mult_ok)
    return report


# -- classical group torsors -------------------------------------------------


@dataclass
class GroupTorsorBridge:
    hopf_classes: int
    group_classes: int
    images: list[int]
    # Hopf class -> classical class
    checks: AxiomReport

    @property
    def ok(self) -> bool:
        return self.checks.ok


def _is_torsor_action(A, c: np.ndarray) -> bool:
    """Whether ``g -> (a -> c_g ^g a)`` is a left G-action compatible with right translation."""
    G = A.G
    acted = A.table[c[:, None], A.act]  # acted[g, a] = c_g * ^g a
    if not np.array_equal(acted[G.identity], np.arange(A.order)):
        return False
    for g in range(G.order):
        for h in range(G.order):
            if not np.array_equal(acted[G.mul(g, h)], acted[g][acted[h]]):
                return False
        # g(a b) = (g a) ^g b
        if not np.array_equal(acted[g][A.table], A.table[acted[g][:, None], A.act[g][None, :]]):
            return False
    return True


def _isomorphic_torsors(A, c: np.ndarray, d: np.ndarray) -> bool:
    """An A-equivariant bijection ``a -> b a`` that is also G-equivariant, by brute force."""
    src = A.table[c[:, None], A.act]
    dst = A.table[d[:, None], A.act]
    for b in range(A.order):
        shift = A.table[b]  # a -> b a
        if np.array_equal(shift[src], dst[:, shift]):
            return True
    return False


def classical_torsors(A, budget: int | None = None) -> list[np.ndarray]:
    """Representatives ``c`` of (G, A)-torsors on the set A, one per isomorphism class."""
    m = A.G.order
    require_budget(A.order**m, "classical torsor enumeration", budget)
    reps: list[np.ndarray] = []
    trivial = np.full(m, A.identity, dtype=np.int64)
    candidates = [trivial] + [np.array(t, dtype=np.int64) for t in np.ndindex(*(A.order,) * m)]
    for c in candidates:
        if not _is_torsor_action(A, c):
            continue
        if not any(_isomorphic_torsors(A, c, r) for r in reps):
            reps.append(c)
    return reps


def group_torsor_bridge(E: ComoduleAlgebra) -> GroupTorsorBridge:
    """Units of each Hopf torsor as a classical torsor, matched against a brute-force census."""
    G = function_group(E)
    A, units, _ = action_from_coaction(E)
    p = E.field.p
    m = G.order
    coder = UnitCoder(units, p)
    cls = classify_torsors(E)
    reps = classical_torsors(A)
    checks = AxiomReport(f"group torsors of {E.name}")
    images = []
    for i, c in enumerate(cls.classes):
        T = c.module
        rec = module_units(T)
        tw = np.stack([T.coaction[g::m, :] for g in range(m)])
        t_units = rec.units
        t_index = {key(r): n for n, r in enumerate(t_units)}
        act_T = np.array([[t_index.get(key(tw[g] @ u % p), -1) for u in t_units] for g in range(m)])
        checks.record(f"class {i}: G preserves T^x", bool((act_T >= 0).all()))
        laws = np.array_equal(act_T[G.identity], np.arange(len(t_units))) and all(
            np.array_equal(act_T[G.mul(g, h)], act_T[g][act_T[h]]) for g in range(m) for h in range(m)
        )
        checks.record(f"class {i}: G acts on T^x", laws)
        twE = np.stack([A_twist(E, g).T for g in range(m)])
        compatible = all(
            np.array_equal(tw[g] @ T.action[j] % p, T.act(twE[g][:, j]) @ tw[g] % p)
            for g in range(m) for j in range(E.alg.dim)
        )
        checks.record(f"class {i}: actions compatible", compatible)
        checks.extend(rec.checks, f"class {i}: ")

        u = t_units[0]
        th = theta(T, u)
        th_inv = matrix_inverse(th, E.field)
        cocycle = coder.index(np.stack([th_inv @ (tw[g] @ u % p) % p for g in range(m)]))
        checks.record(f"class {i}: twisted action is a torsor", _is_torsor_action(A, cocycle))
        # theta_u carries g -> (x -> c_g ^g x) to the action read from Delta_T
        moved = A.table[cocycle[:, None], A.act]
        image_of = coder.index(t_units @ th_inv.T % p)
        equivariant = all(
            np.array_equal(th @ units[moved[g, a]] % p, tw[g] @ (th @ units[a]) % p)
            for g in range(m) for a in range(A.order)
        )
        checks.record(f"class {i}: theta_u is G-equivariant", equivariant and bool((image_of >= 0).all()))
        matches = [r for r, rep in enumerate(reps) if _isomorphic_torsors(A, cocycle, rep)]
        checks.record(f"class {i}: lands in one classical class", len(matches) == 1, matches)
        images.append(matches[0] if matches else -1)
    checks.record("c is a bijection", sorted(images) == list(range(len(reps))), images)
    checks.record("distinguished to trivial", bool(images) and images[0] == 0)
    return GroupTorsorBridge(len(cls.classes), len(reps), images, checks)


def A_twist(E: ComoduleAlgebra, g: int) -> np.ndarray:
    """Transpose of the matrix of ``x -> ^g x`` on E."""
    m = E.hopf.dim
    return E.coaction[g::m, :].T


# -- restricted torsors ------------------------------------------------------


@dataclass
class ModuleTorsorReport:
    coactions: list[np.ndarray]
    checks: AxiomReport

    @property
    def ok(self) -> bool:
        return self.checks.ok


def module_torsor_check(M: HopfModule) -> ModuleTorsorReport:
    """Hopf-module structures on M induced by each torsor class over End_S(M)."""
    comp = compare_restricted(M)
    checks = AxiomReport(f"module torsors of {M.name}")
    checks.extend(comp.checks, "comparison: ")
    E = comp.end_comodule
    f = M.field
    D = RestrictedDiagram(M)
    W0 = D.spaces[0]
    full = WSpace(M, 1, s_linear=False)
    om1 = D.omegas[1].matrix
    H = M.hopf
    coactions = []
    for i, orb in enumerate(comp.general.orbits):
        X = E.level1.unit if i == 0 else np.array(orb.representative, dtype=np.int64)
        T = deform_coaction(E, X)
        # phi_0 (x) phi_1 = Delta(id_M)
        phi = f.matmul(T.coaction, E.alg.unit)
        literal = f.zeros((M.dim * H.dim, M.dim))
        for idx in np.nonzero(phi)[0]:
            a, x = divmod(int(idx), H.dim)
            fa = W0.matrix(f.eye(W0.dim)[a])
            lx = H.alg.left_matrix(f.eye(H.dim)[x])
            literal = f.reduce(literal + phi[idx] * f.matmul(f.kron(fa, lx), M.coaction))
        via_omega = full.product(D.spaces[1].matrix(f.matmul(om1, X)), M.coaction)
        checks.record(f"class {i}: two routes agree", np.array_equal(literal, via_omega))
        N = M.with_coaction(literal, name=f"{M.name}'{i}")
        checks.record(f"class {i}: Hopf module", check_hopf_module(N).ok)
        coactions.append(literal)
    if coactions:
        checks.record("distinguished gives Delta_M", np.array_equal(coactions[0], M.coaction))
    units0, _ = D.units0()
    distinct = True
    for i in range(len(coactions)):
        for j in range(i + 1, len(coactions)):
            Ni, Nj = M.with_coaction(coactions[i]), M.with_coaction(coactions[j])
            if any(hopf_module_morphism_check(W0.matrix(u), Nj, Ni) for u in units0):
                distinct = False
    checks.record("induced structures pairwise inequivalent", distinct)
    checks.record("class count", len(coactions) == len(comp.general.orbits))
    return ModuleTorsorReport(coactions, checks)


__all__ = [
    "DeformedComodule",
    "GroupTorsorBridge",
    "ModuleTorsorReport",
    "NotInTBullet",
    "TensorProduct",
    "TorsorClassification",
    "TorsorRecord",
    "bullet_mask",
    "classical_torsors",
    "classify_torsors",
    "deform_coaction",
    "deformation_check",
    "extract_cocycle",
    "find_isomorphism",
    "group_torsor_bridge",
    "hopf_module_homs",
    "module_torsor_check",
    "module_units",
    "tau_witness",
    "tensor_product_check",
    "theta",
    "torsor_tensor",
]
