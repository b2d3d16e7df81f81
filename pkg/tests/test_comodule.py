import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vec
from hopfcoh.algebra import Element, points_in_range
from hopfcoh.cohomology import AlgebraDiagram, cocycle_action
from hopfcoh.comodule import (
    ComoduleAlgebra,
    HopfModule,
    build_conjugation_comodule,
    check_all,
    check_comodule_algebra,
    check_hopf_module,
    hopf_module_isomorphism_check,
    hopf_module_morphism_check,
    over_trivial_hopf,
    regular_module,
    self_comodule,
    trivial_coefficients,
)
from hopfcoh.exactmath import DimensionMismatch
from hopfcoh.groups import symmetric
from hopfcoh.torsor import deform_coaction
from hopfcoh.worked_examples import dual_number_cocycles


def act(E, X, x):
    return cocycle_action(E, Element(E.level1, X), Element(E.alg, x)).coords


def test_builders_pass(F3, H4, E2, kZ2, k_over_kZ2, kZ2_self):
    S3 = symmetric(3)
    conj = build_conjugation_comodule(S3, [0, S3.index("(12)")], F3)
    for E in (E2, trivial_coefficients(H4), self_comodule(H4), k_over_kZ2, kZ2_self,
              over_trivial_hopf(E2.alg), conj):
        report = check_all(E)
        assert report.ok, report.failures


def test_dual_number_coaction_columns(E2):
    # 1 -> 1(x)1 and h -> 1(x)h + h(x)g
    assert np.nonzero(E2.coaction[:, 0])[0].tolist() == [0]
    assert np.nonzero(E2.coaction[:, 1])[0].tolist() == [2, 5]


def test_corrupted_coaction_fails_counit(E2):
    bad = E2.coaction.copy()
    bad[:, 1] = 0
    bad[0 * 4 + 2, 1] = 1  # h -> 1(x)h only
    report = check_comodule_algebra(ComoduleAlgebra(E2.hopf, E2.alg, bad, name="bad"))
    assert report.failed("counit")
    assert not report.ok


def test_wrong_module_shape_rejected(E2):
    with pytest.raises(DimensionMismatch):
        HopfModule(E2, E2.alg.right_basis, np.zeros((3, 2), dtype=np.int64))


def test_regular_module_passes(E2):
    assert check_hopf_module(regular_module(E2)).ok


def test_y0_deformation_passes(F3, E2):
    _, Y = dual_number_cocycles(F3)
    assert deform_coaction(E2, Y[0]).is_hopf_module


def test_non_cocycle_fails_coassociativity(E2):
    # unit of E2(x)H4 in the normalised slice that is not a cocycle
    D = AlgebraDiagram(E2)
    space = D.candidate_space(True)
    rows = points_in_range(space, 3, 0, 3 ** space.dim)
    units = rows[D.invertible1(rows)]
    bad = units[~D.cocycle_mask(units)][0]
    deformed = deform_coaction(E2, bad)
    assert not deformed.is_hopf_module
    assert deformed.report.failed("coassociativity")


def test_tau_between_cohomologous_cocycles(F3, E2):
    # X' = X <- x is carried to X by left multiplication with x
    X, _ = dual_number_cocycles(F3)
    x = vec((0, 1), (1, 2), n=2)
    X_moved = act(E2, X[0], x)
    M = deform_coaction(E2, X_moved).module
    N = deform_coaction(E2, X[0]).module
    tau = E2.alg.left_matrix(x)
    assert hopf_module_morphism_check(tau, M, N)
    assert hopf_module_isomorphism_check(tau, M, N)


def test_zero_map_is_morphism_not_isomorphism(E2):
    M = regular_module(E2)
    zero = np.zeros((2, 2), dtype=np.int64)
    assert hopf_module_morphism_check(zero, M, M)
    assert not hopf_module_isomorphism_check(zero, M, M)


def test_morphism_shape_mismatch(E2):
    M = regular_module(E2)
    with pytest.raises(DimensionMismatch):
        hopf_module_morphism_check(np.zeros((3, 2), dtype=np.int64), M, M)


units_e2 = st.tuples(st.integers(1, 2), st.integers(0, 2)).map(lambda t: vec((0, t[0]), (1, t[1]), n=2))


@given(units_e2, units_e2, st.integers(0, 2))
def test_morphisms_compose(F3, E2, x, y, u):
    X = dual_number_cocycles(F3)[0][u]
    Xx = act(E2, X, x)
    Xxy = act(E2, Xx, y)
    P, N, M = (deform_coaction(E2, c).module for c in (X, Xx, Xxy))
    f, g = E2.alg.left_matrix(x), E2.alg.left_matrix(y)
    assert hopf_module_morphism_check(g, M, N)
    assert hopf_module_morphism_check(f, N, P)
    assert hopf_module_morphism_check(f @ g % 3, M, P)
