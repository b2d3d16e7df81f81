import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopfcoh.algebra import (
    Element,
    NotInvertible,
    ParentMismatch,
    StructureAlgebra,
    affine_preimage,
    all_points,
    check_algebra_axioms,
    enumerate_elements,
    ground_algebra,
    linear_map_is_algebra_morphism,
    multiply,
    tensor_algebra,
    try_inverse,
    unit_group,
)
from hopfcoh.comodule import dual_numbers, group_algebra
from hopfcoh.config import EnumerationOverBudget
from hopfcoh.exactmath import Field, RationalFieldNotEnumerable, matrix_rank
from hopfcoh.groups import cyclic, symmetric
from hopfcoh.hopf import build_sweedler_h4


def el(A, *coords):
    return Element(A, np.array(coords, dtype=np.int64))


def test_dual_number_square_vanishes(F3):
    A = dual_numbers(F3)
    assert multiply(el(A, 0, 1), el(A, 0, 1)).is_zero()


def test_h4_relations(F3):
    H = build_sweedler_h4(F3).alg
    g, h, gh = el(H, 0, 1, 0, 0), el(H, 0, 0, 1, 0), el(H, 0, 0, 0, 1)
    assert (g * g) == H.one()
    assert (h * h).is_zero()
    assert (g * h + h * g).is_zero()
    assert (gh * gh).is_zero()


def test_parent_mismatch(F3):
    with pytest.raises(ParentMismatch):
        multiply(dual_numbers(F3).one(), build_sweedler_h4(F3).alg.one())


@pytest.mark.parametrize("p", [3, 5])
def test_builders_are_associative(p):
    f = Field.prime(p)
    for A in [dual_numbers(f), build_sweedler_h4(f).alg, group_algebra(symmetric(3), f)]:
        assert check_algebra_axioms(A).ok


def test_corrupted_unit_is_caught(F3):
    A = dual_numbers(F3)
    bad = StructureAlgebra(F3, A.mult, [0, 1], A.labels)
    report = check_algebra_axioms(bad)
    assert report.failed("unit")
    assert report.failures[0][1] == "1"


def test_corrupted_associativity_is_caught(F3):
    mult = build_sweedler_h4(F3).alg.mult.copy()
    mult[2, 2, 0] = 1  # h * h = 1 clashes with g h = -h g
    assert check_algebra_axioms(StructureAlgebra(F3, mult, [1, 0, 0, 0])).failed("associativity")


def test_tensor_layout(F3):
    E = dual_numbers(F3)
    H = build_sweedler_h4(F3).alg
    EH = tensor_algebra(E, H)
    assert EH.dim == 8
    assert EH.unit.tolist() == [1, 0, 0, 0, 0, 0, 0, 0]
    # (h (x) g)(1 (x) h) = h (x) gh
    prod = EH.mul(np.eye(8, dtype=np.int64)[5], np.eye(8, dtype=np.int64)[2])
    assert prod.tolist() == np.eye(8, dtype=np.int64)[7].tolist()


def test_ground_tensor_is_identity(F3):
    A = build_sweedler_h4(F3).alg
    kA = tensor_algebra(ground_algebra(F3), A)
    assert np.array_equal(kA.mult, A.mult)


def test_try_inverse_examples(F3):
    A = dual_numbers(F3)
    assert try_inverse(el(A, 1, 1)).coords.tolist() == [1, 2]
    with pytest.raises(NotInvertible):
        try_inverse(el(A, 0, 1))
    assert try_inverse(A.one()) == A.one()


def test_enumeration_counts(F3):
    A = dual_numbers(F3)
    assert len(list(enumerate_elements(A))) == 9
    units, _ = unit_group(A)
    assert len(units) == 6
    # alpha + beta h is a unit exactly when alpha != 0
    assert all(u[0] != 0 for u in units)


def test_enumeration_is_lexicographic(F3):
    rows = [e.key() for e in enumerate_elements(dual_numbers(F3))]
    assert rows == sorted(rows)


def test_counit_normalised_slice(F3):
    H = build_sweedler_h4(F3)
    E = dual_numbers(F3)
    EH = tensor_algebra(E, H.alg)
    id_eps = np.kron(np.eye(2, dtype=np.int64), H.counit)
    space = affine_preimage(id_eps, [1, 0], F3)
    # id (x) eps maps onto E2, so the slice has dimension 8 - 2
    assert space.dim == 8 - matrix_rank(id_eps, F3) == 6
    pts = all_points(EH, space)
    assert len(pts) == 3**6 == 729
    # independent invertibility test: rank of the left-multiplication matrix
    rank_units = sum(matrix_rank(EH.left_matrix(x), F3) == 8 for x in pts)
    ok, _ = EH.batch_inverse(pts)
    assert int(ok.sum()) == rank_units == 486


def test_budget_and_rational_guards(F3):
    with pytest.raises(EnumerationOverBudget):
        list(enumerate_elements(build_sweedler_h4(F3).alg, budget=10))
    Q = Field.rational()
    with pytest.raises(RationalFieldNotEnumerable):
        list(enumerate_elements(dual_numbers(Q)))


def test_rational_algebra_inverse():
    Q = Field.rational()
    A = dual_numbers(Q)
    inv = try_inverse(Element(A, Q.array([2, 3])))
    assert (A.mul(inv.coords, Q.array([2, 3])) == A.unit).all()


def _algebras():
    f = Field.prime(3)
    return [dual_numbers(f), build_sweedler_h4(f).alg, group_algebra(cyclic(3), f)]


coords = st.lists(st.integers(0, 2), min_size=4, max_size=4)


@given(st.sampled_from(range(3)), st.data())
def test_bilinear(which, data):
    A = _algebras()[which]
    draw = lambda: np.array(data.draw(st.lists(st.integers(0, 2), min_size=A.dim, max_size=A.dim)))
    a, a2, b = draw(), draw(), draw()
    lhs = A.mul((a + a2) % 3, b)
    assert np.array_equal(lhs, (A.mul(a, b) + A.mul(a2, b)) % 3)


@given(st.sampled_from(range(3)), st.data())
def test_inverse_is_involutive(which, data):
    A = _algebras()[which]
    a = Element(A, np.array(data.draw(st.lists(st.integers(0, 2), min_size=A.dim, max_size=A.dim))))
    try:
        b = try_inverse(a)
    except NotInvertible:
        return
    assert try_inverse(b) == a
    assert a * b == A.one() and b * a == A.one()


@pytest.mark.parametrize("i,j", [(0, 0), (0, 1), (0, 2)])
def test_tensor_of_algebras(i, j):
    A, B = _algebras()[i], _algebras()[j]
    AB = tensor_algebra(A, B)
    assert check_algebra_axioms(AB).ok
    units, _ = unit_group(AB)
    brute = sum(matrix_rank(AB.left_matrix(x), AB.field) == AB.dim for x in all_points(AB))
    assert len(units) == brute


def test_morphism_check(F3):
    H = build_sweedler_h4(F3)
    assert linear_map_is_algebra_morphism(H.counit, H.alg, ground_algebra(F3))[0]
    ok, witness = linear_map_is_algebra_morphism(np.eye(4, dtype=np.int64)[:, [0, 0, 2, 3]], H.alg, H.alg)
    assert not ok and witness is not None
