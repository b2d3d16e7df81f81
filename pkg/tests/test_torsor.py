import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vec
from hopfcoh.cohomology import AlgebraDiagram, NotCommutative
from hopfcoh.comodule import (
    HopfModule,
    over_trivial_hopf,
    regular_module,
    self_comodule,
    trivial_coefficients,
)
from hopfcoh.groups import trivial
from hopfcoh.hopf import build_function_hopf
from hopfcoh.precosimplicial import key
from hopfcoh.torsor import (
    NotInTBullet,
    classify_torsors,
    deform_coaction,
    deformation_check,
    extract_cocycle,
    find_isomorphism,
    group_torsor_bridge,
    module_torsor_check,
    module_units,
    tensor_product_check,
    torsor_tensor,
)

# E2 (x) H4 basis: 1(x)1, 1(x)g, 1(x)h, 1(x)gh, h(x)1, h(x)g, h(x)h, h(x)gh
Y0 = vec((1, 1))


def x_cocycle(a):
    return vec((0, 1), (2, a), (4, -a), (5, a), (6, -a * a))


def support(col):
    return {int(i): int(col[i]) for i in np.nonzero(col)[0]}


def test_unit_cocycle_keeps_coaction(E2):
    assert np.array_equal(deform_coaction(E2, E2.level1.unit).coaction, E2.coaction)


def test_y0_deformation(E2):
    coaction = deform_coaction(E2, Y0).coaction
    assert support(coaction[:, 0]) == {1: 1}  # 1 -> 1(x)g
    assert support(coaction[:, 1]) == {4: 1, 3: 1}  # h -> h(x)1 + 1(x)gh


@pytest.mark.parametrize("a", [0, 1, 2])
def test_x_deformation_of_h(E2, a):
    # h -> 1(x)h + h(x)g - a h(x)h
    coaction = deform_coaction(E2, x_cocycle(a)).coaction
    expected = {2: 1, 5: 1}
    if a:
        expected[6] = -a % 3
    assert support(coaction[:, 1]) == expected


def test_deformation_equivalence(E2):
    report = deformation_check(E2)
    assert report.ok, report.failures
    assert report.data["cocycles"] == 6
    assert report.data["pairs"] == 36


def test_unit_and_y0_not_isomorphic(E2):
    M = deform_coaction(E2, E2.level1.unit).module
    N = deform_coaction(E2, Y0).module
    assert find_isomorphism(M, N) is None


def test_x_family_single_orbit(E2):
    res = AlgebraDiagram(E2).cohomology()
    assert len({res.class_of(x_cocycle(a)) for a in range(3)}) == 1


def test_units_of_regular_module(E2):
    rec = module_units(regular_module(E2))
    assert rec.is_torsor
    assert sorted(map(key, rec.units)) == [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]


def test_units_of_y0_module(E2):
    rec = module_units(deform_coaction(E2, Y0).module)
    assert rec.checks.ok
    assert len(rec.units) == 6
    assert sorted(map(key, rec.bullet)) == sorted(map(key, rec.units))


def test_zero_module_is_not_a_torsor(E2):
    zero = HopfModule(E2, np.zeros((2, 0, 0), dtype=np.int64), np.zeros((0, 0), dtype=np.int64))
    rec = module_units(zero)
    assert len(rec.units) == 0
    assert not rec.is_torsor


def test_extract_from_regular(E2):
    assert key(extract_cocycle(regular_module(E2), vec((0, 1), n=2))) == key(E2.level1.unit)


def test_extract_from_y0(E2):
    T = deform_coaction(E2, Y0).module
    assert key(extract_cocycle(T, vec((0, 1), n=2))) == key(Y0)


def test_extract_rejects_non_unit(E2):
    with pytest.raises(NotInTBullet):
        extract_cocycle(regular_module(E2), vec((1, 1), n=2))


@given(st.integers(1, 2), st.integers(0, 2), st.sampled_from([0, 1]))
def test_extracted_classes_agree(E2, a, b, which):
    res = AlgebraDiagram(E2).cohomology()
    X = E2.level1.unit if which == 0 else Y0
    T = deform_coaction(E2, X).module
    X_T = extract_cocycle(T, vec((0, a), (1, b), n=2))
    assert res.class_of(X_T) == res.class_of(X)


def test_classify_dual_numbers(E2):
    cls = classify_torsors(E2)
    assert cls.checks.ok, cls.checks.failures
    assert len(cls) == 2
    assert np.array_equal(cls.classes[0].coaction, E2.coaction)
    expected = deform_coaction(E2, Y0).module
    assert find_isomorphism(cls.classes[1].module, expected) is not None


def test_classify_trivial_hopf(E2):
    assert len(classify_torsors(over_trivial_hopf(E2.alg))) == 1


def test_classify_self(H4):
    cls = classify_torsors(self_comodule(H4))
    assert cls.checks.ok
    assert len(cls) == 1


def test_classes_match_h1(E2, H4, k_over_kZ2):
    for E in (E2, trivial_coefficients(H4), k_over_kZ2):
        assert len(classify_torsors(E)) == AlgebraDiagram(E).cohomology().h1_size


def test_tensor_needs_commutative(E2):
    M = regular_module(E2)
    with pytest.raises(NotCommutative):
        torsor_tensor(M, M)


def test_tensor_with_unit_torsor(k_over_kZ2):
    cls = classify_torsors(k_over_kZ2)
    E = regular_module(k_over_kZ2)
    for c in cls.classes:
        prod = torsor_tensor(E, c.module)
        assert prod.checks.ok
        assert find_isomorphism(prod.module, c.module) is not None


def test_nontrivial_class_squares_to_trivial(k_over_kZ2):
    cls = classify_torsors(k_over_kZ2)
    T = cls.classes[1].module
    prod = torsor_tensor(T, T)
    assert find_isomorphism(prod.module, cls.classes[0].module) is not None
    assert find_isomorphism(prod.module, T) is None


def test_tensor_product_law(k_over_kZ2):
    report = tensor_product_check(k_over_kZ2)
    assert report.ok, report.failures


@pytest.mark.parametrize("which, classes", [("ground", 2), ("self", 1), ("trivial", 1)])
def test_bridge(F3, kZ2, k_over_kZ2, kZ2_self, which, classes):
    E = {
        "ground": k_over_kZ2,
        "self": kZ2_self,
        "trivial": trivial_coefficients(build_function_hopf(trivial(), F3)),
    }[which]
    b = group_torsor_bridge(E)
    assert b.ok, b.checks.failures
    assert b.hopf_classes == b.group_classes == classes
    assert sorted(b.images) == list(range(classes))


def test_module_torsors(E2):
    M = regular_module(E2)
    rep = module_torsor_check(M)
    assert rep.ok, rep.checks.failures
    assert len(rep.coactions) == 2
    assert np.array_equal(rep.coactions[0], M.coaction)
    induced = M.with_coaction(rep.coactions[1])
    assert find_isomorphism(induced, deform_coaction(E2, Y0).module) is not None
