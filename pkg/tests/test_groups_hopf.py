import warnings

import numpy as np
import pytest

from hopfcoh.algebra import Element
from hopfcoh.exactmath import Field
from hopfcoh.groups import FiniteGroup, NotAGroup, cyclic, homomorphisms_to_units, symmetric, trivial
from hopfcoh.hopf import (
    CharacteristicTwoWarning,
    HopfAlgebra,
    build_function_hopf,
    build_sweedler_h4,
    check_hopf_axioms,
    grouplikes,
    trivial_hopf,
)


def test_group_validation():
    with pytest.raises(NotAGroup):
        FiniteGroup([[0, 1], [1, 1]])
    S3 = symmetric(3)
    assert S3.order == 6 and not S3.is_abelian()
    assert sorted(S3.element_order(a) for a in range(6)) == [1, 2, 2, 2, 3, 3]


@pytest.mark.parametrize("p", [3, 5])
def test_sweedler_passes(p):
    assert check_hopf_axioms(build_sweedler_h4(Field.prime(p))).ok


def test_sweedler_comultiplication_of_h(H4):
    # Delta(h) = h (x) g + 1 (x) h in the (i, j) -> 4 i + j layout
    col = H4.comult[:, 2]
    assert sorted(np.nonzero(col)[0].tolist()) == sorted([2 * 4 + 1, 0 * 4 + 2])
    assert H4.counit[0].tolist() == [1, 1, 0, 0]


def test_sweedler_antipode_values(H4):
    s = H4.antipode
    assert s[:, 2].tolist() == [0, 0, 0, 1]  # sigma(h) = gh
    assert s[:, 3].tolist() == [0, 0, 2, 0]  # sigma(gh) = -h


@pytest.mark.parametrize("sigma_h,sigma_gh", [([0, 0, 2, 0], [0, 0, 0, 1]), ([0, 0, 0, 2], [0, 0, 0, 1])])
def test_literal_antipode_variants_fail(H4, sigma_h, sigma_gh):
    """The printed sigma(gh) = gh cannot be completed to an antipode."""
    s = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=np.int64)
    s[:, 2] = sigma_h
    s[:, 3] = sigma_gh
    report = check_hopf_axioms(HopfAlgebra(H4.alg, H4.comult, H4.counit, s))
    assert report.failed("antipode")


def test_identity_antipode_fails(H4):
    report = check_hopf_axioms(HopfAlgebra(H4.alg, H4.comult, H4.counit, np.eye(4, dtype=np.int64)))
    assert report.failed("antipode")
    assert report.failures[0][1] == "h"


def test_characteristic_two_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        H = build_sweedler_h4(Field.prime(2))
    assert any(issubclass(w.category, CharacteristicTwoWarning) for w in caught)
    assert H.warning


@pytest.mark.parametrize("G", [trivial(), cyclic(2), cyclic(3), symmetric(3)], ids=lambda G: G.name)
def test_function_hopf(G):
    H = build_function_hopf(G, Field.prime(3))
    assert check_hopf_axioms(H).ok
    assert H.dim == G.order


def test_function_hopf_z2_comult(kZ2):
    # Delta(d0) = d0 (x) d0 + d1 (x) d1
    assert sorted(np.nonzero(kZ2.comult[:, 0])[0].tolist()) == [0, 3]


def test_grouplikes_of_h4(H4):
    rows, G = grouplikes(H4)
    assert rows.tolist() == [[0, 1, 0, 0], [1, 0, 0, 0]]
    assert G.order == 2


def test_grouplikes_of_k(F3):
    rows, _ = grouplikes(trivial_hopf(F3))
    assert rows.tolist() == [[1]]


def test_grouplikes_of_kz2(kZ2):
    rows, _ = grouplikes(kZ2)
    assert sorted(map(tuple, rows.tolist())) == [(1, 1), (1, 2)]


@pytest.mark.parametrize("G,p", [(cyclic(2), 3), (cyclic(3), 7), (cyclic(4), 5), (symmetric(3), 5), (trivial(), 3)])
def test_grouplikes_count_characters(G, p):
    """Grouplikes of k^G are the characters of G, counted independently."""
    rows, table = grouplikes(build_function_hopf(G, Field.prime(p)))
    assert len(rows) == len(homomorphisms_to_units(G, p))
    # closed under product and inverse: the returned table is a group
    assert table.order == len(rows)
    H = build_function_hopf(G, Field.prime(p))
    for r in rows:
        Element(H.alg, r).inverse()
