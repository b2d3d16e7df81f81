import functools
import itertools

import numpy as np
import pytest

from hopfcoh.comodule import build_conjugation_comodule, trivial_coefficients
from hopfcoh.exactmath import Field
from hopfcoh.groupcoh import (
    GGroup,
    NotAnAction,
    action_from_coaction,
    compare_group_cohomology,
    gamma_iso,
    group_h0,
    group_h1,
    group_z1,
    pontryagin_check,
    trivial_action,
    units_of_field,
)
from hopfcoh.groups import cyclic, symmetric, trivial
from hopfcoh.hopf import build_function_hopf
from hopfcoh.precosimplicial import key


@functools.lru_cache
def s3_brute_force(p=3):
    """Units of F_p[S3] twisted by conjugation with a transposition, by raw enumeration.

    Returns (|fixed units|, |{a : a . ^t a = 1}|, number of classes under a -> b^-1 a ^t b).
    Built from permutation tuples without touching the library's group code.
    """
    perms = list(itertools.permutations(range(3)))
    pos = {s: i for i, s in enumerate(perms)}

    def compose(s, t):
        return tuple(s[t[i]] for i in range(3))

    t = (1, 0, 2)
    conj = [pos[compose(compose(t, s), t)] for s in perms]
    mult = np.zeros((6, 6), dtype=np.int64)  # mult[i, j] = index of s_i s_j
    for i, s in enumerate(perms):
        for j, r in enumerate(perms):
            mult[i, j] = pos[compose(s, r)]

    def product(a, b):
        out = np.zeros(6, dtype=np.int64)
        np.add.at(out, mult, np.outer(a, b))
        return out % p

    def twist(a):
        out = np.zeros(6, dtype=np.int64)
        out[conj] = a
        return out

    one = np.zeros(6, dtype=np.int64)
    one[pos[(0, 1, 2)]] = 1
    everything = [np.array(v, dtype=np.int64) for v in itertools.product(range(p), repeat=6)]
    units = []
    for a in everything:
        left = np.zeros((6, 6), dtype=np.int64)
        for j in range(6):
            e = np.zeros(6, dtype=np.int64)
            e[j] = 1
            left[:, j] = product(a, e)
        if round(np.linalg.det(left)) % p:
            units.append(a)
    inverse = {}
    for a in units:
        for b in units:
            if key(product(a, b)) == key(one):
                inverse[key(a)] = b
                break
    fixed = [a for a in units if key(twist(a)) == key(a)]
    cocycles = {key(a) for a in units if key(product(a, twist(a))) == key(one)}
    seen, classes = set(), 0
    for a in sorted(cocycles):
        if a in seen:
            continue
        classes += 1
        for b in units:
            seen.add(key(product(product(inverse[key(b)], np.array(a)), twist(b))))
    return len(fixed), len(cocycles), classes


@pytest.fixture(scope="module")
def s3_conj(F3):
    S3 = symmetric(3)
    return build_conjugation_comodule(S3, [0, S3.index("(12)")], F3)


def test_units_of_field():
    table, labels = units_of_field(5)
    assert labels == ["1", "2", "3", "4"]
    assert table[1, 2] == 0  # 2 * 3 = 1


def test_trivial_group_acts_trivially(F3):
    A = trivial_action(trivial(), *units_of_field(3)[:1])
    assert len(group_z1(A)) == 1
    assert group_h1(A).h1_size == 1


def test_cyclic_two_on_field_units():
    table, labels = units_of_field(3)
    A = trivial_action(cyclic(2), table, labels=labels)
    assert len(group_z1(A)) == 2
    assert group_h1(A).h1_size == 2
    assert sorted(group_h0(A).tolist()) == [0, 1]
    # the constant map 1 is always a cocycle
    assert (0, 0) in {key(r) for r in group_z1(A)}


def test_bad_action_rejected():
    table, _ = units_of_field(3)
    with pytest.raises(NotAnAction):
        GGroup(cyclic(2), table, 0, [[1, 0], [0, 1]])


def test_conjugation_twist(s3_conj):
    A, units, _ = action_from_coaction(s3_conj)
    S3 = symmetric(3)
    row = {key(r): i for i, r in enumerate(units)}

    def basis(label):
        v = np.zeros(6, dtype=np.int64)
        v[S3.index(label)] = 1
        return row[key(v)]

    flip = 1 - A.G.identity
    assert A.act[flip, basis("(13)")] == basis("(23)")
    assert np.array_equal(A.act[A.G.identity], np.arange(A.order))


def test_gamma_of_unit_is_constant(s3_conj):
    gamma, report = gamma_iso(s3_conj)
    assert report.ok, report.failures
    one = gamma(1, s3_conj.level1.unit[None, :])[0]
    assert set(one.tolist()) == {gamma.A.identity}


def test_compare_ground_field(k_over_kZ2):
    report = compare_group_cohomology(k_over_kZ2)
    assert report.ok, report.failures
    assert report.data["H1"] == [2, 2]
    assert report.data["pairing"][0] == 0


def test_compare_trivial_group(F3):
    report = compare_group_cohomology(trivial_coefficients(build_function_hopf(trivial(), F3)))
    assert report.ok
    assert report.data["H1"] == [1, 1]


def test_compare_s3_against_brute_force(s3_conj):
    h0_size, z1_size, h1_size = s3_brute_force()
    report = compare_group_cohomology(s3_conj)
    assert report.ok, report.failures
    assert report.data["H0"] == [h0_size, h0_size]
    assert report.data["Z1"] == [z1_size, z1_size]
    assert report.data["H1"] == [h1_size, h1_size]


def test_s3_frozen_values():
    # frozen from the brute-force oracle above
    assert s3_brute_force() == (36, 20, 4)


@pytest.mark.parametrize("order, p, expected", [(2, 3, 2), (3, 5, 1), (1, 3, 1), (3, 7, 3)])
def test_pontryagin(order, p, expected):
    G = trivial() if order == 1 else cyclic(order)
    report = pontryagin_check(G, Field.prime(p))
    assert report.ok, report.failures
    assert report.data["order"] == expected == np.gcd(order, p - 1)
