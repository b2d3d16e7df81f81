from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopfcoh.exactmath import (
    Field,
    NotSquare,
    Singular,
    Unsolvable,
    ZeroInverse,
    is_prime,
    kernel_basis,
    matrix_inverse,
    matrix_rank,
    project_to_quotient,
    quotient_coords,
    rref,
    scalar_inverse,
    solve_linear,
)

PRIMES = [2, 3, 5, 7, 101]


def same_span(A, B, f):
    if A.shape[0] == 0 or B.shape[0] == 0:
        return A.shape[0] == B.shape[0]
    return np.array_equal(rref(A, f)[0][: matrix_rank(A, f)], rref(B, f)[0][: matrix_rank(B, f)])


def test_primality_by_trial_division():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ValueError):
        Field.prime(9)


@pytest.mark.parametrize("a,p,expected", [(1, 3, 1), (2, 5, 3)])
def test_scalar_inverse_prime(a, p, expected):
    assert scalar_inverse(a, Field.prime(p)) == expected


def test_scalar_inverse_rational():
    assert scalar_inverse(Fraction(3, 4), Field.rational()) == Fraction(4, 3)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroInverse):
        scalar_inverse(0, Field.prime(7))
    with pytest.raises(ZeroInverse):
        scalar_inverse(0, Field.rational())


@given(st.sampled_from(PRIMES), st.integers(1, 10**6))
def test_inverse_property(p, a):
    f = Field.prime(p)
    if a % p == 0:
        return
    assert a * scalar_inverse(a, f) % p == 1


def test_rational_field_not_enumerable():
    from hopfcoh.exactmath import RationalFieldNotEnumerable

    with pytest.raises(RationalFieldNotEnumerable):
        Field.rational().size()


def test_solve_identity():
    f = Field.prime(5)
    sol = solve_linear(f.eye(2), [1, 2], f)
    assert sol.particular.tolist() == [1, 2]
    assert sol.kernel.shape[0] == 0


def test_solve_zero_system():
    f = Field.prime(5)
    sol = solve_linear(f.zeros((2, 2)), [0, 0], f)
    assert sol.particular.tolist() == [0, 0]
    assert sol.kernel.shape[0] == 2


def test_solve_rank_one_f3():
    f = Field.prime(3)
    A = np.array([[1, 1], [2, 2]])
    sol = solve_linear(A, [1, 2], f)
    assert sol.particular.tolist() == [1, 0]
    # the kernel line is spanned by (1, 2)
    assert same_span(sol.kernel, np.array([[1, 2]]), f)


def test_unsolvable():
    f = Field.prime(3)
    with pytest.raises(Unsolvable):
        solve_linear(np.array([[1, 1], [1, 1]]), [0, 1], f)


def test_rank_examples():
    assert matrix_rank(np.eye(3, dtype=np.int64), Field.prime(3)) == 3
    assert matrix_rank(np.zeros((2, 5), dtype=np.int64), Field.prime(3)) == 0
    assert matrix_rank([[1, 2], [2, 4]], Field.rational()) == 1


def test_inverse_examples():
    f = Field.prime(3)
    assert np.array_equal(matrix_inverse(f.eye(4), f), f.eye(4))
    swap = np.array([[0, 1], [1, 0]])
    assert np.array_equal(matrix_inverse(swap, f), swap)
    assert matrix_inverse(np.array([[1, 1], [0, 1]]), f).tolist() == [[1, 2], [0, 1]]
    with pytest.raises(NotSquare):
        matrix_inverse(np.ones((2, 3), dtype=np.int64), f)
    with pytest.raises(Singular):
        matrix_inverse(np.ones((2, 2), dtype=np.int64), f)


def test_rational_inverse():
    f = Field.rational()
    A = f.array([[2, 1], [1, 1]])
    inv = matrix_inverse(A, f)
    assert (A.dot(inv) == f.eye(2)).all()
    assert inv[0, 0] == Fraction(1)


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices, st.sampled_from([2, 3, 7]), st.data())
def test_solve_round_trip(rows, p, data):
    f = Field.prime(p)
    A = f.array(rows)
    x0 = f.array(data.draw(st.lists(st.integers(0, p - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = f.matmul(A, x0)
    sol = solve_linear(A, b, f)
    assert np.array_equal(f.matmul(A, sol.particular), b)
    for k in sol.kernel:
        assert not f.matmul(A, k).any()
    # rank-nullity
    assert sol.kernel.shape[0] + matrix_rank(A, f) == A.shape[1]


@given(st.integers(1, 5), st.sampled_from([2, 3, 5]), st.data())
def test_inverse_iff_full_rank(n, p, data):
    f = Field.prime(p)
    A = f.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n)))
    if matrix_rank(A, f) < n:
        with pytest.raises(Singular):
            matrix_inverse(A, f)
    else:
        inv = matrix_inverse(A, f)
        assert np.array_equal(f.matmul(inv, A), f.eye(n))
        assert np.array_equal(f.matmul(A, inv), f.eye(n))


@given(matrices)
def test_rational_kernel_annihilates(rows):
    f = Field.rational()
    A = f.array(rows)
    for k in kernel_basis(A, f):
        assert all(v == 0 for v in A.dot(k))


@given(matrices, st.sampled_from([3, 5]))
def test_quotient_projection_kills_relations(rows, p):
    f = Field.prime(p)
    rel = f.array(rows)
    R, pivots, free = project_to_quotient(rel, f)
    assert len(free) == rel.shape[1] - matrix_rank(rel, f)
    for r in rel:
        assert not quotient_coords(r, R, pivots, free, f).any()
