import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfcoh import _kernels
from hopfcoh.cohomology import AlgebraDiagram
from hopfcoh.exactmath import Field, Singular, matrix_inverse

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")
BACKENDS = ["numba", "numpy"] if _kernels.HAVE_NUMBA else ["numpy"]


def rows(n, dim, p=3):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim), min_size=n, max_size=n).map(
        lambda v: np.array(v, dtype=np.int64).reshape(n, dim))


@pytest.mark.parametrize("name", BACKENDS)
@given(A=rows(5, 8), B=rows(5, 8))
def test_batch_mul_matches_structure_constants(E2, name, A, B):
    L = E2.level1
    expected = np.einsum("ni,nj,ijk->nk", A, B, L.mult) % 3
    with _kernels.use_backend(name):
        assert np.array_equal(_kernels.batch_mul(A, B, L.triples, 3), expected)


@pytest.mark.parametrize("name", BACKENDS)
@given(X=rows(20, 8))
def test_relation_mask_matches_direct_check(E2, name, X):
    D = AlgebraDiagram(E2)
    L2 = D.levels[2]
    lhs = L2.batch_mul(X @ D.d(1, 2).T % 3, X @ D.d(1, 0).T % 3)
    expected = np.all(lhs == X @ D.d(1, 1).T % 3, axis=1)
    with _kernels.use_backend(name):
        assert np.array_equal(D.cocycle_mask(X), expected)


@pytest.mark.parametrize("name", BACKENDS)
@given(M=st.lists(st.integers(0, 4), min_size=4 * 9, max_size=4 * 9), rhs=st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_batch_solve_matches_exact_inverse(name, M, rhs):
    f = Field.prime(5)
    mats = np.array(M, dtype=np.int64).reshape(4, 3, 3)
    b = np.array(rhs, dtype=np.int64)
    with _kernels.use_backend(name):
        ok, sol = _kernels.batch_solve(mats, b, 5)
    for m, good, x in zip(mats, ok, sol):
        try:
            inv = matrix_inverse(m, f)
        except Singular:
            assert not good
            continue
        assert good
        assert np.array_equal(x, inv @ b % 5)


@needs_numba
def test_backends_agree_on_full_scan(E2, H4):
    from hopfcoh.comodule import self_comodule

    for E in (E2, self_comodule(H4)):
        D = AlgebraDiagram(E)
        space = D.candidate_space(True)
        total = 3 ** space.dim
        args = (space.particular, space.basis, 0, total, *D._relation_data, 3)
        with _kernels.use_backend("numba"):
            fast = _kernels.slice_survivors(*args)
        with _kernels.use_backend("numpy"):
            slow = _kernels.slice_survivors(*args)
        assert np.array_equal(fast, slow)


def test_unknown_backend():
    with pytest.raises(ValueError):
        with _kernels.use_backend("fortran"):
            pass


def test_environment_switch_selects_numpy():
    code = (
        "from hopfcoh import _kernels\n"
        "from hopfcoh.cohomology import AlgebraDiagram\n"
        "from hopfcoh.comodule import build_dual_numbers_comodule\n"
        "from hopfcoh.exactmath import Field\n"
        "res = AlgebraDiagram(build_dual_numbers_comodule(Field.prime(3))).cohomology()\n"
        "print(_kernels.backend(), _kernels.HAVE_NUMBA, len(res.z1), [o.representative for o in res.orbits])\n"
    )
    env = dict(os.environ, HOPFCOH_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    backend, have, z1, reps = out.split(" ", 3)
    assert (backend, have, z1) == ("numpy", "False", "6")
    assert reps.strip() == "[(1, 0, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0, 0)]"
