"""Hot loops of the brute-force searches, over prime fields only.

Every kernel exists twice: a numba ``@njit`` version and a vectorised numpy
version.  ``HOPFCOH_NUMBA=0`` in the environment (or numba failing to
import) selects the numpy path; :func:`use_backend` switches at runtime,
which the benchmark and the equivalence tests rely on.

All arrays are int64 residues in ``[0, p)``.  Structure constants are passed
as "triples": for each output coordinate ``k`` the nonzero ``(i, j, c)`` with
``e_i e_j`` contributing ``c * e_k``, grouped CSR-style by ``k``.  Linear maps
are passed in CSR form as well; tensor-product algebras are very sparse.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

try:  # pragma: no cover - exercised implicitly
    if os.environ.get("HOPFCOH_NUMBA", "1") == "0":
        raise ImportError("numba disabled by HOPFCOH_NUMBA=0")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_backend = "numba" if HAVE_NUMBA else "numpy"


def backend() -> str:
    return _backend


@contextmanager
def use_backend(name: str):
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    old, _backend = _backend, name
    try:
        yield
    finally:
        _backend = old


# ---------------------------------------------------------------------------
# sparse helpers (pure python, run once per algebra / map)


def triples_from_constants(mult: np.ndarray):
    """CSR-by-output encoding of an (n, n, n) structure-constant array."""
    n = mult.shape[0]
    i, j, k = np.nonzero(mult)
    order = np.lexsort((j, i, k))
    i, j, k = i[order], j[order], k[order]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, k + 1, 1)
    ptr = np.cumsum(ptr)
    coef = mult[i, j, k].astype(np.int64)
    return ptr, i.astype(np.int64), j.astype(np.int64), coef


def csr_from_dense(mat: np.ndarray):
    rows, cols = np.nonzero(mat)
    ptr = np.zeros(mat.shape[0] + 1, dtype=np.int64)
    np.add.at(ptr, rows + 1, 1)
    ptr = np.cumsum(ptr)
    return ptr, cols.astype(np.int64), mat[rows, cols].astype(np.int64)


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True, nogil=True)
def _inv_mod(a, p):
    t, new_t, r, new_r = 0, 1, p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit(cache=True, nogil=True)
def _apply_csr(ptr, idx, val, x, out, p):
    for r in range(ptr.shape[0] - 1):
        s = 0
        for q in range(ptr[r], ptr[r + 1]):
            s = (s + val[q] * x[idx[q]]) % p
        out[r] = s


@njit(cache=True, nogil=True)
def _batch_mul_nb(A, B, tp, ti, tj, tc, p):
    N = A.shape[0]
    n = tp.shape[0] - 1
    out = np.zeros((N, n), dtype=np.int64)
    for t in range(N):
        for k in range(n):
            s = 0
            for q in range(tp[k], tp[k + 1]):
                s = (s + (tc[q] * A[t, ti[q]] % p) * B[t, tj[q]]) % p
            out[t, k] = s
    return out


@njit(cache=True, nogil=True)
def _csr_entry(ptr, idx, val, x, r, p):
    s = 0
    for q in range(ptr[r], ptr[r + 1]):
        s = (s + val[q] * x[idx[q]]) % p
    return s


@njit(cache=True, nogil=True)
def _relation_holds(x, ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p, a, b, seen_a, seen_b, stamp):
    # coordinates of A x and B x are computed on first use; ``stamp`` marks validity
    for k in range(tp.shape[0] - 1):
        s = 0
        for q in range(tp[k], tp[k + 1]):
            i = ti[q]
            if seen_a[i] != stamp:
                a[i] = _csr_entry(ap, ai, av, x, i, p)
                seen_a[i] = stamp
            if a[i] == 0:
                continue
            j = tj[q]
            if seen_b[j] != stamp:
                b[j] = _csr_entry(bp, bi, bv, x, j, p)
                seen_b[j] = stamp
            s = (s + (tc[q] * a[i] % p) * b[j]) % p
        if s != _csr_entry(cp, ci, cv, x, k, p):
            return False
    return True


@njit(cache=True, nogil=True)
def _relation_mask_nb(X, ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p):
    N = X.shape[0]
    n2 = tp.shape[0] - 1
    out = np.zeros(N, dtype=np.bool_)
    a = np.empty(n2, dtype=np.int64)
    b = np.empty(n2, dtype=np.int64)
    seen_a = np.full(n2, -1, dtype=np.int64)
    seen_b = np.full(n2, -1, dtype=np.int64)
    for t in range(N):
        out[t] = _relation_holds(X[t], ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p,
                                 a, b, seen_a, seen_b, t)
    return out


@njit(cache=True, nogil=True)
def _slice_survivors_nb(particular, basis, lo, hi, ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p):
    # walk points lo..hi-1 of the affine slice with an odometer over the parameters
    k, n = basis.shape
    n2 = tp.shape[0] - 1
    digits = np.zeros(k, dtype=np.int64)
    rem = lo
    for t in range(k - 1, -1, -1):
        digits[t] = rem % p
        rem //= p
    x = particular.copy()
    for t in range(k):
        for c in range(n):
            x[c] = (x[c] + digits[t] * basis[t, c]) % p
    a = np.empty(n2, dtype=np.int64)
    b = np.empty(n2, dtype=np.int64)
    seen_a = np.full(n2, -1, dtype=np.int64)
    seen_b = np.full(n2, -1, dtype=np.int64)
    hits = np.empty(hi - lo, dtype=np.int64)
    count = 0
    for idx in range(lo, hi):
        if _relation_holds(x, ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p, a, b, seen_a, seen_b, idx):
            hits[count] = idx
            count += 1
        t = k - 1
        while t >= 0:
            for c in range(n):
                x[c] = (x[c] + basis[t, c]) % p
            digits[t] += 1
            if digits[t] < p:
                break
            digits[t] = 0
            t -= 1
    return hits[:count]


@njit(cache=True, nogil=True)
def _batch_solve_nb(M, rhs, p):
    N, n, m = M.shape
    ok = np.zeros(N, dtype=np.bool_)
    sol = np.zeros((N, m), dtype=np.int64)
    W = np.empty((n, m + 1), dtype=np.int64)
    for t in range(N):
        for r in range(n):
            for c in range(m):
                W[r, c] = M[t, r, c]
            W[r, m] = rhs[r]
        row = 0
        pivots = np.full(m, -1, dtype=np.int64)
        for col in range(m):
            piv = -1
            for r in range(row, n):
                if W[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != row:
                for c in range(m + 1):
                    tmp = W[row, c]
                    W[row, c] = W[piv, c]
                    W[piv, c] = tmp
            inv = _inv_mod(W[row, col], p)
            for c in range(m + 1):
                W[row, c] = W[row, c] * inv % p
            for r in range(n):
                if r != row and W[r, col] != 0:
                    f = W[r, col]
                    for c in range(m + 1):
                        W[r, c] = (W[r, c] - f * W[row, c]) % p
            pivots[col] = row
            row += 1
            if row == n:
                break
        if row < m:
            continue
        consistent = True
        for r in range(row, n):
            if W[r, m] != 0:
                consistent = False
        if not consistent:
            continue
        ok[t] = True
        for col in range(m):
            sol[t, col] = W[pivots[col], m]
    return ok, sol


# ---------------------------------------------------------------------------
# numpy fallbacks


def _batch_mul_np(A, B, tp, ti, tj, tc, p):
    N = A.shape[0]
    n = tp.shape[0] - 1
    out = np.zeros((N, n), dtype=np.int64)
    if N == 0 or ti.size == 0:
        return out
    terms = (tc[None, :] * A[:, ti]) % p * B[:, tj] % p
    for k in range(n):
        lo, hi = tp[k], tp[k + 1]
        if hi > lo:
            out[:, k] = terms[:, lo:hi].sum(axis=1) % p
    return out


def _csr_to_dense(ptr, idx, val, ncols):
    mat = np.zeros((ptr.shape[0] - 1, ncols), dtype=np.int64)
    for r in range(ptr.shape[0] - 1):
        mat[r, idx[ptr[r]:ptr[r + 1]]] = val[ptr[r]:ptr[r + 1]]
    return mat


def _relation_mask_np(X, ap, ai, av, bp, bi, bv, cp, ci, cv, tp, ti, tj, tc, p):
    N, n1 = X.shape
    n2 = tp.shape[0] - 1
    A = _csr_to_dense(ap, ai, av, n1)
    B = _csr_to_dense(bp, bi, bv, n1)
    C = _csr_to_dense(cp, ci, cv, n1)
    mask = np.zeros(N, dtype=bool)
    chunk = 1 << 14
    for lo in range(0, N, chunk):
        Xc = X[lo:lo + chunk]
        alive = np.arange(Xc.shape[0])
        a = Xc @ A.T % p
        b = Xc @ B.T % p
        c = Xc @ C.T % p
        for k in range(n2):
            if alive.size == 0:
                break
            q0, q1 = tp[k], tp[k + 1]
            if q1 > q0:
                s = ((tc[q0:q1] * a[alive][:, ti[q0:q1]]) % p * b[alive][:, tj[q0:q1]]).sum(axis=1) % p
            else:
                s = np.zeros(alive.size, dtype=np.int64)
            alive = alive[s == c[alive, k]]
        mask[lo + alive] = True
    return mask


def _batch_solve_np(M, rhs, p):
    N, n, m = M.shape
    W = np.concatenate([M % p, np.broadcast_to(rhs % p, (N, n))[:, :, None]], axis=2).astype(np.int64)
    inv_table = np.zeros(p, dtype=np.int64)
    inv_table[1:] = [pow(a, p - 2, p) for a in range(1, p)]
    rank = np.zeros(N, dtype=np.int64)
    pivot_row_of_col = np.full((N, m), -1, dtype=np.int64)
    rows = np.arange(n)
    batch = np.arange(N)
    for col in range(m):
        cand = (W[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        t = batch[has]
        r0 = rank[has]
        pr = piv[has]
        top = W[t, r0].copy()
        W[t, r0] = W[t, pr]
        W[t, pr] = top
        scale = inv_table[W[t, r0, col]]
        W[t, r0] = W[t, r0] * scale[:, None] % p
        factors = W[t, :, col].copy()
        factors[np.arange(t.size), r0] = 0
        W[t] = (W[t] - factors[:, :, None] * W[t, r0][:, None, :]) % p
        pivot_row_of_col[t, col] = r0
        rank[has] += 1
    full = rank == m
    tail = rows[None, :] >= rank[:, None]
    consistent = ~((W[:, :, m] != 0) & tail).any(axis=1)
    ok = full & consistent
    sol = np.zeros((N, m), dtype=np.int64)
    idx = np.nonzero(ok)[0]
    if idx.size:
        pr = pivot_row_of_col[idx]
        sol[idx] = W[idx[:, None], pr, m]
    return ok, sol


# ---------------------------------------------------------------------------
# dispatch


def batch_mul(A, B, triples, p):
    """Row-wise products ``A[t] * B[t]`` in the algebra given by ``triples``."""
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    fn = _batch_mul_nb if _backend == "numba" else _batch_mul_np
    return fn(A, B, *triples, p)


def relation_mask(X, lhs_left, lhs_right, rhs, triples, p):
    """Mask of rows ``x`` with ``(L x) * (R x) == (C x)``; maps given in CSR."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    fn = _relation_mask_nb if _backend == "numba" else _relation_mask_np
    return fn(X, *lhs_left, *lhs_right, *rhs, *triples, p)


def slice_survivors(particular, basis, lo, hi, lhs_left, lhs_right, rhs, triples, p):
    """Indices in ``[lo, hi)`` of slice points satisfying the relation.

    Point number ``idx`` of the slice is ``particular + sum_t digit_t(idx) basis[t]``
    with base-``p`` digits, most significant first.
    """
    particular = np.ascontiguousarray(particular, dtype=np.int64)
    basis = np.ascontiguousarray(basis, dtype=np.int64).reshape(-1, particular.shape[0])
    if _backend == "numba":
        return _slice_survivors_nb(particular, basis, lo, hi, *lhs_left, *lhs_right, *rhs, *triples, p)
    X = slice_points(particular, basis, lo, hi, p)
    return lo + np.nonzero(_relation_mask_np(X, *lhs_left, *lhs_right, *rhs, *triples, p))[0]


def slice_points(particular, basis, lo, hi, p):
    """Points ``lo .. hi-1`` of an affine slice, as rows."""
    return points_at(particular, basis, np.arange(lo, hi, dtype=np.int64), p)


def points_at(particular, basis, idx, p):
    k = basis.shape[0]
    powers = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    params = ((idx[:, None] // powers[None, :]) % p).astype(np.float64)
    # float64 products stay exact: entries < p < 2**16 and k is small
    pts = params @ basis.astype(np.float64)
    return (pts.astype(np.int64) + particular[None, :]) % p


def batch_solve(M, rhs, p):
    """Solve ``M[t] x = rhs`` for each t; ``ok[t]`` iff a unique solution exists."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    rhs = np.ascontiguousarray(rhs, dtype=np.int64)
    if M.shape[0] == 0:
        return np.zeros(0, dtype=bool), np.zeros((0, M.shape[2]), dtype=np.int64)
    fn = _batch_solve_nb if _backend == "numba" else _batch_solve_np
    return fn(M, rhs, p)


def warmup() -> None:
    """Trigger JIT compilation (or cache load) on tiny inputs."""
    if not HAVE_NUMBA:
        return
    with use_backend("numba"):
        mult = np.zeros((1, 1, 1), dtype=np.int64)
        mult[0, 0, 0] = 1
        tr = triples_from_constants(mult)
        eye = csr_from_dense(np.eye(1, dtype=np.int64))
        x = np.ones((1, 1), dtype=np.int64)
        batch_mul(x, x, tr, 3)
        relation_mask(x, eye, eye, eye, tr, 3)
        slice_survivors(np.zeros(1, dtype=np.int64), np.ones((1, 1), dtype=np.int64), 0, 3, eye, eye, eye, tr, 3)
        batch_solve(np.ones((1, 1, 1), dtype=np.int64), np.ones(1, dtype=np.int64), 3)
