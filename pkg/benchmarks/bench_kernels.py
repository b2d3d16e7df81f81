"""Numba kernels against the pure-numpy fallback on realistic workloads.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload is run under both backends; outputs must agree exactly.
"""

import argparse
import time

import numpy as np

from hopfcoh import _kernels
from hopfcoh.cohomology import AlgebraDiagram
from hopfcoh.comodule import build_dual_numbers_comodule, self_comodule
from hopfcoh.exactmath import Field
from hopfcoh.hopf import build_sweedler_h4


def cocycle_scan(E):
    D = AlgebraDiagram(E)
    space = D.candidate_space(True)
    left, right, rhs, triples = D._relation_data
    total = E.field.p ** space.dim

    def run():
        return _kernels.slice_survivors(space.particular, space.basis, 0, total, left, right, rhs, triples, E.field.p)

    return f"cocycle scan {E.name}, {total} points", run


def unit_solve(E, n=200_000, seed=0):
    rng = np.random.default_rng(seed)
    p = E.field.p
    L = E.level1
    X = rng.integers(0, p, size=(n, L.dim), dtype=np.int64)
    mats = np.einsum("ijk,ni->nkj", L.mult, X) % p
    rhs = L.unit

    def run():
        return _kernels.batch_solve(mats, rhs, p)

    return f"batched inverse, {n} elements of dim {L.dim}", run


def products(E, n=500_000, seed=1):
    rng = np.random.default_rng(seed)
    p = E.field.p
    L = E.level1
    A = rng.integers(0, p, size=(n, L.dim), dtype=np.int64)
    B = rng.integers(0, p, size=(n, L.dim), dtype=np.int64)
    tr = L.triples

    def run():
        return _kernels.batch_mul(A, B, tr, p)

    return f"batched products, {n} pairs of dim {L.dim}", run


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba unavailable (or HOPFCOH_NUMBA=0); nothing to compare")
    _kernels.warmup()
    F = Field.prime(3)
    H = build_sweedler_h4(F)
    E2 = build_dual_numbers_comodule(F, H)
    HH = self_comodule(H)
    workloads = [cocycle_scan(E2), cocycle_scan(HH), unit_solve(HH), products(HH)]
    print(f"{'workload':<52} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for name, run in workloads:
        with _kernels.use_backend("numba"):
            run()
            t_nb, out_nb = best_of(run, args.repeat)
        with _kernels.use_backend("numpy"):
            t_np, out_np = best_of(run, args.repeat)
        if not same(out_nb, out_np):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<52} {t_nb:>9.4f} {t_np:>9.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
