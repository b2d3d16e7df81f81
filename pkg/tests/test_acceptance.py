"""End-to-end criteria, one PASS/FAIL line each, with their time limits."""

import time

import pytest

from hopfcoh.cohomology import h0, h1
from hopfcoh.comodule import over_trivial_hopf, self_comodule, trivial_coefficients
from hopfcoh.io import format_report
from hopfcoh.precosimplicial import key
from hopfcoh.worked_examples import (
    bridge_suite,
    cosimplicial_suite,
    deformation_suite,
    dual_number_suite,
    exact_sequence_suite,
    group_comparison_suite,
    restricted_suite,
    run_suites,
    torsor_suite,
)


def report(capsys, number, ok, seconds, limit, detail=""):
    within = limit is None or seconds <= limit
    status = "PASS" if ok and within else "FAIL"
    bound = "" if limit is None else f" (limit {limit:g} s)"
    with capsys.disabled():
        print(f"\n[criterion {number:>2}] {status}  {seconds:.2f} s{bound}  {detail}")
    assert ok, detail
    assert within, f"took {seconds:.2f} s, limit {limit} s"


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_01_basic_examples(capsys, E2, H4):
    cases = [
        ("(k, E2)", over_trivial_hopf(E2.alg),
         {(a, b) for a in (1, 2) for b in range(3)}, [(1, 0)]),
        ("(H4, k)", trivial_coefficients(H4), {(1,), (2,)}, [(1, 0, 0, 0), (0, 1, 0, 0)]),
        ("(H4, H4)", self_comodule(H4), {(1, 0, 0, 0), (2, 0, 0, 0)}, [(1,) + (0,) * 15]),
    ]
    ok, slowest, parts = True, 0.0, []
    for name, E, want_h0, members in cases:
        (zero, one), seconds = timed(lambda: (h0(E), h1(E)))
        got_h0 = {key(r) for r in zero.rows}
        # one known member per class, in class order
        classes_ok = len(one.orbits) == len(members) and all(
            m in orb.witnesses for m, orb in zip(members, one.orbits))
        ok = ok and got_h0 == want_h0 and classes_ok and seconds <= 1.0
        slowest = max(slowest, seconds)
        parts.append(f"{name}: |H0|={len(got_h0)} |H1|={len(one.orbits)}")
    report(capsys, 1, ok, slowest, 1.0, "; ".join(parts))


def run_suite(capsys, number, suite, limit):
    row, seconds = timed(suite)
    report(capsys, number, row.ok and row.criterion == number, seconds, limit, f"{row.name}: {row.computed}")
    return row


def test_criterion_02_dual_numbers(capsys):
    row = run_suite(capsys, 2, dual_number_suite, 5.0)
    assert row.computed["F3"]["Z1"] == 6 and row.computed["F5"]["Z1"] == 10


def test_criterion_03_group_comparison(capsys):
    row = run_suite(capsys, 3, group_comparison_suite, 60.0)
    assert row.computed["k over k^Z2"]["H1"] == [2, 2]


def test_criterion_04_cosimplicial(capsys):
    row = run_suite(capsys, 4, cosimplicial_suite, 1.0)
    assert row.computed["failures"] == []


def test_criterion_05_deformations(capsys):
    # every invertible normalised candidate: the slice has 3^6 points, 486 of them units
    row = run_suite(capsys, 5, deformation_suite, 10.0)
    assert row.computed["candidates"] == 486
    assert row.computed["cocycles"] == 6


def test_criterion_06_restricted(capsys):
    row = run_suite(capsys, 6, restricted_suite, 60.0)
    assert row.computed["H1"] == row.computed["general H1"] == 2


def test_criterion_07_torsors(capsys):
    row = run_suite(capsys, 7, torsor_suite, 10.0)
    assert row.computed["classes"] == 2


def test_criterion_08_exact_sequence(capsys):
    row = run_suite(capsys, 8, exact_sequence_suite, 30.0)
    assert row.computed["k -> k^Z2 over k^Z2"]["six term"] is True


def test_criterion_09_bridge(capsys):
    row = run_suite(capsys, 9, bridge_suite, 30.0)
    assert row.computed["hopf classes"] == row.computed["group classes"] == 2


@pytest.mark.parametrize("threads", [(1, 2, 8)])
def test_criterion_10_determinism(capsys, threads):
    start = time.perf_counter()
    renders = {n: format_report({"rows": [r.to_dict() for r in run_suites(n)]}) for n in threads}
    seconds = time.perf_counter() - start
    same = len(set(renders.values())) == 1
    report(capsys, 10, same, seconds, None, f"threads {list(threads)}: {len(renders[threads[0]])} bytes each")
