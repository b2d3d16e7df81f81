import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfcoh.algebra import StructureAlgebra
from hopfcoh.comodule import regular_module
from hopfcoh.exactmath import Field, matrix_inverse
from hopfcoh.hopf import HopfAlgebra, build_sweedler_h4, check_hopf_axioms
from hopfcoh.io import (
    AxiomError,
    DimensionError,
    ParseError,
    format_report,
    load_matrix,
    load_spec,
    parse_spec,
    serialize,
    spec_from,
)
from hopfcoh.worked_examples import all_builders

SPECS = Path(__file__).resolve().parent.parent / "specs"


def rebased(H: HopfAlgebra, P: np.ndarray) -> HopfAlgebra:
    """The same Hopf algebra written in the basis given by the columns of ``P``."""
    f = H.field
    Q = matrix_inverse(P, f)
    mult = np.einsum("ai,bj,abc,kc->ijk", P, P, H.alg.mult, Q) % f.p
    unit = Q @ H.alg.unit % f.p
    A = StructureAlgebra(f, mult, unit, [f"b{i}" for i in range(H.dim)], name="H'")
    comult = np.kron(Q, Q) @ H.comult @ P % f.p
    return HopfAlgebra(A, comult, H.counit @ P % f.p, Q @ H.antipode @ P % f.p)


invertible = st.lists(st.integers(0, 2), min_size=16, max_size=16).map(
    lambda v: np.array(v, dtype=np.int64).reshape(4, 4)
).filter(lambda m: round(np.linalg.det(m)) % 3 != 0)


@given(invertible)
def test_round_trip_random_basis(P):
    H = rebased(build_sweedler_h4(Field.prime(3)), P)
    assert check_hopf_axioms(H).ok
    spec = spec_from(H, name="rebased")
    text = serialize(spec)
    back = parse_spec(text)
    assert back == spec
    assert serialize(back) == text


@pytest.mark.parametrize("p", [3, 5])
def test_round_trip_builders(p):
    for E in all_builders(p):
        for obj in (E, E.hopf, E.alg, regular_module(E)):
            spec = spec_from(obj, name="x")
            text = serialize(spec)
            assert parse_spec(text) == spec
            assert serialize(parse_spec(text)) == text


@pytest.mark.parametrize("path", sorted(SPECS.glob("*.spec")), ids=lambda p: p.name)
def test_shipped_specs_load(path):
    spec = load_spec(path)
    assert spec.target is not None


def test_h4_spec_equals_builder():
    spec = load_spec(SPECS / "h4_f3.spec")
    assert check_hopf_axioms(spec.hopf).ok
    assert spec.hopf == build_sweedler_h4(Field.prime(3))


def test_empty_file():
    with pytest.raises(ParseError):
        parse_spec("   \n")


def test_bad_json_location():
    with pytest.raises(ParseError) as err:
        parse_spec('{\n  "field": {"type": "prime", "p": 3},\n  "algebra": [,]\n}')
    assert err.value.line == 3


def test_wrong_mult_arity():
    data = json.loads((SPECS / "h4_f3.spec").read_text())
    data["algebra"]["mult"] = data["algebra"]["mult"][:3]
    with pytest.raises(DimensionError):
        parse_spec(json.dumps(data))


def test_residue_out_of_range_points_at_block():
    text = (SPECS / "e2_over_h4_f3.spec").read_text().replace('"unit": [1, 0]', '"unit": [7, 0]', 1)
    with pytest.raises(ParseError) as err:
        parse_spec(text)
    line = next(i for i, ln in enumerate(text.splitlines(), 1) if '"unit"' in ln)
    assert err.value.line == line


def test_failing_axiom_raises():
    data = json.loads((SPECS / "h4_f3.spec").read_text())
    data["hopf"]["antipode"] = np.eye(4, dtype=int).tolist()
    with pytest.raises(AxiomError) as err:
        parse_spec(json.dumps(data))
    assert "antipode" in err.value.name
    assert parse_spec(json.dumps(data), check=False).hopf is not None


def test_rational_scalars():
    # Q[x]/(x^2 - 1/2)
    text = json.dumps({
        "name": "sqrt half",
        "field": {"type": "rational"},
        "algebra": {"dim": 2, "unit": [1, 0],
                    "mult": [[[1, 0], [0, 1]], [[0, 1], ["1/2", 0]]]},
    })
    spec = parse_spec(text)
    assert spec.algebra.mult[1, 1, 0] == Fraction(1, 2)
    assert parse_spec(serialize(spec)) == spec


def test_bad_rational():
    text = json.dumps({"field": {"type": "rational"},
                       "algebra": {"dim": 1, "unit": ["one"], "mult": [[[1]]]}})
    with pytest.raises(ParseError):
        parse_spec(text)


def test_load_matrix_forms(tmp_path):
    (tmp_path / "bare.json").write_text("[[1], [0]]")
    assert load_matrix(tmp_path / "bare.json").tolist() == [[1], [0]]
    assert load_matrix(SPECS / "incl_k_e2.json").tolist() == [[1], [0]]
    (tmp_path / "flat.json").write_text("[1, 0]")
    with pytest.raises(DimensionError):
        load_matrix(tmp_path / "flat.json")


def test_report_formats():
    report = {"b": [1, 2], "a": {"y": True, "x": [[1, 0], [0, 1]]}}
    assert format_report(report) == json.dumps(report, sort_keys=True, indent=2) + "\n"
    assert format_report(report, "text").splitlines() == [
        "a.x[0]: [1, 0]", "a.x[1]: [0, 1]", "a.y: true", "b: [1, 2]"]
