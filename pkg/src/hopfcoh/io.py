"""Structure-constant files and report serialization.

A spec file is JSON with a ``field`` block and an ``algebra`` block, plus
optional ``hopf``, ``comodule`` and ``module`` blocks.  Prime-field scalars are
integers in ``[0, p)``; rational scalars are strings ``"a/b"`` (or ``"a"``).
Matrices are row-major nested arrays.  ``serialize`` writes one canonical text
for each structure, so ``parse_spec(serialize(x))`` reproduces ``x`` and
``serialize(parse_spec(text))`` reproduces a canonical ``text`` byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import AxiomReport, StructureAlgebra, check_algebra_axioms
from .comodule import ComoduleAlgebra, HopfModule, check_all, check_hopf_module
from .exactmath import DimensionMismatch, Field
from .hopf import HopfAlgebra, check_hopf_axioms


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class DimensionError(DimensionMismatch):
    pass


class AxiomError(ValueError):
    def __init__(self, name: str, witness=None):
        super().__init__(f"axiom {name!r} fails" + ("" if witness is None else f" at {witness}"))
        self.name = name
        self.witness = witness


@dataclass
class SpecFile:
    field: Field
    algebra: StructureAlgebra
    hopf: HopfAlgebra | None = None
    comodule: ComoduleAlgebra | None = None
    module: HopfModule | None = None
    name: str = ""

    @property
    def target(self):
        """The richest structure the file describes."""
        return self.module or self.comodule or self.hopf or self.algebra

    def __eq__(self, other):
        return (
            isinstance(other, SpecFile)
            and self.name == other.name
            and self.field == other.field
            and self.algebra == other.algebra
            and self.hopf == other.hopf
            and self.comodule == other.comodule
            and _modules_equal(self.module, other.module)
        )


def _modules_equal(a: HopfModule | None, b: HopfModule | None) -> bool:
    if a is None or b is None:
        return a is b
    return (
        a.comod == b.comod
        and a.labels == b.labels
        and np.array_equal(a.action, b.action)
        and np.array_equal(a.coaction, b.coaction)
    )


# -- reading ------------------------------------------------------------------


class _Reader:
    def __init__(self, text: str, base: Path | None):
        self.text = text
        self.base = base

    def where(self, name: str) -> tuple[int, int]:
        pos = self.text.find(f'"{name}"')
        if pos < 0:
            return 1, 1
        line = self.text.count("\n", 0, pos) + 1
        return line, pos - (self.text.rfind("\n", 0, pos) + 1) + 1

    def fail(self, name: str, message: str):
        raise ParseError(message, *self.where(name))

    def block(self, obj: dict, name: str, required: bool = True):
        if not isinstance(obj, dict):
            self.fail(name, "expected an object")
        if name not in obj:
            if required:
                self.fail(name, f"missing block {name!r}")
            return None
        return obj[name]

    def field(self, obj) -> Field:
        kind = self.block(obj, "type")
        if kind == "prime":
            p = self.block(obj, "p")
            if not isinstance(p, int) or isinstance(p, bool):
                self.fail("p", "p must be an integer")
            try:
                return Field.prime(p)
            except ValueError as exc:
                self.fail("p", str(exc))
        if kind == "rational":
            return Field.rational()
        self.fail("type", f"unknown field type {kind!r}")

    def scalar(self, f: Field, value, where: str):
        if f.is_prime:
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < f.p:
                self.fail(where, f"{value!r} is not a residue in [0, {f.p})")
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError):
                pass
        self.fail(where, f"{value!r} is not a rational scalar")

    def tensor(self, f: Field, value, shape: tuple[int, ...], where: str) -> np.ndarray:
        def walk(v, depth):
            if depth == len(shape):
                return self.scalar(f, v, where)
            if not isinstance(v, list):
                raise DimensionError(f"{where}: expected nesting depth {len(shape)}")
            if len(v) != shape[depth]:
                raise DimensionError(f"{where}: expected {shape[depth]} entries at depth {depth}, got {len(v)}")
            return [walk(x, depth + 1) for x in v]

        return f.array(walk(value, 0)).reshape(shape)

    def algebra(self, f: Field, obj, name: str) -> StructureAlgebra:
        dim = self.block(obj, "dim")
        if not isinstance(dim, int) or dim < 1:
            self.fail("dim", "dim must be a positive integer")
        labels = self.block(obj, "basis", required=False)
        if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
            raise DimensionError(f"basis of {name} needs {dim} labels")
        unit = self.tensor(f, self.block(obj, "unit"), (dim,), "unit")
        mult = self.tensor(f, self.block(obj, "mult"), (dim, dim, dim), "mult")
        return StructureAlgebra(f, mult, unit, labels, name=obj.get("name", name))

    def hopf(self, A: StructureAlgebra, obj) -> HopfAlgebra:
        f, n = A.field, A.dim
        return HopfAlgebra(
            A,
            self.tensor(f, self.block(obj, "comult"), (n * n, n), "comult"),
            self.tensor(f, self.block(obj, "counit"), (1, n), "counit"),
            self.tensor(f, self.block(obj, "antipode"), (n, n), "antipode"),
        )

    def hopf_reference(self, f: Field, ref) -> HopfAlgebra:
        if isinstance(ref, str):
            path = Path(ref) if self.base is None else self.base / ref
            inner = load_spec(path)
            if inner.hopf is None:
                self.fail("hopf", f"{ref} has no hopf block")
            if inner.field != f:
                self.fail("hopf", f"{ref} is over {inner.field}, not {f}")
            return inner.hopf
        A = self.algebra(f, self.block(ref, "algebra"), "H")
        return self.hopf(A, self.block(ref, "hopf"))


def parse_spec(text: str, base: Path | None = None, check: bool = True) -> SpecFile:
    """Parse spec text; with ``check`` every structure must pass its axiom suite."""
    if not text.strip():
        raise ParseError("empty input", 1, 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    r = _Reader(text, base)
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, 1)
    f = r.field(r.block(data, "field"))
    name = data.get("name", "")
    A = r.algebra(f, r.block(data, "algebra"), name or "A")
    spec = SpecFile(f, A, name=name)
    hop = r.block(data, "hopf", required=False)
    if hop is not None:
        spec.hopf = r.hopf(A, hop)
    com = r.block(data, "comodule", required=False)
    if com is not None:
        H = r.hopf_reference(f, r.block(com, "hopf"))
        coaction = r.tensor(f, r.block(com, "coaction"), (A.dim * H.dim, A.dim), "coaction")
        spec.comodule = ComoduleAlgebra(H, A, coaction, name=com.get("name"))
    mod = r.block(data, "module", required=False)
    if mod is not None:
        if spec.comodule is None:
            r.fail("module", "a module block needs a comodule block")
        E = spec.comodule
        dim = r.block(mod, "dim")
        if not isinstance(dim, int) or dim < 1:
            r.fail("dim", "module dim must be a positive integer")
        action = r.tensor(f, r.block(mod, "action"), (A.dim, dim, dim), "action")
        coaction = r.tensor(f, r.block(mod, "coaction"), (dim * E.hopf.dim, dim), "coaction")
        spec.module = HopfModule(E, action, coaction, mod.get("basis"), name=mod.get("name", "M"))
    if check:
        verify_spec(spec)
    return spec


def load_spec(path, check: bool = True) -> SpecFile:
    path = Path(path)
    return parse_spec(path.read_text(), base=path.parent, check=check)


def verify_spec(spec: SpecFile) -> AxiomReport:
    """Run every applicable axiom suite; raise AxiomError on the first failure."""
    report = spec_report(spec)
    if not report.ok:
        name, witness = report.failures[0]
        raise AxiomError(name, witness)
    return report


def spec_report(spec: SpecFile) -> AxiomReport:
    report = AxiomReport(spec.name or spec.algebra.name)
    report.extend(check_algebra_axioms(spec.algebra), "algebra: ")
    if spec.hopf is not None:
        report.extend(check_hopf_axioms(spec.hopf), "hopf: ")
    if spec.comodule is not None:
        report.extend(check_all(spec.comodule), "comodule: ")
    if spec.module is not None:
        report.extend(check_hopf_module(spec.module), "module: ")
    return report


def load_matrix(path) -> np.ndarray:
    """A bare nested array, or an object with a ``matrix`` entry, as an integer array."""
    text = Path(path).read_text()
    if not text.strip():
        raise ParseError("empty input", 1, 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(data, dict):
        data = data.get("matrix")
    arr = np.asarray(data, dtype=object)
    if arr.ndim != 2:
        raise DimensionError("inclusion must be a matrix")
    return arr


# -- writing -------------------------------------------------------------------


def _scalar_out(f: Field, v):
    return int(v) if f.is_prime else str(Fraction(v))


def _nested(f: Field, arr: np.ndarray):
    arr = np.asarray(arr, dtype=f.dtype)
    if arr.ndim == 0:
        return _scalar_out(f, arr[()])
    return [_nested(f, a) for a in arr]


def algebra_block(A: StructureAlgebra) -> dict:
    f = A.field
    return {
        "name": A.name,
        "dim": A.dim,
        "basis": list(A.labels),
        "unit": _nested(f, A.unit),
        "mult": _nested(f, A.mult),
    }


def hopf_block(H: HopfAlgebra) -> dict:
    f = H.field
    return {
        "comult": _nested(f, H.comult),
        "counit": _nested(f, H.counit),
        "antipode": _nested(f, H.antipode),
    }


def field_block(f: Field) -> dict:
    return {"type": "prime", "p": f.p} if f.is_prime else {"type": "rational"}


def spec_to_dict(spec: SpecFile) -> dict:
    out = {"name": spec.name, "field": field_block(spec.field), "algebra": algebra_block(spec.algebra)}
    if spec.hopf is not None:
        out["hopf"] = hopf_block(spec.hopf)
    if spec.comodule is not None:
        E = spec.comodule
        out["comodule"] = {
            "name": E.name,
            "hopf": {"algebra": algebra_block(E.hopf.alg), "hopf": hopf_block(E.hopf)},
            "coaction": _nested(spec.field, E.coaction),
        }
    if spec.module is not None:
        M = spec.module
        out["module"] = {
            "name": M.name,
            "dim": M.dim,
            "basis": list(M.labels),
            "action": _nested(spec.field, M.action),
            "coaction": _nested(spec.field, M.coaction),
        }
    return out


def spec_from(obj, name: str = "") -> SpecFile:
    """Wrap a structure (algebra, Hopf algebra, comodule algebra or Hopf module) as a SpecFile."""
    if isinstance(obj, HopfModule):
        spec = spec_from(obj.comod, name)
        spec.module = obj
        return spec
    if isinstance(obj, ComoduleAlgebra):
        return SpecFile(obj.field, obj.alg, comodule=obj, name=name)
    if isinstance(obj, HopfAlgebra):
        return SpecFile(obj.field, obj.alg, hopf=obj, name=name)
    if isinstance(obj, StructureAlgebra):
        return SpecFile(obj.field, obj, name=name)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data, indent: int = 0) -> str:
    """JSON with objects one key per line and innermost arrays on a single line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in data.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(data, list):
        if not any(isinstance(v, (list, dict)) for v in data):
            return json.dumps(data, ensure_ascii=False)
        items = [inner + dumps(v, indent + 1) for v in data]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(data, ensure_ascii=False)


def serialize(spec: SpecFile) -> str:
    return dumps(spec_to_dict(spec)) + "\n"


def input_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _text_lines(data, prefix: str = "") -> list[str]:
    if isinstance(data, dict):
        lines = []
        for k in sorted(data):
            lines.extend(_text_lines(data[k], f"{prefix}.{k}" if prefix else str(k)))
        return lines
    if isinstance(data, list) and any(isinstance(v, (list, dict)) for v in data):
        lines = []
        for i, v in enumerate(data):
            lines.extend(_text_lines(v, f"{prefix}[{i}]"))
        return lines
    return [f"{prefix}: {json.dumps(data, ensure_ascii=False)}"]


def format_report(report: dict, fmt: str = "json") -> str:
    """Deterministic rendering: sorted keys, no timestamps unless the caller put them in."""
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return "\n".join(_text_lines(report)) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_report(report: dict, path=None, fmt: str = "json") -> str:
    text = format_report(report, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text


__all__ = [
    "AxiomError",
    "DimensionError",
    "ParseError",
    "SpecFile",
    "dumps",
    "format_report",
    "input_hash",
    "load_matrix",
    "load_spec",
    "parse_spec",
    "serialize",
    "spec_from",
    "spec_report",
    "spec_to_dict",
    "verify_spec",
    "write_report",
]
