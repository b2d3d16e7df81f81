"""Command-line entry point: ``hopfcoh <command> [spec] [options]``.

Exit codes: 0 verified, 1 verification mismatch, 2 usage or parse error,
3 enumeration over budget.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config
from .algebra import Element
from .cohomology import AlgebraDiagram, verify_exact_sequence
from .config import EnumerationOverBudget
from .exactmath import DimensionMismatch, Singular, Unsolvable
from .groupcoh import compare_group_cohomology
from .io import AxiomError, ParseError, format_report, input_hash, load_matrix, load_spec, spec_report
from .precosimplicial import key
from .restricted import ConditionFFailed, compare_restricted
from .torsor import classify_torsors, group_torsor_bridge

OK, MISMATCH, USAGE, OVER_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _labelled(parent, rows) -> list[dict]:
    return [{"coords": list(key(r)), "element": repr(Element(parent, np.asarray(r, dtype=np.int64)))} for r in rows]


def _comodule(spec):
    if spec.comodule is None:
        raise UsageError("this command needs a spec with a comodule block")
    return spec.comodule


def cmd_check(args, spec):
    report = spec_report(spec)
    return report.to_dict(), report.ok


def cmd_h0(args, spec):
    E = _comodule(spec)
    res = AlgebraDiagram(E).h0_elements()
    return {"comodule": E.name, "size": len(res), "elements": _labelled(E.alg, res)}, True


def cmd_z1(args, spec):
    E = _comodule(spec)
    rows = AlgebraDiagram(E).z1_elements()
    return {"comodule": E.name, "size": len(rows), "cocycles": _labelled(E.level1, rows)}, True


def cmd_h1(args, spec):
    E = _comodule(spec)
    res = AlgebraDiagram(E).cohomology()
    classes = []
    for orb in res.orbits:
        entry = {"representative": _labelled(E.level1, [orb.representative])[0], "size": len(orb)}
        if args.witnesses:
            entry["members"] = [
                {"cocycle": list(m), "acted_on_by": list(key(res.units[orb.witnesses[m]]))} for m in orb.members
            ]
        classes.append(entry)
    return {"comodule": E.name, "z1": int(res.z1.shape[0]), "classes": classes, "h1": len(classes)}, True


def cmd_torsors(args, spec):
    cls = classify_torsors(_comodule(spec))
    return cls.to_dict(), cls.checks.ok


def cmd_compare_group(args, spec):
    report = compare_group_cohomology(_comodule(spec))
    return report.to_dict(), report.ok


def cmd_compare_restricted(args, spec):
    if spec.module is None:
        raise UsageError("compare-restricted needs a spec with a module block")
    comp = compare_restricted(spec.module)
    return comp.to_dict(), comp.ok


def cmd_bridge(args, spec):
    b = group_torsor_bridge(_comodule(spec))
    out = {"hopf_classes": b.hopf_classes, "group_classes": b.group_classes, "images": b.images,
           "checks": b.checks.to_dict()}
    return out, b.ok


def cmd_exact_seq(args, spec):
    other = load_spec(args.spec_e)
    if args.incl is None:
        raise UsageError("exact-seq needs --incl")
    incl = spec.field.array(load_matrix(args.incl))
    rep = verify_exact_sequence(_comodule(spec), _comodule(other), incl)
    out = {
        "sizes": rep.sizes,
        "nodes": [{"name": n.name, "ok": n.ok, "image": [list(map(int, np.atleast_1d(x))) for x in n.image],
                   "kernel": [list(map(int, np.atleast_1d(x))) for x in n.kernel]} for n in rep.nodes],
        "normal": rep.normal,
        "normality_note": rep.normality_note,
        "six_term": rep.six_term,
    }
    return out, rep.ok


def cmd_examples(args, spec):
    from .worked_examples import render_table, run_examples

    rows = run_examples()
    if args.format == "text":
        return render_table(rows, timing=args.timing), all(r.ok for r in rows)
    return {"rows": [r.to_dict(args.timing) for r in rows]}, all(r.ok for r in rows)


COMMANDS = {
    "check": (cmd_check, "run every axiom suite on the spec"),
    "h0": (cmd_h0, "degree-0 cohomology: units of the coinvariants"),
    "z1": (cmd_z1, "all normalised 1-cocycles"),
    "h1": (cmd_h1, "degree-1 cohomology classes"),
    "torsors": (cmd_torsors, "classify Hopf torsors"),
    "compare-group": (cmd_compare_group, "compare with group cohomology over k^G"),
    "compare-restricted": (cmd_compare_restricted, "compare the module-side cohomology with End_S(M)"),
    "exact-seq": (cmd_exact_seq, "exactness of the sequence for an inclusion D -> E"),
    "bridge-torsors": (cmd_bridge, "match Hopf torsors with group torsors"),
    "paper-examples": (cmd_examples, "run every worked example and print expected against computed"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting flags given before it
    hide = argparse.SUPPRESS
    common.add_argument("--budget", type=int, default=hide, help="enumeration cap (default 10^7 or HOPFCOH_BUDGET)")
    common.add_argument("--format", choices=["json", "text"], default=hide)
    common.add_argument("--out", type=Path, default=hide, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=hide)
    common.add_argument("--timing", action="store_true", default=hide, help="include wall-clock times")
    parser = argparse.ArgumentParser(prog="hopfcoh", description=__doc__.splitlines()[0], parents=[common])
    parser.set_defaults(budget=None, format="json", out=None, threads=1, timing=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        if name == "paper-examples":
            continue
        p.add_argument("spec", type=Path)
        if name == "exact-seq":
            p.add_argument("spec_e", type=Path)
            p.add_argument("--incl", type=Path, default=None)
        if name == "h1":
            p.add_argument("--witnesses", action="store_true")
    return parser


def run(args) -> tuple[object, int]:
    handler = COMMANDS[args.command][0]
    spec = None
    echo = [args.command]
    hashes = {}
    if getattr(args, "spec", None) is not None:
        spec = load_spec(args.spec, check=args.command != "check")
        echo.append(args.spec.name)
        hashes[args.spec.name] = input_hash(args.spec)
    if getattr(args, "spec_e", None) is not None:
        echo.append(args.spec_e.name)
        hashes[args.spec_e.name] = input_hash(args.spec_e)
    if getattr(args, "witnesses", False):
        echo.append("--witnesses")
    result, ok = handler(args, spec)
    if isinstance(result, str):
        return result, OK if ok else MISMATCH
    report = {"command": echo, "result": result, "verified": bool(ok)}
    if hashes:
        report["input_hash"] = hashes
    return report, OK if ok else MISMATCH


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.threads < 1:
        print("hopfcoh: --threads must be positive", file=sys.stderr)
        return USAGE
    try:
        config.set_budget(args.budget)
        config.set_threads(args.threads)
        report, code = run(args)
    except EnumerationOverBudget as exc:
        print(f"hopfcoh: over budget: {exc}", file=sys.stderr)
        return OVER_BUDGET
    except (ParseError, AxiomError, DimensionMismatch, UsageError, OSError) as exc:
        print(f"hopfcoh: {exc}", file=sys.stderr)
        return USAGE
    except (Singular, Unsolvable, ConditionFFailed) as exc:
        print(f"hopfcoh: {exc}", file=sys.stderr)
        return MISMATCH
    finally:
        config.set_budget(None)
        config.set_threads(1)
    text = report if isinstance(report, str) else format_report(report, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
