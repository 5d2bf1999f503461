"""Command-line interface: ``seqlog <command> ...``.

Exit codes: 0 success, 1 usage or static error, 2 resource exhaustion.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from typing import List, Optional

from .analysis import check_program, detect_features, format_features, fragment_subsumes, parse_features
from .core import Instance
from .engine import Budget, eval_program, query
from .errors import ResourceError, SeqlogError
from .gen import random_flat_instance
from .syntax import parse_equation, parse_instance, parse_program, print_instance, print_program
from .transform import (
    TransformReport,
    eliminate_arity,
    eliminate_equations,
    eliminate_packing_nonrecursive,
    fold_intermediates,
    normalize,
)
from .transform.common import sinks
from .unify import Budget as UnifyBudget
from .unify import Search, solve


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _program(path: str):
    p = parse_program(_read(path), allow_reserved=True)
    check_program(p)
    return p


def _out(text: str):
    sys.stdout.write(text)


def _budget(a) -> Budget:
    return Budget(a.max_facts, a.max_path_len, a.max_iter)


def cmd_run(a) -> int:
    p = _program(a.program)
    i = parse_instance(_read(a.data))
    res = eval_program(p, i, _budget(a), seminaive=not a.naive).instance
    names = [a.out] if a.out else sorted(p.idb())
    _out(print_instance(res.restrict(names)))
    return 0


_ELIM = {
    "arity": lambda p, out: eliminate_arity(p, out),
    "equations": lambda p, out: eliminate_equations(p),
    "packing": lambda p, out: eliminate_packing_nonrecursive(p, out),
    "intermediates": lambda p, out: fold_intermediates(p, out[0] if out else None),
    "normalize": lambda p, out: normalize(p),
}


def _check_equivalence(p, q, outs, n: int, seed: int) -> Optional[str]:
    arities = p.arities()
    schema = {r: arities[r] for r in p.edb()}
    rng = random.Random(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for k in range(n):
            i = random_flat_instance(rng, schema, max_facts=8, max_len=5)
            for s in outs:
                if query(p, i, s) != query(q, i, s):
                    return f"instance {k} differs on {s}: {i.facts()}"
    return None


def _transform(a, kind: str) -> int:
    p = _program(a.input)
    outs = [a.out_rel] if a.out_rel else None
    q = _ELIM[kind](p, outs)
    check_program(q)
    _out(print_program(q))
    report = TransformReport.of(p, q)
    if a.check:
        bad = _check_equivalence(p, q, outs or sorted(sinks(p)), a.check, a.seed)
        report.notes.append(f"equivalence on {a.check} random instances: " + ("ok" if bad is None else bad))
    if a.json:
        sys.stderr.write(json.dumps({
            "transform": kind,
            "input_features": sorted(report.input_features),
            "output_features": sorted(report.output_features),
            "fresh_names": report.fresh_names,
            "notes": report.notes,
        }) + "\n")
    else:
        sys.stderr.write(f"features before: {format_features(report.input_features) or '-'}\n")
        sys.stderr.write(f"features after:  {format_features(report.output_features) or '-'}\n")
        for note in report.notes:
            sys.stderr.write(note + "\n")
    return 0


def cmd_transform(a) -> int:
    return _transform(a, a.elim)


def cmd_normalize(a) -> int:
    return _transform(a, "normalize")


def cmd_features(a) -> int:
    f = detect_features(_program(a.input))
    if a.json:
        _out(json.dumps({"features": sorted(f)}) + "\n")
    else:
        _out(format_features(f) + "\n")
    return 0


def cmd_subsumes(a) -> int:
    try:
        f1, f2 = parse_features(a.f1), parse_features(a.f2)
    except ValueError as e:
        raise UsageError(str(e)) from None
    r = fragment_subsumes(f1, f2)
    _out((json.dumps({"subsumes": r}) if a.json else ("yes" if r else "no")) + "\n")
    return 0


def cmd_unify(a) -> int:
    eq = parse_equation(a.equation)
    search = Search(UnifyBudget(max_nodes=a.max_nodes))
    sols = solve(eq, search.budget, search, allow_empty=not a.nonempty)
    if a.dot:
        _out(search.to_dot())
        return 0
    for s in sols:
        _out((json.dumps({v.__str__(): str(e) for v, e in s.items}) if a.json else str(s)) + "\n")
    return 0


def cmd_compile_ra(a) -> int:
    from .sra import compile_program, format_plan

    _out(format_plan(compile_program(_program(a.program), a.rel)) + "\n")
    return 0


def cmd_eval_ra(a) -> int:
    from .sra import eval_expr, parse_plan
    from .syntax import print_facts

    e = parse_plan(_read(a.plan))
    rel = eval_expr(e, parse_instance(_read(a.data)))
    _out(print_facts(a.name, rel))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="seqlog", description="Sequence Datalog toolkit")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    ap.add_argument("--json", action="store_true", help="structured reports")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="evaluate a program on an instance")
    r.add_argument("--program", required=True)
    r.add_argument("--data", required=True)
    r.add_argument("--out", help="relation to print (default: all derived relations)")
    r.add_argument("--max-facts", type=int, default=Budget.max_derived_facts)
    r.add_argument("--max-path-len", type=int, default=Budget.max_path_len)
    r.add_argument("--max-iter", type=int, default=Budget.max_iterations)
    r.add_argument("--naive", action="store_true", help="naive instead of semi-naive iteration")
    r.set_defaults(func=cmd_run)

    for name, helptext in (("transform", "remove a feature"), ("normalize", "six-form normal form")):
        t = sub.add_parser(name, help=helptext)
        if name == "transform":
            t.add_argument("--elim", required=True, choices=["arity", "equations", "packing", "intermediates"])
        t.add_argument("--out-rel", help="designated output relation")
        t.add_argument("--check", type=int, default=0, metavar="N",
                       help="compare input and output on N random flat instances")
        t.add_argument("input")
        t.set_defaults(func=cmd_transform if name == "transform" else cmd_normalize)

    f = sub.add_parser("features", help="features used by a program")
    f.add_argument("input")
    f.set_defaults(func=cmd_features)

    s = sub.add_parser("subsumes", help="whether fragment F1 is subsumed by F2")
    s.add_argument("f1")
    s.add_argument("f2")
    s.set_defaults(func=cmd_subsumes)

    u = sub.add_parser("unify", help="complete set of solutions of a path equation")
    u.add_argument("equation")
    u.add_argument("--nonempty", action="store_true", help="only solutions with nonempty path variables")
    u.add_argument("--max-nodes", type=int, default=100_000)
    u.add_argument("--dot", action="store_true", help="print the search graph in DOT")
    u.set_defaults(func=cmd_unify)

    c = sub.add_parser("compile-ra", help="compile a relation to an algebra plan")
    c.add_argument("--program", required=True)
    c.add_argument("--rel", required=True)
    c.set_defaults(func=cmd_compile_ra)

    e = sub.add_parser("eval-ra", help="evaluate an algebra plan")
    e.add_argument("--plan", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--name", default="Out", help="relation name used when printing")
    e.set_defaults(func=cmd_eval_ra)
    return ap


def _error(a_json: bool, kind: str, msg: str):
    if a_json:
        sys.stderr.write(json.dumps({"error": kind, "message": msg}) + "\n")
    else:
        sys.stderr.write(f"error: {kind}: {msg}\n")


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    as_json = "--json" in argv
    try:
        a = build_parser().parse_args(argv)
        return a.func(a)
    except UsageError as e:
        _error(as_json, "usage", str(e))
        return 1
    except ResourceError as e:
        _error(as_json, type(e).__name__, str(e))
        return 2
    except SeqlogError as e:
        _error(as_json, type(e).__name__, str(e))
        return 1
    except ValueError as e:
        _error(as_json, "ValueError", str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
