"""Reducing every relation to arity at most one by pair encoding."""
from __future__ import annotations

from typing import Iterable, Optional

from ..errors import ArityError, OutputArityError
from ..program import Literal, Predicate, Program, Rule
from .common import sinks

A0 = "a0"
B0 = "b0"


def encode_pair(e1: tuple, e2: tuple) -> tuple:
    """``e1 a0 e2 a0 e1 b0 e2``; injective on pairs of paths."""
    return e1 + (A0,) + e2 + (A0,) + e1 + (B0,) + e2


def encode_args(args: tuple) -> tuple:
    """Fold the last two arguments together until one is left."""
    args = list(args)
    while len(args) > 1:
        last = args.pop()
        args[-1] = encode_pair(args[-1], last)
    return tuple(args)


def eliminate_arity(p: Program, out: Optional[Iterable[str]] = None) -> Program:
    """Equivalent program without predicates of arity above one.

    ``out`` names the output relations (default: IDB relations no rule
    calls); they must already be at most unary.  Input relations of higher
    arity cannot be re-encoded without touching the data and are refused.
    """
    arities = p.arities()
    outs = set(out) if out is not None else sinks(p)
    for s in outs:
        if arities.get(s, 0) > 1:
            raise OutputArityError(f"output relation {s} has arity {arities[s]}")
    wide_edb = sorted(n for n in p.edb() if arities[n] > 1)
    if wide_edb:
        raise ArityError(f"input relations of arity > 1 cannot be encoded: {', '.join(wide_edb)}")

    def enc(q: Predicate) -> Predicate:
        return Predicate(q.relation, encode_args(q.args)) if q.arity > 1 else q

    def rule(r: Rule) -> Rule:
        body = tuple(Literal(enc(l.atom), l.negated) if l.is_predicate else l for l in r.body)
        return Rule(enc(r.head), body)

    return Program(tuple(tuple(rule(r) for r in s) for s in p.strata))
