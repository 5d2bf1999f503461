"""Unfolding intermediate predicates into a single-IDB program."""
from __future__ import annotations

from itertools import product
from typing import Dict, Iterable, List, Optional

from ..analysis import is_recursive, topological_order
from ..core import Var
from ..errors import NegationPresent, RecursionPresent, UnknownRelation
from ..program import Equation, Literal, Predicate, Program, Rule, pos
from .common import Fresh, sinks, subst_rule


def _rename_apart(r: Rule, fresh: Fresh) -> Rule:
    return subst_rule(r, {v: (fresh.var(v.name, v.atomic),) for v in r.variables()})


def fold_intermediates(p: Program, out: Optional[str] = None) -> Program:
    """Equivalent program whose only IDB relation is ``out`` (default: the
    single IDB relation no rule calls).  Each call of an intermediate
    relation is replaced by the body of one of its rules, renamed apart,
    plus equations between call and head arguments."""
    if any(l.negated and l.is_predicate for r in p.rules for l in r.body):
        raise NegationPresent("folding intermediate predicates needs a negation-free program")
    if is_recursive(p):
        raise RecursionPresent("folding intermediate predicates needs a nonrecursive program")
    if out is None:
        candidates = sorted(sinks(p))
        if len(candidates) != 1:
            raise UnknownRelation(f"cannot infer the output relation among {candidates}; pass it explicitly")
        out = candidates[0]
    if out not in p.idb():
        raise UnknownRelation(f"{out} is not defined by the program")
    if len(p.idb()) == 1:
        return p
    fresh = Fresh(p)
    unfolded: Dict[str, List[Rule]] = {}
    for rel in topological_order(p):
        rules: List[Rule] = []
        for r in (x for x in p.rules if x.head.relation == rel):
            options = []
            for l in r.body:
                if not (l.is_predicate and l.atom.relation in unfolded):
                    options.append([(l,)])
                    continue
                alts = []
                for d in unfolded[l.atom.relation]:
                    d = _rename_apart(d, fresh)
                    eqs = tuple(pos(Equation(a, h)) for a, h in zip(l.atom.args, d.head.args))
                    alts.append(d.body + eqs)
                options.append(alts)
            for combo in product(*options):
                rules.append(Rule(r.head, tuple(x for group in combo for x in group)))
        unfolded[rel] = rules
    return Program.single(unfolded[out])
