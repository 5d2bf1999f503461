"""Removing equations with the help of intermediate predicates."""
from __future__ import annotations

from typing import List

from ..core import variables, variables_in_order
from ..errors import InternalError
from ..program import Equation, Literal, Predicate, Program, Rule, neg, pos
from .common import Fresh, drop_empty_strata, rename_relations, var_args


def _split_negated_equations(stratum, fresh: Fresh) -> List[List[Rule]]:
    """Replace negated equations of one stratum by negated calls to a new
    relation computed in an inserted stratum just before it."""
    if not any(r.negative_equations() for r in stratum):
        return [list(stratum)]
    rho = {h: fresh.rel(h) for h in sorted({r.head.relation for r in stratum})}
    before: List[Rule] = []
    after: List[Rule] = []
    for r in stratum:
        neqs = r.negative_equations()
        body = tuple(l for l in r.body if not (l.negated and l.is_equation))
        base = Rule(r.head, body)
        before.append(rename_relations(base, rho))
        if not neqs:
            after.append(r)
            continue
        vs = variables_in_order(*(e for l in body for e in l.atom.exprs()))
        t = Predicate(fresh.rel(r.head.relation), var_args(vs))
        renamed_body = rename_relations(base, rho).body
        for eq in neqs:
            before.append(Rule(t, renamed_body + (pos(eq),)))
        after.append(Rule(r.head, body + (neg(t),)))
    return [before, after]


def _split_positive_equations(r: Rule, fresh: Fresh) -> List[Rule]:
    out: List[Rule] = []
    while r.positive_equations():
        preds = r.positive_predicates()
        pv = set()
        for q in preds:
            for a in q.args:
                pv |= variables(a)
        choice = None
        for eq in r.positive_equations():
            if variables(eq.lhs) <= pv:
                choice = (eq, eq.lhs, eq.rhs)
                break
            if variables(eq.rhs) <= pv:
                choice = (eq, eq.rhs, eq.lhs)
                break
        if choice is None:
            raise InternalError(f"no equation has a side bound by predicates (unsafe rule?): {r}")
        eq, e1, e2 = choice
        vs = variables_in_order(*(a for q in preds for a in q.args))
        name = fresh.rel(r.head.relation)
        out.append(Rule(Predicate(name, (e1,) + var_args(vs)), tuple(pos(q) for q in preds)))
        rest = tuple(
            l for l in r.body
            if not (not l.negated and (l.is_predicate or l.atom == eq))
        )
        r = Rule(r.head, (pos(Predicate(name, (e2,) + var_args(vs))),) + rest)
    out.append(r)
    return out


def eliminate_equations(p: Program) -> Program:
    """Equivalent program without equations or nonequalities."""
    if not any(l.is_equation for r in p.rules for l in r.body):
        return p
    fresh = Fresh(p)
    strata: List[List[Rule]] = []
    for s in p.strata:
        strata.extend(_split_negated_equations(s, fresh))
    final = []
    for s in strata:
        rules: List[Rule] = []
        for r in s:
            rules.extend(_split_positive_equations(r, fresh))
        final.append(rules)
    return drop_empty_strata(final)
