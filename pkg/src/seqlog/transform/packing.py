"""Removing packing from nonrecursive programs (flat inputs and outputs)."""
from __future__ import annotations

from itertools import product
from typing import Dict, Iterable, List, Optional, Set, Tuple

from ..analysis import classify_equation, is_recursive, pure_vars, topological_order
from ..core import (
    STAR,
    Pack,
    Var,
    components,
    fill_structure,
    has_packing,
    packing_structure,
    star_count,
    variables,
    variables_in_order,
)
from ..errors import InternalError, RecursionPresent
from ..program import Equation, Literal, Predicate, Program, Rule, neg, pos
from ..unify import Budget, prune_specializations, solve
from .common import Fresh, drop_empty_strata, simplify_var_equations, sinks, subst_rule, var_args

FLAT = (STAR,)


def _freshen_occurrences(e: tuple, fresh: Fresh, pairs: List[Tuple[Var, Var]]) -> tuple:
    out = []
    for t in e:
        if isinstance(t, Var):
            v = fresh.var(t.name, t.atomic)
            pairs.append((t, v))
            out.append(v)
        elif isinstance(t, Pack):
            out.append(Pack(_freshen_occurrences(t.items, fresh, pairs)))
        else:
            out.append(t)
    return tuple(out)


def purify_rule(r: Rule, sources: Iterable[str], fresh: Optional[Fresh] = None,
                budget: Budget = Budget()) -> List[Rule]:
    """Rules equivalent to ``r`` on flat instances whose positive equations
    are all pure.  ``sources`` are the body relations holding flat data."""
    sources = set(sources)
    fresh = fresh or Fresh(Program.single([r]))
    done: List[Rule] = []
    work = [r]
    while work:
        cur = work.pop(0)
        pure = pure_vars(cur, sources)
        half = [eq for eq in cur.positive_equations() if classify_equation(eq, pure) == "half_pure"]
        if not half:
            if any(classify_equation(eq, pure) != "pure" for eq in cur.positive_equations()):
                raise InternalError(f"fully impure equations without half-pure ones: {cur}")
            done.append(cur)
            continue
        eq = min(half, key=lambda q: len((variables(q.lhs) | variables(q.rhs)) - pure))
        e1, e2 = (eq.lhs, eq.rhs) if variables(eq.lhs) <= pure else (eq.rhs, eq.lhs)
        pairs: List[Tuple[Var, Var]] = []
        e1f = _freshen_occurrences(e1, fresh, pairs)
        body = [l for l in cur.body if not (not l.negated and l.atom == eq)]
        body += [pos(Equation((u,), (v,))) for u, v in pairs]
        rest = Rule(cur.head, tuple(body))
        pure_rest = pure_vars(rest, sources)
        target = Equation(e1f, e2)
        sols = solve(target, budget)
        sols = prune_specializations(sols, variables_in_order(target.lhs, target.rhs))
        for s in sols:
            d = s.as_dict()
            if any(has_packing(d[v]) for v in pure_rest if v in d):
                continue
            work.append(subst_rule(rest, d))
    return list(dict.fromkeys(done))


def depack_equations(r: Rule) -> List[Rule]:
    """Split (non)equalities between pure expressions into componentwise
    ones without packing."""
    body: List[Literal] = []
    neqs: List[Equation] = []
    for l in r.body:
        if not l.is_equation:
            body.append(l)
            continue
        eq = l.atom
        s1, s2 = packing_structure(eq.lhs), packing_structure(eq.rhs)
        if l.negated:
            if s1 == s2:
                neqs.append(eq)
            continue
        if s1 != s2:
            return []
        for c1, c2 in zip(components(eq.lhs), components(eq.rhs)):
            if c1 != c2:
                body.append(pos(Equation(c1, c2)))
    choices = []
    for eq in neqs:
        opts = [neg(Equation(c1, c2)) for c1, c2 in zip(components(eq.lhs), components(eq.rhs)) if c1 != c2]
        if not opts:
            return []
        choices.append(opts)
    return [Rule(r.head, tuple(body) + tuple(c)) for c in product(*choices)]


def _drop_packed_edb(r: Rule, edb: Set[str]) -> Optional[Rule]:
    """Packed EDB atoms: positive ones are false, negated ones true."""
    body = []
    for l in r.body:
        if l.is_predicate and l.atom.relation in edb and any(has_packing(a) for a in l.atom.args):
            if not l.negated:
                return None
            continue
        body.append(l)
    return Rule(r.head, tuple(body))


def _arg_structure(args) -> tuple:
    return tuple(packing_structure(a) for a in args)


def _arg_components(args) -> tuple:
    return tuple(c for a in args for c in components(a))


def eliminate_packing_nonrecursive(p: Program, out: Optional[Iterable[str]] = None,
                                   budget: Budget = Budget()) -> Program:
    """Equivalent program without packing, for flat inputs.

    Every IDB relation gets its own stratum and is split into one relation
    per packing structure of its head arguments.  Output relations (default:
    IDB relations no rule calls) keep their name and only their flat facts.
    """
    if is_recursive(p):
        raise RecursionPresent("packing elimination needs a nonrecursive program")
    if not any(has_packing(e) for r in p.rules for e in r.exprs()):
        return p
    outs = set(out) if out is not None else sinks(p)
    called = {l.atom.relation for r in p.rules for l in r.body if l.is_predicate}
    edb = p.edb()
    fresh = Fresh(p)
    split: Dict[str, Dict[tuple, str]] = {}
    strata: List[List[Rule]] = []
    copies: List[Rule] = []
    by_head: Dict[str, List[Rule]] = {}
    for r in p.rules:
        by_head.setdefault(r.head.relation, []).append(r)

    for rel in topological_order(p):
        splitting = rel in called or rel not in outs
        if splitting:
            split[rel] = {}
        stratum: List[Rule] = []
        for r in by_head[rel]:
            r = _drop_packed_edb(r, edb)
            if r is None:
                continue
            for v in _expand_calls(r, split, fresh):
                sources = {q.relation for q in v.positive_predicates()}
                for pr in purify_rule(v, sources, fresh, budget):
                    for dr in depack_equations(pr):
                        dr = _drop_packed_edb(simplify_var_equations(dr), edb)
                        if dr is None:
                            continue
                        dr = _rewrite_negated_calls(dr, split)
                        head = dr.head
                        if splitting:
                            key = _arg_structure(head.args)
                            name = split[rel].setdefault(key, fresh.rel(rel))
                            head = Predicate(name, _arg_components(head.args))
                        elif any(has_packing(a) for a in head.args):
                            continue
                        stratum.append(Rule(head, dr.body))
        strata.append(stratum)
        if splitting and rel in outs:
            key = tuple(FLAT for _ in range(p.arities()[rel]))
            if key in split[rel]:
                vs = tuple(Var(f"x{i}") for i in range(len(key)))
                copies.append(Rule(Predicate(rel, var_args(vs)), (pos(Predicate(split[rel][key], var_args(vs))),)))
    strata.append(copies)
    return drop_empty_strata(strata)


def _expand_calls(r: Rule, split: Dict[str, Dict[tuple, str]], fresh: Fresh) -> List[Rule]:
    """One copy of ``r`` per choice of packing structure at each positive
    call of a split relation, with the structure enforced by equations."""
    options: List[List[Tuple[Literal, ...]]] = []
    for l in r.body:
        if l.negated or not l.is_predicate or l.atom.relation not in split:
            options.append([(l,)])
            continue
        q = l.atom
        alts = []
        for key, name in split[q.relation].items():
            vs = [fresh.var("c") for _ in range(sum(star_count(s) for s in key))]
            lits = [pos(Predicate(name, var_args(vs)))]
            k = 0
            for arg, s in zip(q.args, key):
                n = star_count(s)
                template = fill_structure(s, [(v,) for v in vs[k:k + n]])
                k += n
                lits.append(pos(Equation(arg, template)))
            alts.append(tuple(lits))
        options.append(alts)
    return [Rule(r.head, tuple(l for group in combo for l in group)) for combo in product(*options)]


def _rewrite_negated_calls(r: Rule, split: Dict[str, Dict[tuple, str]]) -> Rule:
    body = []
    for l in r.body:
        if l.negated and l.is_predicate and l.atom.relation in split:
            name = split[l.atom.relation].get(_arg_structure(l.atom.args))
            if name is None:
                continue
            body.append(neg(Predicate(name, _arg_components(l.atom.args))))
        else:
            body.append(l)
    return Rule(r.head, tuple(body))
