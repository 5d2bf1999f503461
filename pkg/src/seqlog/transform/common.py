"""Helpers shared by the program rewritings."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set

from ..analysis import detect_features
from ..core import Var, apply_valuation
from ..program import Equation, Literal, Predicate, Program, Rule

_SUFFIX = re.compile(r"__\d+$")


class Fresh:
    """Generator of names that cannot clash with anything in ``programs``.

    Generated names carry a ``__k`` suffix, which the parser rejects in user
    programs, so they are also distinct from every name a user can write.
    """

    def __init__(self, *programs: Program, names: Iterable[str] = ()):
        self.used: Set[str] = set(names)
        for p in programs:
            self.used |= p.relation_names()
            self.used |= p.variable_names()
        self.k = 0

    def _next(self, base: str) -> str:
        base = _SUFFIX.sub("", base) or "X"
        while True:
            self.k += 1
            name = f"{base}__{self.k}"
            if name not in self.used:
                self.used.add(name)
                return name

    def rel(self, base: str) -> str:
        return self._next(base)

    def var(self, base: str = "v", atomic: bool = False) -> Var:
        return Var(self._next(base), atomic)


def subst_pred(p: Predicate, rho: Mapping[Var, tuple]) -> Predicate:
    return Predicate(p.relation, tuple(apply_valuation(a, rho) for a in p.args))


def subst_literal(l: Literal, rho: Mapping[Var, tuple]) -> Literal:
    a = l.atom
    if isinstance(a, Predicate):
        return Literal(subst_pred(a, rho), l.negated)
    return Literal(Equation(apply_valuation(a.lhs, rho), apply_valuation(a.rhs, rho)), l.negated)


def subst_rule(r: Rule, rho: Mapping[Var, tuple]) -> Rule:
    return Rule(subst_pred(r.head, rho), tuple(subst_literal(l, rho) for l in r.body))


def rename_relations(r: Rule, ren: Mapping[str, str], body_only: bool = False) -> Rule:
    def rp(p: Predicate) -> Predicate:
        return Predicate(ren.get(p.relation, p.relation), p.args)

    head = r.head if body_only else rp(r.head)
    body = tuple(Literal(rp(l.atom), l.negated) if l.is_predicate else l for l in r.body)
    return Rule(head, body)


def var_args(vs: Iterable[Var]) -> tuple:
    return tuple((v,) for v in vs)


def drop_empty_strata(strata: Iterable[Iterable[Rule]]) -> Program:
    kept = [tuple(s) for s in strata if tuple(s)]
    return Program(tuple(kept) or ((),))


def sinks(p: Program) -> Set[str]:
    """IDB relations that no rule calls."""
    called = {l.atom.relation for r in p.rules for l in r.body if l.is_predicate}
    return p.idb() - called


@dataclass
class TransformReport:
    input_features: FrozenSet[str]
    output_features: FrozenSet[str]
    fresh_names: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @classmethod
    def of(cls, before: Program, after: Program, notes: Iterable[str] = ()) -> "TransformReport":
        fresh = sorted(after.relation_names() - before.relation_names())
        return cls(detect_features(before), detect_features(after), fresh, list(notes))


def simplify_var_equations(r: Rule) -> Rule:
    """Inline positive equations between two variables, and drop trivial
    ones.  A path variable equated to an atomic one is replaced by it."""
    while True:
        target = None
        for l in r.body:
            if l.negated or not l.is_equation:
                continue
            a, b = l.atom.lhs, l.atom.rhs
            if a == b:
                target = (l, {})
                break
            if len(a) == 1 and len(b) == 1 and isinstance(a[0], Var) and isinstance(b[0], Var):
                u, v = a[0], b[0]
                if v.atomic and not u.atomic:
                    u, v = v, u
                target = (l, {v: (u,)})
                break
        if target is None:
            return r
        l, rho = target
        r = subst_rule(Rule(r.head, tuple(x for x in r.body if x != l)), rho)
