"""Program AST: predicates, equations, literals, rules, stratified programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

from .core import Expr, Var, format_expr, variables_in_order, _walk_vars

__all__ = ["Predicate", "Equation", "Literal", "Rule", "Program", "pos", "neg"]


@dataclass(frozen=True, slots=True)
class Predicate:
    relation: str
    args: Tuple[Expr, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.relation
        return f"{self.relation}({', '.join(format_expr(a) for a in self.args)})"

    def exprs(self) -> Tuple[Expr, ...]:
        return self.args


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Expr
    rhs: Expr

    def __str__(self) -> str:
        return f"{format_expr(self.lhs)} = {format_expr(self.rhs)}"

    def exprs(self) -> Tuple[Expr, ...]:
        return (self.lhs, self.rhs)


Atom = Union[Predicate, Equation]


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    negated: bool = False

    @property
    def is_predicate(self) -> bool:
        return isinstance(self.atom, Predicate)

    @property
    def is_equation(self) -> bool:
        return isinstance(self.atom, Equation)

    def __str__(self) -> str:
        if not self.negated:
            return str(self.atom)
        if isinstance(self.atom, Equation):
            return f"{format_expr(self.atom.lhs)} != {format_expr(self.atom.rhs)}"
        return f"not {self.atom}"


def pos(atom: Atom) -> Literal:
    return Literal(atom, False)


def neg(atom: Atom) -> Literal:
    return Literal(atom, True)


def _dedup(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True)
class Rule:
    """``head :- body``.  The body is a set; written order is kept for
    evaluation and printing, duplicates are dropped."""

    head: Predicate
    body: Tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "body", _dedup(self.body))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rule):
            return NotImplemented
        return self.head == other.head and frozenset(self.body) == frozenset(other.body)

    def __hash__(self) -> int:
        return hash((self.head, frozenset(self.body)))

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(l) for l in self.body)}."

    # convenience views -------------------------------------------------
    def positive_predicates(self) -> List[Predicate]:
        return [l.atom for l in self.body if not l.negated and l.is_predicate]

    def negative_predicates(self) -> List[Predicate]:
        return [l.atom for l in self.body if l.negated and l.is_predicate]

    def positive_equations(self) -> List[Equation]:
        return [l.atom for l in self.body if not l.negated and l.is_equation]

    def negative_equations(self) -> List[Equation]:
        return [l.atom for l in self.body if l.negated and l.is_equation]

    def exprs(self) -> List[Expr]:
        out = list(self.head.args)
        for l in self.body:
            out.extend(l.atom.exprs())
        return out

    def variables(self) -> List[Var]:
        return variables_in_order(*self.exprs())

    def body_variables(self) -> List[Var]:
        ex: List[Expr] = []
        for l in self.body:
            ex.extend(l.atom.exprs())
        return variables_in_order(*ex)

    def predicates(self) -> Iterator[Predicate]:
        yield self.head
        for l in self.body:
            if l.is_predicate:
                yield l.atom


def rule_key(r: Rule) -> str:
    return str(r)


@dataclass(frozen=True)
class Program:
    """A sequence of strata; each stratum is kept sorted and deduplicated
    so equal programs print identically."""

    strata: Tuple[Tuple[Rule, ...], ...] = ((),)

    def __post_init__(self):
        strata = tuple(
            tuple(sorted(dict.fromkeys(s), key=rule_key)) for s in self.strata
        ) or ((),)
        object.__setattr__(self, "strata", strata)

    @classmethod
    def single(cls, rules: Iterable[Rule]) -> "Program":
        return cls((tuple(rules),))

    @property
    def rules(self) -> List[Rule]:
        return [r for s in self.strata for r in s]

    def idb(self) -> Set[str]:
        return {r.head.relation for r in self.rules}

    def edb(self) -> Set[str]:
        idb = self.idb()
        return {p.relation for r in self.rules for p in r.predicates()} - idb

    def relation_names(self) -> Set[str]:
        return {p.relation for r in self.rules for p in r.predicates()}

    def arities(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for r in self.rules:
            for p in r.predicates():
                out.setdefault(p.relation, p.arity)
        return out

    def variable_names(self) -> Set[str]:
        return {v.name for r in self.rules for e in r.exprs() for v in _walk_vars(e)}

    def __str__(self) -> str:
        return print_program(self)


def print_program(p: Program) -> str:
    blocks = []
    for s in p.strata:
        blocks.append("".join(f"{r}\n" for r in s))
    return "---\n".join(blocks)
