"""Static analysis: safety, stratification, dependency graph, purity,
feature detection and the fragment subsumption test."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from .core import Var, has_packing, variables
from .errors import PurityContextError, SafetyError, StratificationError
from .program import Equation, Program, Rule

__all__ = [
    "FEATURES",
    "limited_vars",
    "check_safety",
    "check_stratification",
    "check_program",
    "dependency_graph",
    "is_recursive",
    "recursive_relations",
    "topological_order",
    "pure_vars",
    "purity_sources",
    "classify_equation",
    "detect_features",
    "format_features",
    "parse_features",
    "fragment_subsumes",
    "all_fragments",
]

FEATURES = frozenset("AEINPR")


def _closure(seed: Set[Var], eqs: Iterable[Equation], allow_side) -> Set[Var]:
    known = set(seed)
    eqs = list(eqs)
    changed = True
    while changed:
        changed = False
        for eq in eqs:
            for a, b in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
                if allow_side(a) and variables(a) <= known and not variables(b) <= known:
                    known |= variables(b)
                    changed = True
    return known


def limited_vars(r: Rule) -> Set[Var]:
    seed: Set[Var] = set()
    for p in r.positive_predicates():
        for a in p.args:
            seed |= variables(a)
    return _closure(seed, r.positive_equations(), lambda side: True)


def check_safety(p: Program) -> None:
    """Raise :class:`SafetyError` naming every unsafe rule."""
    bad = []
    for r in p.rules:
        lim = limited_vars(r)
        extra = [v for v in r.variables() if v not in lim]
        if extra:
            bad.append((r, [str(v) for v in extra]))
    if bad:
        raise SafetyError(bad)


def check_stratification(p: Program) -> None:
    defined: Dict[str, int] = {}
    for k, s in enumerate(p.strata):
        for r in s:
            prev = defined.setdefault(r.head.relation, k)
            if prev != k:
                raise StratificationError(
                    f"relation {r.head.relation} is defined in strata {prev} and {k}"
                )
    for k, s in enumerate(p.strata):
        for r in s:
            for lit in r.body:
                if not lit.is_predicate:
                    continue
                d = defined.get(lit.atom.relation)
                if d is None:
                    continue
                if lit.negated and d >= k:
                    raise StratificationError(
                        f"negated {lit.atom.relation} in stratum {k} is defined in stratum {d}: {r}"
                    )
                if d > k:
                    raise StratificationError(
                        f"{lit.atom.relation} used in stratum {k} before its definition in stratum {d}: {r}"
                    )


def check_program(p: Program) -> None:
    check_safety(p)
    check_stratification(p)


# ---------------------------------------------------------------------------
# dependency graph


def dependency_graph(p: Program) -> Dict[str, Set[str]]:
    """Edges ``head -> body relation`` restricted to IDB names."""
    idb = p.idb()
    g: Dict[str, Set[str]] = {n: set() for n in idb}
    for r in p.rules:
        for lit in r.body:
            if lit.is_predicate and lit.atom.relation in idb:
                g[r.head.relation].add(lit.atom.relation)
    return g


def _sccs(g: Dict[str, Set[str]]) -> List[List[str]]:
    index: Dict[str, int] = {}
    low: Dict[str, int] = {}
    stack: List[str] = []
    on: Set[str] = set()
    out: List[List[str]] = []
    counter = [0]

    def visit(v: str):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in sorted(g.get(v, ())):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(sorted(comp))

    for v in sorted(g):
        if v not in index:
            visit(v)
    return out


def recursive_relations(p: Program) -> Set[str]:
    g = dependency_graph(p)
    rec: Set[str] = set()
    for comp in _sccs(g):
        if len(comp) > 1 or comp[0] in g[comp[0]]:
            rec.update(comp)
    return rec


def is_recursive(p: Program) -> bool:
    return bool(recursive_relations(p))


def topological_order(p: Program) -> List[str]:
    """IDB names, dependencies first.  Requires a nonrecursive program."""
    g = dependency_graph(p)
    order: List[str] = []
    done: Set[str] = set()

    def visit(v: str, trail: Set[str]):
        if v in done:
            return
        if v in trail:
            raise ValueError("program is recursive")
        trail.add(v)
        for w in sorted(g[v]):
            visit(w, trail)
        trail.discard(v)
        done.add(v)
        order.append(v)

    for v in sorted(g):
        visit(v, set())
    return order


# ---------------------------------------------------------------------------
# purity


def pure_vars(r: Rule, sources: Iterable[str]) -> Set[Var]:
    """Variables that can only hold packing-free values on flat inputs.

    ``sources`` are the body relations known to hold flat data (the EDB
    names, plus earlier IDB relations already freed of packing).
    """
    sources = set(sources)
    seed: Set[Var] = set()
    for p in r.positive_predicates():
        if p.relation in sources:
            for a in p.args:
                seed |= variables(a)
    return _closure(seed, r.positive_equations(), lambda side: not has_packing(side))


def purity_sources(p: Program, stratum: int) -> Set[str]:
    """Source relations for purity analysis of one stratum.

    Purity is only defined for semipositive, nonrecursive strata; anything
    else is refused.
    """
    rules = p.strata[stratum]
    heads = {r.head.relation for r in rules}
    for r in rules:
        for q in r.positive_predicates() + r.negative_predicates():
            if q.relation in heads:
                raise PurityContextError(
                    f"stratum {stratum} is recursive or not semipositive; purity undefined"
                )
    return {q.relation for r in rules for q in r.positive_predicates()}


def classify_equation(eq: Equation, pure: Set[Var]) -> str:
    lv, rv = variables(eq.lhs), variables(eq.rhs)
    lp, rp = lv <= pure, rv <= pure
    if lp and rp:
        return "pure"
    if lp or rp:
        return "half_pure"
    return "fully_impure"


# ---------------------------------------------------------------------------
# features and fragments


def detect_features(p: Program) -> FrozenSet[str]:
    f: Set[str] = set()
    for r in p.rules:
        for q in r.predicates():
            if q.arity > 1:
                f.add("A")
        for lit in r.body:
            if lit.is_equation:
                f.add("E")
            if lit.negated:
                f.add("N")
        if any(has_packing(e) for e in r.exprs()):
            f.add("P")
    if is_recursive(p):
        f.add("R")
    if len(p.idb()) >= 2:
        f.add("I")
    return frozenset(f)


def format_features(f: Iterable[str]) -> str:
    return " ".join(sorted(f))


def parse_features(text: str) -> FrozenSet[str]:
    letters = {c for c in text.upper() if not c.isspace() and c not in ",{}"}
    bad = letters - FEATURES
    if bad:
        raise ValueError(f"unknown feature letters: {''.join(sorted(bad))}")
    return frozenset(letters)


def fragment_subsumes(f1: Iterable[str], f2: Iterable[str]) -> bool:
    """Whether every query expressible with features ``f1`` is expressible
    with features ``f2`` (the five-condition characterization)."""
    f1, f2 = set(f1), set(f2)
    c1 = "N" not in f1 or "N" in f2
    c2 = "R" not in f1 or "R" in f2
    c3 = "E" not in f1 or ("E" in f2 or "I" in f2)
    c4 = not ("I" in f1 and "R" not in f1 and "N" not in f1) or ("I" in f2 or "E" in f2)
    c5 = not ("I" in f1 and ("R" in f1 or "N" in f1)) or "I" in f2
    return c1 and c2 and c3 and c4 and c5


def all_fragments(universe: Iterable[str] = FEATURES) -> List[FrozenSet[str]]:
    u = sorted(universe)
    return [frozenset(c) for k in range(len(u) + 1) for c in combinations(u, k)]
