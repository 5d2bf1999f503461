"""Stratified bottom-up evaluation with termination budgets."""
from __future__ import annotations

import gc
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

from .analysis import check_stratification
from .core import Instance, Pack, Var, apply_valuation, has_packing, is_flat, variables
from .errors import InternalError, NonTermination
from .program import Equation, Predicate, Program, Rule
from .unify import match_expr

__all__ = ["Budget", "EvalResult", "eval_rule", "eval_stratum", "eval_program", "query", "path_size"]


@dataclass(frozen=True)
class Budget:
    max_derived_facts: int = 1_000_000
    max_path_len: int = 10_000
    max_iterations: int = 100_000

    def __post_init__(self):
        if min(self.max_derived_facts, self.max_path_len, self.max_iterations) <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class EvalResult:
    instance: Instance
    stats: List[Dict[str, int]] = field(default_factory=list)


def path_size(p: tuple) -> int:
    """Length of a path counting the contents of packed values too, so
    runaway nesting is caught by the same limit as runaway length."""
    n = 0
    for v in p:
        n += 1
        if isinstance(v, Pack):
            n += path_size(v.items)
    return n


# ---------------------------------------------------------------------------
# rule plans

Relations = Mapping[str, Iterable[tuple]]


class _Plan:
    """Static join order for one rule: positive predicates as written,
    each followed by every equation that has become one-side ground."""

    def __init__(self, rule: Rule):
        self.rule = rule
        self.steps: List[tuple] = []
        bound: Set[Var] = set()
        pending = list(rule.positive_equations())

        def drain():
            progress = True
            while progress and pending:
                progress = False
                for eq in list(pending):
                    lv, rv = variables(eq.lhs), variables(eq.rhs)
                    if lv <= bound and rv <= bound:
                        self.steps.append(("check", eq.lhs, eq.rhs))
                    elif lv <= bound:
                        self.steps.append(("bind", eq.lhs, eq.rhs))
                        bound.update(rv)
                    elif rv <= bound:
                        self.steps.append(("bind", eq.rhs, eq.lhs))
                        bound.update(lv)
                    else:
                        continue
                    pending.remove(eq)
                    progress = True

        drain()
        for k, p in enumerate(rule.positive_predicates()):
            self.steps.append(("pred", p, k))
            for a in p.args:
                bound.update(variables(a))
            drain()
        if pending:
            raise InternalError(f"equation never becomes one-side ground (unsafe rule?): {rule}")
        self.neg_preds = rule.negative_predicates()
        self.neg_eqs = rule.negative_equations()
        self.n_pos = len(rule.positive_predicates())

    def valuations(self, rels: Relations, delta: Optional[Tuple[int, Iterable[tuple]]] = None) -> Iterator[Dict[Var, tuple]]:
        yield from self._run(0, {}, rels, delta)

    def _run(self, s: int, b: Dict[Var, tuple], rels: Relations, delta) -> Iterator[Dict[Var, tuple]]:
        if s == len(self.steps):
            for p in self.neg_preds:
                t = tuple(apply_valuation(a, b) for a in p.args)
                if t in rels.get(p.relation, ()):
                    return
            for eq in self.neg_eqs:
                if apply_valuation(eq.lhs, b) == apply_valuation(eq.rhs, b):
                    return
            yield b
            return
        step = self.steps[s]
        kind = step[0]
        if kind == "check":
            if apply_valuation(step[1], b) == apply_valuation(step[2], b):
                yield from self._run(s + 1, b, rels, delta)
        elif kind == "bind":
            target = apply_valuation(step[1], b)
            for b2 in match_expr(step[2], target, b):
                yield from self._run(s + 1, b2, rels, delta)
        else:
            p, k = step[1], step[2]
            source = delta[1] if delta is not None and delta[0] == k else rels.get(p.relation, ())
            args = p.args
            for t in source:
                for b2 in _match_args(args, t, 0, b):
                    yield from self._run(s + 1, b2, rels, delta)

    def head_fact(self, b: Dict[Var, tuple]) -> tuple:
        return tuple(apply_valuation(a, b) for a in self.rule.head.args)


def _match_args(args, t, i, b):
    if i == len(args):
        yield b
        return
    for b2 in match_expr(args[i], t[i], b):
        yield from _match_args(args, t, i + 1, b2)


def eval_rule(r: Rule, i) -> Set[Tuple[str, tuple]]:
    """Facts ``head(v)`` for every valuation ``v`` satisfying the body in ``i``."""
    rels = i.relations() if isinstance(i, Instance) else i
    plan = _Plan(r)
    return {(r.head.relation, plan.head_fact(b)) for b in plan.valuations(rels)}


# ---------------------------------------------------------------------------
# strata


@contextmanager
def _no_gc():
    # Derived facts are acyclic tuples; letting the cyclic collector walk
    # millions of them costs more than the evaluation itself.
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def _to_rels(i: Instance) -> Dict[str, Set[tuple]]:
    return {n: set(i[n]) for n in i}


def _packfree(rules: Iterable[Rule], i: Instance) -> bool:
    """Whether no derivable fact can contain a packed value."""
    return is_flat(i) and not any(has_packing(e) for r in rules for e in r.exprs())


def _run_stratum(rules: List[Rule], rels: Dict[str, Set[tuple]], budget: Budget,
                 seminaive: bool, stratum: Optional[int], counter: List[int],
                 packfree: bool = False) -> Dict[str, int]:
    plans = [_Plan(r) for r in rules]
    heads = {r.head.relation for r in rules}
    for h in heads:
        rels.setdefault(h, set())
    idb_positions = [
        [k for k, p in enumerate(r.positive_predicates()) if p.relation in heads] for r in rules
    ]

    size = len if packfree else path_size

    def add(new: Dict[str, Set[tuple]], name: str, t: tuple):
        if t in rels[name]:
            return
        bucket = new.setdefault(name, set())
        n = len(bucket)
        bucket.add(t)
        if len(bucket) == n:
            return
        for p in t:
            if size(p) > budget.max_path_len:
                raise NonTermination("max_path_len", budget.max_path_len, stratum)
        counter[0] += 1
        if counter[0] > budget.max_derived_facts:
            raise NonTermination("max_derived_facts", budget.max_derived_facts, stratum)

    iterations = 0
    delta: Optional[Dict[str, Set[tuple]]] = None
    while True:
        iterations += 1
        if iterations > budget.max_iterations:
            raise NonTermination("max_iterations", budget.max_iterations, stratum)
        new: Dict[str, Set[tuple]] = {}
        for plan, positions in zip(plans, idb_positions):
            name = plan.rule.head.relation
            if not seminaive or delta is None:
                for b in plan.valuations(rels):
                    add(new, name, plan.head_fact(b))
                continue
            preds = plan.rule.positive_predicates()
            for k in positions:
                d = delta.get(preds[k].relation)
                if not d:
                    continue
                for b in plan.valuations(rels, (k, d)):
                    add(new, name, plan.head_fact(b))
        if not any(new.values()):
            break
        for n, ts in new.items():
            rels[n] |= ts
        delta = new
    return {"iterations": iterations, "facts": sum(len(rels[h]) for h in heads)}


def eval_stratum(rules: Iterable[Rule], i: Instance, b: Budget = Budget(), seminaive: bool = True) -> Instance:
    """Least fixpoint of one semipositive stratum over ``i``."""
    rules = list(rules)
    rels = _to_rels(i)
    arities = i.arities
    for r in rules:
        for p in r.predicates():
            arities.setdefault(p.relation, p.arity)
    with _no_gc():
        _run_stratum(rules, rels, b, seminaive, None, [0], _packfree(rules, i))
    return Instance(rels, arities)


def eval_program(p: Program, i: Instance, b: Budget = Budget(), seminaive: bool = True) -> EvalResult:
    check_stratification(p)
    rels = _to_rels(i)
    arities = i.arities
    for n, a in p.arities().items():
        arities.setdefault(n, a)
    stats = []
    counter = [0]
    packfree = _packfree(p.rules, i)
    with _no_gc():
        for k, stratum in enumerate(p.strata):
            stats.append(_run_stratum(list(stratum), rels, b, seminaive, k, counter, packfree))
    return EvalResult(Instance(rels, arities), stats)


def query(p: Program, i: Instance, s: str, b: Budget = Budget(), seminaive: bool = True) -> Instance:
    """Evaluate ``p`` on ``i`` and keep only relation ``s``."""
    if not is_flat(i):
        warnings.warn("query input is not flat", stacklevel=2)
    edb = p.edb()
    for n in edb:
        if n in i and i.arity(n) > 1:
            warnings.warn(f"input relation {n} is not monadic", stacklevel=2)
    res = eval_program(p, i, b, seminaive).instance
    arity = p.arities().get(s, res.arity(s) if s in res else 0)
    out = Instance({s: res.get(s)}, {s: arity})
    if not is_flat(out):
        warnings.warn(f"query output {s} is not flat", stacklevel=2)
    return out
