"""Translation between nonrecursive programs and algebra expressions."""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from ..analysis import is_recursive, topological_order
from ..core import Pack, Var, apply_valuation, packing_depth, variables_in_order
from ..errors import RecursionPresent, UnknownRelation
from ..program import Equation, Predicate, Program, Rule, neg, pos
from ..transform import eliminate_equations, normalize, rule_forms
from ..transform.common import Fresh
from .ast import ConstRel, Diff, Product, Project, Rel, Select, Sub, Union, Unpack, arity, col, children


def _cols(idx: Sequence[int]) -> tuple:
    return tuple((col(k),) for k in idx)


def _packed_key(idx: Sequence[int]) -> tuple:
    """``<$i1>/<$i2>/..``: equal iff every listed column is equal."""
    return tuple(Pack((col(k),)) for k in idx)


def _join(left, right, nl: int, pairs) -> object:
    """Product filtered by column equalities ``(left col, right col)``."""
    p = Product(left, right)
    if not pairs:
        return p
    return Select(_packed_key([a for a, _ in pairs]), _packed_key([nl + b for _, b in pairs]), p)


def atomic_filter_plan(c: int, child, n: Optional[int] = None):
    """Keep the tuples of ``child`` whose column ``c`` is one atomic value."""
    n = arity(child) if n is None else n
    keep = _cols(range(1, n + 1))
    nonempty = Diff(child, Select((col(c),), (), child))
    subs = Sub(c, Sub(c, child))  # columns n+1, n+2 are substrings of c
    split = Select((col(c),), (col(n + 1), col(n + 2)), subs)
    proper = Diff(Diff(split, Select((col(n + 1),), (), split)), Select((col(n + 2),), (), split))
    decomposable = Project(keep, proper)
    packed = Project(keep, Unpack(n + 1, Project(keep + ((col(c),),), child)))
    return Diff(Diff(nonempty, decomposable), packed)


def _rename(e: tuple, m: Dict[Var, int]) -> tuple:
    return apply_valuation(e, {v: (col(k),) for v, k in m.items()})


class _Compiler:
    def __init__(self, p: Program):
        self.p = p
        self.arities = p.arities()
        self.rels: Dict[str, object] = {}
        self.by_head: Dict[str, List[Rule]] = {}
        for r in p.rules:
            self.by_head.setdefault(r.head.relation, []).append(r)

    def relation(self, name: str):
        got = self.rels.get(name)
        if got is None:
            rules = self.by_head.get(name)
            if not rules:
                got = Rel(name, self.arities.get(name))
            else:
                plans = [self.rule(r) for r in rules]
                got = plans[0]
                for q in plans[1:]:
                    got = Union(got, q)
            self.rels[name] = got
        return got

    def rule(self, r: Rule):
        forms = rule_forms(r)
        head = r.head
        if 6 in forms:
            return ConstRel(head.arity, frozenset({head.args}))
        pp = r.positive_predicates()
        if 2 in forms or 5 in forms:
            q = pp[0]
            m = {a[0]: k + 1 for k, a in enumerate(q.args)}
            return Project(tuple(_rename(a, m) for a in head.args), self.relation(q.relation))
        if 3 in forms:
            a, b = pp
            m: Dict[Var, int] = {}
            inner, pairs = [], []
            for k, x in enumerate(a.args + b.args, start=1):
                v = x[0]
                if v in m:
                    (pairs if k > a.arity and m[v] <= a.arity else inner).append((m[v], k))
                else:
                    m[v] = k
            e = _join(self.relation(a.relation), self.relation(b.relation), a.arity,
                      [(i, k - a.arity) for i, k in pairs])
            for i, k in inner:
                e = Select((col(i),), (col(k),), e)
            return Project(tuple(_rename(x, m) for x in head.args), e)
        if 4 in forms:
            q, nq = pp[0], r.negative_predicates()[0]
            n = q.arity
            m = {a[0]: k + 1 for k, a in enumerate(q.args)}
            pos_side = self.relation(q.relation)
            pairs = [(m[a[0]], k + 1) for k, a in enumerate(nq.args)]
            blocked = Project(_cols(range(1, n + 1)), _join(pos_side, self.relation(nq.relation), n, pairs))
            return Diff(pos_side, blocked)
        if 1 in forms:
            return self.extraction(r)
        raise AssertionError(f"rule not in normal form: {r}")

    def extraction(self, r: Rule):
        """Form 1: materialize candidate values for every variable as
        (nested) substrings of the body columns, then select and project."""
        q = r.positive_predicates()[0]
        mcols = q.arity
        base = self.relation(q.relation)
        keep = _cols(range(1, mcols + 1))
        depth = max((packing_depth(a) for a in q.args), default=0)
        cur, width = base, mcols
        placed: Dict[Var, int] = {}
        done = [False] * mcols

        def apply_selects(e):
            for j, a in enumerate(q.args):
                if not done[j] and set(variables_in_order(a)) <= set(placed):
                    e = Select(_rename(a, placed), (col(j + 1),), e)
                    done[j] = True
            return e

        cur = apply_selects(cur)
        for v in variables_in_order(*q.args):
            j = next(k for k, a in enumerate(q.args) if v in variables_in_order(a))
            layer = Project(keep + ((col(j + 1),),), base)
            cands = None
            for _ in range(depth + 1):
                subs = Project(keep + ((col(mcols + 2),),), Sub(mcols + 1, layer))
                cands = subs if cands is None else Union(cands, subs)
                layer = Unpack(mcols + 1, subs)
            if v.atomic:
                cands = atomic_filter_plan(mcols + 1, cands, mcols + 1)
            joined = _join(cur, cands, width, [(k, k) for k in range(1, mcols + 1)])
            cur = Project(_cols(range(1, width + 1)) + ((col(width + mcols + 1),),), joined)
            width += 1
            placed[v] = width
            cur = apply_selects(cur)
        return Project(tuple(_rename(a, placed) for a in r.head.args), cur)


def compile_program(p: Program, t: str):
    """Algebra expression computing relation ``t`` of the nonrecursive ``p``
    on every instance."""
    if is_recursive(p):
        raise RecursionPresent("only nonrecursive programs can be compiled")
    if t not in p.idb():
        raise UnknownRelation(f"{t} is not defined by the program")
    q = normalize(eliminate_equations(p))
    return _Compiler(q).relation(t)


def to_program(e, out: str = "Out", schema=None) -> Program:
    """Nonrecursive program whose relation ``out`` equals ``eval_expr(e)``.
    Each operator node gets its own relation and stratum."""
    fresh = Fresh(names=[out])
    memo: Dict[int, Predicate] = {}
    strata: List[tuple] = []
    ar: Dict[int, int] = {}

    def xs(n: int, base: str = "x") -> List[Var]:
        return [Var(f"{base}{k}") for k in range(1, n + 1)]

    def args(vs) -> tuple:
        return tuple((v,) for v in vs)

    def valuation(vs) -> Dict[Var, tuple]:
        return {col(k): (v,) for k, v in enumerate(vs, start=1)}

    def visit(node, root: bool) -> str:
        if id(node) in memo:
            return memo[id(node)]
        kids = [visit(c, False) for c in children(node)]
        n = arity(node, schema)
        name = out if root else fresh.rel("N")
        v = xs(n)
        head = Predicate(name, args(v))
        if isinstance(node, Rel):
            rules = [Rule(head, (pos(Predicate(node.name, args(v))),))]
        elif isinstance(node, ConstRel):
            rules = [Rule(Predicate(name, t)) for t in sorted(node.tuples, key=repr)]
        elif isinstance(node, Select):
            val = valuation(v)
            rules = [Rule(head, (pos(Predicate(kids[0], args(v))),
                                 pos(Equation(apply_valuation(node.lhs, val), apply_valuation(node.rhs, val)))))]
        elif isinstance(node, Project):
            cv = xs(arity(node.child, schema))
            val = valuation(cv)
            rules = [Rule(Predicate(name, tuple(apply_valuation(x, val) for x in node.exprs)),
                          (pos(Predicate(kids[0], args(cv))),))]
        elif isinstance(node, Unpack):
            body = list(args(v))
            body[node.index - 1] = (Pack((v[node.index - 1],)),)
            rules = [Rule(head, (pos(Predicate(kids[0], tuple(body))),))]
        elif isinstance(node, Sub):
            u, w = Var("u"), Var("w")
            rules = [Rule(head, (pos(Predicate(kids[0], args(v[:-1]))),
                                 pos(Equation((v[node.index - 1],), (u, v[-1], w)))))]
        elif isinstance(node, Union):
            rules = [Rule(head, (pos(Predicate(k, args(v))),)) for k in kids]
        elif isinstance(node, Diff):
            rules = [Rule(head, (pos(Predicate(kids[0], args(v))), neg(Predicate(kids[1], args(v)))))]
        else:
            nl = arity(node.left, schema)
            y = xs(n - nl, "y")
            rules = [Rule(Predicate(name, args(v[:nl] + y)),
                          (pos(Predicate(kids[0], args(v[:nl]))), pos(Predicate(kids[1], args(y)))))]
        strata.append(tuple(rules))
        memo[id(node)] = name
        return name

    visit(e, True)
    return Program(tuple(strata))
