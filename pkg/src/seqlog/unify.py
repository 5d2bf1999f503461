"""Associative unification of path expressions.

:func:`solve` runs Plotkin's pig-pug rewriting, extended with rules for
atomic variables and packing, over every way of sending a subset of the
path variables to the empty path.  The search is depth-first over a DAG of
equations (identical equations are expanded once).  A cycle in that DAG or
an exhausted node/depth budget raises :class:`BudgetExceeded`: the complete
set of solutions may be infinite.

:func:`ground_match` is the special case where one side is a ground path;
it enumerates decompositions directly and always terminates.
"""
from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Dict, Iterator, List, Optional, Tuple

from .core import Pack, Var, apply_valuation, format_expr, variables, variables_in_order
from .errors import BudgetExceeded, RecursionBudgetExceeded
from .program import Equation

__all__ = [
    "SymbolicSolution",
    "SearchNode",
    "Leaf",
    "Budget",
    "is_one_sided_nonlinear",
    "step",
    "solve",
    "Search",
    "ground_match",
    "match_expr",
    "prune_specializations",
]

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_DEPTH = 2_000


@dataclass(frozen=True)
class SymbolicSolution:
    """A substitution; identity bindings are never stored."""

    items: Tuple[Tuple[Var, tuple], ...]

    @classmethod
    def from_dict(cls, d: Dict[Var, tuple]) -> "SymbolicSolution":
        items = tuple(sorted(((v, e) for v, e in d.items() if e != (v,)),
                             key=lambda ve: (ve[0].name, ve[0].atomic)))
        return cls(items)

    def as_dict(self) -> Dict[Var, tuple]:
        return dict(self.items)

    def apply(self, e: tuple) -> tuple:
        return apply_valuation(e, self.as_dict())

    def range_vars(self, domain) -> List[Var]:
        """Variables of the images of ``domain`` under this substitution."""
        d = self.as_dict()
        return variables_in_order(*(d.get(v, (v,)) for v in domain))

    def __str__(self) -> str:
        if not self.items:
            return "{}"
        return " ; ".join(f"{v} -> {format_expr(e)}" for v, e in self.items)


@dataclass(frozen=True)
class Budget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_depth: int = DEFAULT_MAX_DEPTH


@dataclass(frozen=True)
class SearchNode:
    lhs: tuple
    rhs: tuple
    subst: Tuple[Tuple[Var, tuple], ...] = ()

    @classmethod
    def root(cls, eq: Equation) -> "SearchNode":
        vs = variables_in_order(eq.lhs, eq.rhs)
        return cls(eq.lhs, eq.rhs, tuple((v, (v,)) for v in vs))


@dataclass(frozen=True)
class Leaf:
    success: bool


def is_one_sided_nonlinear(eq: Equation) -> bool:
    """Whether the sides share no variable and one of them is linear.

    Asking only that each repeated variable stay on one side is not enough
    for termination: ``$x/$y/a/a/$x = a/$z/$z/b`` loops.
    """
    left = Counter(_occurrences(eq.lhs))
    right = Counter(_occurrences(eq.rhs))
    if set(left) & set(right):
        return False
    return all(c == 1 for c in left.values()) or all(c == 1 for c in right.values())


def _occurrences(e: tuple) -> Iterator[Var]:
    for t in e:
        if isinstance(t, Var):
            yield t
        elif isinstance(t, Pack):
            yield from _occurrences(t.items)


def _kind(t) -> str:
    if isinstance(t, Var):
        return "a" if t.atomic else "p"
    if isinstance(t, Pack):
        return "k"
    return "c"


def _sub(e: tuple, rho: Dict[Var, tuple]) -> tuple:
    return apply_valuation(e, rho) if rho else e


def _length_feasible(lhs: tuple, rhs: tuple) -> bool:
    """Necessary condition for a nonempty solution: the top-level lengths
    of both sides can agree with every path variable of length >= 1.

    Without it the rewriting rules loop on nodes such as
    ``$x = $y/a/$x/$y`` that arise from one-sided nonlinear equations.
    """
    coef: Counter = Counter()
    k = 0
    for side, sign in ((lhs, 1), (rhs, -1)):
        for t in side:
            if isinstance(t, Var) and not t.atomic:
                coef[t] += sign
            else:
                k += sign
    cs = [c for c in coef.values() if c]
    # write |v| = 1 + m_v with m_v >= 0; need sum(c_v * m_v) == rest
    rest = -k - sum(cs)
    if not cs:
        return rest == 0
    if rest % gcd(*(abs(c) for c in cs)):
        return False
    if all(c > 0 for c in cs):
        return rest >= 0
    if all(c < 0 for c in cs):
        return rest <= 0
    return True


class Search:
    """One unification search; the node budget and memo table are shared by
    all sub-searches (empty-word subsets and inner packed equations)."""

    def __init__(self, budget: Budget = Budget()):
        self.budget = budget
        self.nodes = 0
        self.memo: Dict[Tuple[tuple, tuple], List[Dict[Var, tuple]]] = {}
        self._active: set = set()
        self.edges: List[Tuple[tuple, tuple, str]] = []
        self.leaves: Dict[Tuple[tuple, tuple], bool] = {}
        self._inner_depth = 0

    # one rewriting step --------------------------------------------------
    def expand(self, lhs: tuple, rhs: tuple):
        """Return ``Leaf`` or a list of ``(rho, (lhs', rhs'), tag)``."""
        if not lhs and not rhs:
            return Leaf(True)
        if not lhs or not rhs:
            return Leaf(False)
        x, y = lhs[0], rhs[0]
        w1, w2 = lhs[1:], rhs[1:]
        if x == y:
            return [({}, (w1, w2), "1")]
        kx, ky = _kind(x), _kind(y)
        out = []
        if kx == "p" and ky == "p":
            r = {x: (y, x)}
            out.append((r, ((x,) + _sub(w1, r), _sub(w2, r)), "a"))
            r = {x: (y,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), "b"))
            r = {y: (x, y)}
            out.append((r, (_sub(w1, r), (y,) + _sub(w2, r)), "c"))
        elif kx == "p" and ky in "ca":
            tag = "de" if ky == "c" else "j"
            r = {x: (y, x)}
            out.append((r, ((x,) + _sub(w1, r), _sub(w2, r)), tag[0]))
            r = {x: (y,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), tag[-1]))
        elif kx in "ca" and ky == "p":
            tag = "fg" if kx == "c" else "i"
            r = {y: (x, y)}
            out.append((r, (_sub(w1, r), (y,) + _sub(w2, r)), tag[0]))
            r = {y: (x,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), tag[-1]))
        elif kx == "a" and ky == "a":
            r = {x: (y,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), "h"))
        elif kx == "a" and ky == "c":
            r = {x: (y,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), "h'"))
        elif kx == "c" and ky == "a":
            r = {y: (x,)}
            out.append((r, (_sub(w1, r), _sub(w2, r)), "h'"))
        elif kx == "k" and ky == "k":
            for sigma in self._inner(x.items, y.items):
                out.append((sigma, (_sub(w1, sigma), _sub(w2, sigma)), "k"))
        elif kx == "k" and ky == "p":
            if y not in variables(x.items):
                r = {y: (x, y)}
                out.append((r, (_sub(w1, r), (y,) + _sub(w2, r)), "l"))
                r = {y: (x,)}
                out.append((r, (_sub(w1, r), _sub(w2, r)), "l"))
        elif kx == "p" and ky == "k":
            if x not in variables(y.items):
                r = {x: (y, x)}
                out.append((r, ((x,) + _sub(w1, r), _sub(w2, r)), "m"))
                r = {x: (y,)}
                out.append((r, (_sub(w1, r), _sub(w2, r)), "m"))
        # constant clash, atomic vs packed, packed vs constant: failure leaf
        if not out:
            return Leaf(False)
        return out

    def _inner(self, a: tuple, b: tuple) -> List[Dict[Var, tuple]]:
        self._inner_depth += 1
        try:
            return self.solve_nonempty(a, b)
        except RecursionBudgetExceeded:
            raise
        except BudgetExceeded as exc:
            raise RecursionBudgetExceeded(f"inner packed equation: {exc.what}", exc.limit) from exc
        finally:
            self._inner_depth -= 1

    # search -------------------------------------------------------------
    def solve_nonempty(self, lhs: tuple, rhs: tuple) -> List[Dict[Var, tuple]]:
        """Complete solutions assuming every path variable is nonempty.

        Each solution maps variables of the equation to expressions; the
        identity is implicit for unmentioned variables.  The graph is
        explored first; solutions are then composed along edges leading to
        a success leaf, so cycles among dead ends are harmless.
        """
        root = (lhs, rhs)
        if root in self.memo:
            return self.memo[root]
        graph = self._explore(root)
        good = self._productive(graph)
        for k in graph:
            if k not in good:
                self.memo[k] = []
        return self._compose(root, graph)

    def _explore(self, root):
        graph: Dict[Tuple[tuple, tuple], object] = {}
        stack = [(root, 0)]
        while stack:
            key, depth = stack.pop()
            if key in graph or key in self.memo:
                continue
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise BudgetExceeded("search nodes", self.budget.max_nodes)
            if depth > self.budget.max_depth:
                raise BudgetExceeded("search depth", self.budget.max_depth)
            res = self.expand(*key) if _length_feasible(*key) else Leaf(False)
            if isinstance(res, Leaf):
                self.leaves[key] = res.success
                graph[key] = res
                continue
            kids = []
            for rho, child, tag in res:
                self.edges.append((key, child, _edge_label(rho, tag)))
                kids.append((rho, child))
                stack.append((child, depth + 1))
            graph[key] = kids
        return graph

    def _productive(self, graph) -> set:
        parents: Dict[Tuple[tuple, tuple], set] = {}
        good = set()
        for k, kids in graph.items():
            if isinstance(kids, Leaf):
                if kids.success:
                    good.add(k)
                continue
            for _, c in kids:
                parents.setdefault(c, set()).add(k)
                if self.memo.get(c):
                    good.add(c)
        todo = list(good)
        while todo:
            for p in parents.get(todo.pop(), ()):
                if p not in good:
                    good.add(p)
                    todo.append(p)
        return good

    def _compose(self, key, graph) -> List[Dict[Var, tuple]]:
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        if key in self._active:
            raise BudgetExceeded("cycle in search graph")
        node = graph[key]
        if isinstance(node, Leaf):
            sols = [{}] if node.success else []
            self.memo[key] = sols
            return sols
        self._active.add(key)
        try:
            seen = set()
            sols = []
            eq_vars = variables_in_order(*key)
            for rho, child in node:
                for sigma in self._compose(child, graph):
                    comp = {}
                    for v in eq_vars:
                        img = apply_valuation(rho.get(v, (v,)), sigma)
                        if img != (v,):
                            comp[v] = img
                    k = frozenset(comp.items())
                    if k not in seen:
                        seen.add(k)
                        sols.append(comp)
        finally:
            self._active.discard(key)
        self.memo[key] = sols
        return sols

    def to_dot(self) -> str:
        ids: Dict[Tuple[tuple, tuple], str] = {}

        def nid(k):
            if k not in ids:
                ids[k] = f"n{len(ids)}"
            return ids[k]

        lines = ["digraph pigpug {", "  node [shape=box];"]
        keys = list(self.memo)
        for a, b, _ in self.edges:
            for k in (a, b):
                if k not in keys:
                    keys.append(k)
        for k in keys:
            label = f"{format_expr(k[0])} = {format_expr(k[1])}"
            style = ""
            if k in self.leaves:
                style = ", peripheries=2" if self.leaves[k] else ", style=dashed"
            lines.append(f'  {nid(k)} [label="{label}"{style}];')
        for a, b, lab in self.edges:
            lines.append(f'  {nid(a)} -> {nid(b)} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _edge_label(rho: Dict[Var, tuple], tag: str) -> str:
    if not rho:
        return tag
    return f"({tag}) " + ", ".join(f"{v} -> {format_expr(e)}" for v, e in rho.items())


def step(node: SearchNode, search: Optional[Search] = None):
    """Children of ``node`` with their rule tags, or a :class:`Leaf`."""
    search = search or Search()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    res = search.expand(node.lhs, node.rhs)
    if isinstance(res, Leaf):
        return res
    out = []
    for rho, (l, r), tag in res:
        subst = tuple((v, apply_valuation(e, rho)) for v, e in node.subst)
        out.append((SearchNode(l, r, subst), tag))
    return out


def solve(eq: Equation, budget: Budget = Budget(), search: Optional[Search] = None,
          allow_empty: bool = True) -> List[SymbolicSolution]:
    """A complete set of symbolic solutions.

    With ``allow_empty`` (the default) path variables may denote the empty
    path; otherwise the result is complete only for nonempty solutions, the
    usual convention for word equations.

    Raises :class:`BudgetExceeded` when the search does not finish within
    ``budget`` (which happens for equations without a finite complete set).
    """
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    search = search or Search(budget)
    pvars = [v for v in variables_in_order(eq.lhs, eq.rhs) if not v.atomic]
    out: Dict[SymbolicSolution, None] = {}
    for k in range(len(pvars) + 1 if allow_empty else 1):
        for ys in combinations(pvars, k):
            empty = {y: () for y in ys}
            lhs, rhs = _sub(eq.lhs, empty), _sub(eq.rhs, empty)
            for sol in search.solve_nonempty(lhs, rhs):
                full = dict(sol)
                full.update(empty)
                out.setdefault(SymbolicSolution.from_dict(full), None)
    return sorted(out, key=str)


def prune_specializations(sols: List[SymbolicSolution], domain, max_vars: int = 10) -> List[SymbolicSolution]:
    """Drop solutions obtained from another one by sending some of its range
    path variables to the empty path.  Such solutions are instances of the
    other one, so the result is still complete."""
    domain = list(domain)
    key = lambda d: tuple(d.get(v, (v,)) for v in domain)
    have = {key(s.as_dict()): s for s in sols}
    covered = set()
    for s in sols:
        d = s.as_dict()
        rv = [v for v in s.range_vars(domain) if not v.atomic]
        if len(rv) > max_vars:
            continue
        for k in range(1, len(rv) + 1):
            for ys in combinations(rv, k):
                empty = {y: () for y in ys}
                covered.add(tuple(apply_valuation(d.get(v, (v,)), empty) for v in domain))
    return [s for k, s in have.items() if k not in covered]


# ---------------------------------------------------------------------------
# ground matching


def _min_rest(tokens: tuple, b: Dict[Var, tuple]) -> List[int]:
    """Lower bounds on the length matched by each suffix of ``tokens``.
    A negative entry means the suffix has a fixed length ``-mins[i] - 1``."""
    n = len(tokens)
    mins = [0] * (n + 1)
    fixed = [True] * (n + 1)
    for i in range(n - 1, -1, -1):
        t = tokens[i]
        fixed[i] = fixed[i + 1]
        if isinstance(t, Var) and not t.atomic:
            bound = b.get(t)
            mins[i] = mins[i + 1] + (len(bound) if bound is not None else 0)
            if bound is None:
                fixed[i] = False
        else:
            mins[i] = mins[i + 1] + 1
    return [m if not fx else -m - 1 for m, fx in zip(mins, fixed)]


def match_expr(e: tuple, p: tuple, b: Optional[Dict[Var, tuple]] = None) -> Iterator[Dict[Var, tuple]]:
    """Yield every extension of ``b`` to the variables of ``e`` with
    ``e`` evaluating to ``p``."""
    b = {} if b is None else b
    yield from _match(e, 0, p, 0, b, _min_rest(e, b))


def _match(e, i, p, j, b, mins):
    # mins[i] bounds the length matched by e[i:] (see _min_rest); it is
    # computed once, so bindings made later only make it looser.
    n = len(e)
    while True:
        if i == n:
            if j == len(p):
                yield b
            return
        m = mins[i]
        if (m >= 0 and len(p) - j < m) or (m < 0 and len(p) - j != -m - 1):
            return
        t = e[i]
        if isinstance(t, str):
            if p[j] != t:
                return
            i += 1
            j += 1
            continue
        if isinstance(t, Pack):
            v = p[j]
            if not isinstance(v, Pack):
                return
            for b2 in match_expr(t.items, v.items, b):
                yield from _match(e, i + 1, p, j + 1, b2, mins)
            return
        bound = b.get(t)
        if bound is not None:
            k = len(bound)
            if p[j:j + k] != bound:
                return
            i += 1
            j += k
            continue
        if t.atomic:
            v = p[j]
            if isinstance(v, Pack):
                return
            b2 = dict(b)
            b2[t] = (v,)
            yield from _match(e, i + 1, p, j + 1, b2, mins)
            return
        m = mins[i + 1]
        if m < 0:
            b2 = dict(b)
            b2[t] = p[j:len(p) + m + 1]
            yield from _match(e, i + 1, p, len(p) + m + 1, b2, mins)
            return
        for k in range(j, len(p) - m + 1):
            b2 = dict(b)
            b2[t] = p[j:k]
            yield from _match(e, i + 1, p, k, b2, mins)
        return


def ground_match(e: tuple, p: tuple) -> List[Dict[Var, tuple]]:
    """All valuations of the variables of ``e`` mapping ``e`` to ``p``."""
    out: Dict[frozenset, Dict[Var, tuple]] = {}
    for b in match_expr(e, p):
        out.setdefault(frozenset(b.items()), b)
    return list(out.values())
