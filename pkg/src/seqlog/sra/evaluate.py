"""Set-semantics evaluation of algebra expressions."""
from __future__ import annotations

from typing import Dict, FrozenSet, Set

from ..core import Instance, Pack, Var, subpaths, variables
from ..errors import ArityError, UnknownRelation
from .ast import ConstRel, Diff, Product, Project, Rel, Select, Sub, Union, Unpack, col

Relation = FrozenSet[tuple]


def _compile(e: tuple, offset: int = 0):
    """Function from a tuple to the value of column expression ``e``; column
    ``$k`` reads position ``k - 1 - offset``."""
    if len(e) == 1 and isinstance(e[0], Var):
        k = int(e[0].name) - 1 - offset
        return lambda t: t[k]
    parts = []
    for x in e:
        if isinstance(x, Var):
            parts.append((0, int(x.name) - 1 - offset))
        elif isinstance(x, Pack):
            parts.append((1, _compile(x.items, offset)))
        else:
            parts.append((2, x))

    def run(t):
        out = []
        for kind, x in parts:
            if kind == 0:
                out.extend(t[x])
            elif kind == 1:
                out.append(Pack(x(t)))
            else:
                out.append(x)
        return tuple(out)

    return run


def _cols(e: tuple) -> Set[int]:
    return {int(v.name) for v in variables(e)}


def _width(rel) -> int:
    for t in rel:
        return len(t)
    return -1


def _same_width(a, b, what: str):
    wa, wb = _width(a), _width(b)
    if wa >= 0 and wb >= 0 and wa != wb:
        raise ArityError(f"{what} of arities {wa} and {wb}")


def eval_expr(e, i: Instance) -> Relation:
    """Evaluate ``e`` on ``i``.  Relations missing from ``i`` are empty if the
    ``Rel`` leaf states its arity, and an error otherwise."""
    return _Evaluator(i).run(e)


class _Evaluator:
    def __init__(self, i: Instance):
        self.i = i
        self.memo: Dict[int, Relation] = {}

    def run(self, e) -> Relation:
        key = id(e)
        got = self.memo.get(key)
        if got is None:
            got = frozenset(self._eval(e))
            self.memo[key] = got
        return got

    def _eval(self, e):
        if isinstance(e, Rel):
            if e.name in self.i:
                rel = self.i[e.name]
                if e.arity is not None and rel and self.i.arity(e.name) != e.arity:
                    raise ArityError(f"relation {e.name} has arity {self.i.arity(e.name)}, expected {e.arity}")
                return rel
            if e.arity is None:
                raise UnknownRelation(f"relation {e.name} is not in the instance")
            return ()
        if isinstance(e, ConstRel):
            return e.tuples
        if isinstance(e, Select):
            if isinstance(e.child, Product):
                joined = self._hash_join(e)
                if joined is not None:
                    return joined
            f, g = _compile(e.lhs), _compile(e.rhs)
            return (t for t in self.run(e.child) if f(t) == g(t))
        if isinstance(e, Project):
            fs = [_compile(x) for x in e.exprs]
            return {tuple(f(t) for f in fs) for t in self.run(e.child)}
        if isinstance(e, Unpack):
            out = set()
            k = e.index - 1
            for t in self.run(e.child):
                if k >= len(t):
                    raise ArityError(f"unpack column {e.index} out of range")
                c = t[k]
                if len(c) == 1 and isinstance(c[0], Pack):
                    out.add(t[:k] + (c[0].items,) + t[k + 1:])
            return out
        if isinstance(e, Sub):
            out = set()
            k = e.index - 1
            for t in self.run(e.child):
                if k >= len(t):
                    raise ArityError(f"sub column {e.index} out of range")
                for s in subpaths(t[k]):
                    out.add(t + (s,))
            return out
        if isinstance(e, Union):
            a, b = self.run(e.left), self.run(e.right)
            _same_width(a, b, "union")
            return a | b
        if isinstance(e, Diff):
            a, b = self.run(e.left), self.run(e.right)
            _same_width(a, b, "difference")
            return a - b
        if isinstance(e, Product):
            a, b = self.run(e.left), self.run(e.right)
            return {x + y for x in a for y in b}
        raise TypeError(f"not an algebra expression: {e!r}")

    def _hash_join(self, e: Select):
        left, right = self.run(e.child.left), self.run(e.child.right)
        if not left or not right:
            return ()
        n = _width(left)
        lc, rc = _cols(e.lhs), _cols(e.rhs)
        if all(c <= n for c in lc) and all(c > n for c in rc):
            lx, rx = e.lhs, e.rhs
        elif all(c <= n for c in rc) and all(c > n for c in lc):
            lx, rx = e.rhs, e.lhs
        else:
            return None
        f, g = _compile(lx), _compile(rx, n)
        index: Dict[tuple, list] = {}
        for y in right:
            index.setdefault(g(y), []).append(y)
        out = set()
        for x in left:
            for y in index.get(f(x), ()):
                out.add(x + y)
        return out
