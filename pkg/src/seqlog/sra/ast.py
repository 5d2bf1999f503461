"""Sequence relational algebra expressions.

Column references inside selection and projection expressions are path
variables named by position: ``Var("1")`` is the first column, written
``$1``.  Column indices of ``Unpack`` and ``Sub`` are 1-based as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Mapping, Optional, Tuple, Union

from ..core import Var, variables
from ..errors import ArityError, UnknownRelation

__all__ = [
    "Rel", "ConstRel", "Select", "Project", "Unpack", "Sub", "Union", "Diff", "Product",
    "AlgebraExpr", "col", "arity", "children",
]


def col(i: int) -> Var:
    return Var(str(i))


@dataclass(frozen=True, eq=False)
class Rel:
    name: str
    arity: Optional[int] = None


@dataclass(frozen=True, eq=False)
class ConstRel:
    arity: int
    tuples: FrozenSet[tuple]


@dataclass(frozen=True, eq=False)
class Select:
    lhs: tuple
    rhs: tuple
    child: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Project:
    exprs: Tuple[tuple, ...]
    child: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Unpack:
    index: int
    child: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Sub:
    index: int
    child: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Union:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Diff:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


@dataclass(frozen=True, eq=False)
class Product:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


AlgebraExpr = (Rel, ConstRel, Select, Project, Unpack, Sub, Union, Diff, Product)


def children(e) -> tuple:
    if isinstance(e, (Rel, ConstRel)):
        return ()
    if isinstance(e, (Select, Project, Unpack, Sub)):
        return (e.child,)
    return (e.left, e.right)


def _check_cols(exprs, n: int, what: str):
    for x in exprs:
        for v in variables(x):
            if v.atomic or not v.name.isdigit() or not 1 <= int(v.name) <= n:
                raise ArityError(f"{what} refers to {v} but the input has {n} columns")


def arity(e, schema: Optional[Mapping[str, int]] = None, _memo=None) -> int:
    """Static arity; ``schema`` supplies arities of relations whose ``Rel``
    leaf does not carry one.  Also validates column references."""
    memo = {} if _memo is None else _memo
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Rel):
        if e.arity is not None:
            n = e.arity
        elif schema is not None and e.name in schema:
            n = schema[e.name]
        else:
            raise UnknownRelation(f"arity of relation {e.name} is unknown")
    elif isinstance(e, ConstRel):
        n = e.arity
    elif isinstance(e, Select):
        n = arity(e.child, schema, memo)
        _check_cols((e.lhs, e.rhs), n, "selection")
    elif isinstance(e, Project):
        _check_cols(e.exprs, arity(e.child, schema, memo), "projection")
        n = len(e.exprs)
    elif isinstance(e, (Unpack, Sub)):
        m = arity(e.child, schema, memo)
        if not 1 <= e.index <= m:
            raise ArityError(f"column {e.index} out of range for arity {m}")
        n = m + 1 if isinstance(e, Sub) else m
    elif isinstance(e, (Union, Diff)):
        a, b = arity(e.left, schema, memo), arity(e.right, schema, memo)
        if a != b:
            raise ArityError(f"{type(e).__name__.lower()} of arities {a} and {b}")
        n = a
    elif isinstance(e, Product):
        n = arity(e.left, schema, memo) + arity(e.right, schema, memo)
    else:
        raise TypeError(f"not an algebra expression: {e!r}")
    memo[key] = n
    return n
