"""Ground data model and path-expression structure.

Representation
--------------
* An atomic value is a plain ``str``.
* A packed value is a :class:`Pack` whose ``items`` is a tuple of values.
* A path is a tuple of values; the empty tuple is the empty path.
* A path expression is a tuple of tokens, where a token is an atomic
  constant (``str``), a :class:`Var`, or a :class:`Pack` whose items are
  themselves tokens.

Paths are therefore exactly the variable-free path expressions, and the
conversion between the two is the identity.  Concatenation is tuple
concatenation, so nesting never happens except through packing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

__all__ = [
    "Var",
    "Pack",
    "Star",
    "EPSILON",
    "Instance",
    "path",
    "concat",
    "apply_valuation",
    "is_ground",
    "variables",
    "variables_in_order",
    "has_packing",
    "packing_depth",
    "is_flat",
    "is_flat_path",
    "packing_structure",
    "components",
    "fill_structure",
    "star_count",
    "format_expr",
    "value_key",
    "path_key",
    "tuple_key",
    "subpaths",
]

ATOM_RE = re.compile(r"[a-z0-9][a-z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Var:
    """A variable; ``atomic`` distinguishes ``@x`` from ``$x``."""

    name: str
    atomic: bool = False

    def __str__(self) -> str:
        return ("@" if self.atomic else "$") + self.name


@dataclass(frozen=True, slots=True)
class Pack:
    """A packed value or packed sub-expression ``<items>``."""

    items: tuple

    def __str__(self) -> str:
        return "<" + format_expr(self.items) + ">"


@dataclass(frozen=True, slots=True)
class Star:
    """A star in a packing structure."""

    def __str__(self) -> str:
        return "*"


STAR = Star()
EPSILON: tuple = ()

Token = Union[str, Var, Pack]
Expr = Tuple[Token, ...]
Path = tuple
Valuation = Mapping[Var, tuple]


def path(*items) -> tuple:
    """Build a path from strings, packs, or nested paths (flattened)."""
    out: List = []
    for it in items:
        if isinstance(it, tuple):
            out.extend(it)
        else:
            out.append(it)
    return tuple(out)


def concat(paths: Iterable[tuple]) -> tuple:
    out: List = []
    for p in paths:
        out.extend(p)
    return tuple(out)


def apply_valuation(e: Expr, v: Valuation) -> Expr:
    """Substitute every bound variable of ``e``; unbound ones are kept."""
    # Rule expressions have few variables but their values can be long,
    # so whole values are concatenated instead of copied token by token.
    out: tuple = ()
    run: List = []
    for t in e:
        if isinstance(t, Var):
            b = v.get(t)
            if b is None:
                run.append(t)
            else:
                if run:
                    out += tuple(run)
                    run = []
                out += b
        elif isinstance(t, Pack):
            run.append(Pack(apply_valuation(t.items, v)))
        else:
            run.append(t)
    if run:
        out += tuple(run)
    return out


def is_ground(e: Expr) -> bool:
    for t in e:
        if isinstance(t, Var):
            return False
        if isinstance(t, Pack) and not is_ground(t.items):
            return False
    return True


def _walk_vars(e: Expr) -> Iterator[Var]:
    for t in e:
        if isinstance(t, Var):
            yield t
        elif isinstance(t, Pack):
            yield from _walk_vars(t.items)


def variables(e: Expr) -> frozenset:
    return frozenset(_walk_vars(e))


def variables_in_order(*exprs: Expr) -> List[Var]:
    """Distinct variables in order of first occurrence across ``exprs``."""
    seen: Dict[Var, None] = {}
    for e in exprs:
        for x in _walk_vars(e):
            seen.setdefault(x, None)
    return list(seen)


def has_packing(e: Expr) -> bool:
    return any(isinstance(t, Pack) for t in e)


def packing_depth(e: Expr) -> int:
    depth = 0
    for t in e:
        if isinstance(t, Pack):
            depth = max(depth, 1 + packing_depth(t.items))
    return depth


def is_flat_path(p: tuple) -> bool:
    return not has_packing(p)


# ---------------------------------------------------------------------------
# Packing structures


def packing_structure(e: Expr) -> tuple:
    """Shape of ``e``: packing-free segments collapsed to single stars.

    Returned as a tuple over ``STAR`` and ``Pack`` (whose items are again a
    packing structure), so structures compare and hash structurally.
    """
    out: List = [STAR]
    for t in e:
        if isinstance(t, Pack):
            out.append(Pack(packing_structure(t.items)))
            out.append(STAR)
    return tuple(out)


def components(e: Expr) -> List[Expr]:
    """The packing-free subexpressions standing at the stars of ``ps(e)``."""
    comps: List[Expr] = []
    cur: List = []
    for t in e:
        if isinstance(t, Pack):
            comps.append(tuple(cur))
            comps.extend(components(t.items))
            cur = []
        else:
            cur.append(t)
    comps.append(tuple(cur))
    return comps


def star_count(ps: tuple) -> int:
    n = 0
    for t in ps:
        if isinstance(t, Pack):
            n += star_count(t.items)
        else:
            n += 1
    return n


def fill_structure(ps: tuple, parts: List[Expr]) -> Expr:
    """Inverse of :func:`components`: put ``parts`` at the stars of ``ps``."""
    it = iter(parts)

    def go(s: tuple) -> List:
        out: List = []
        for t in s:
            if isinstance(t, Pack):
                out.append(Pack(tuple(go(t.items))))
            else:
                out.extend(next(it))
        return out

    res = tuple(go(ps))
    if next(it, None) is not None:
        raise ValueError("too many parts for packing structure")
    return res


# ---------------------------------------------------------------------------
# Ordering and printing


def value_key(v) -> tuple:
    if isinstance(v, Pack):
        return (1, path_key(v.items))
    if isinstance(v, Var):
        return (2, v.atomic, v.name)
    return (0, v)


def path_key(p: tuple) -> tuple:
    return tuple(value_key(v) for v in p)


def tuple_key(t: tuple) -> tuple:
    return tuple(path_key(p) for p in t)


def format_expr(e: Expr) -> str:
    if not e:
        return "!"
    return "/".join(str(t) for t in e)


def subpaths(p: tuple) -> List[tuple]:
    """All contiguous subsequences of ``p`` including ``()`` and ``p``."""
    n = len(p)
    out = {()}
    for i in range(n):
        for j in range(i + 1, n + 1):
            out.add(p[i:j])
    return sorted(out, key=path_key)


# ---------------------------------------------------------------------------
# Instances


class Instance:
    """An immutable finite set of facts, grouped by relation name.

    Each relation carries an arity; every tuple has exactly that many
    paths.  Nullary relations are true iff they contain the empty tuple.
    """

    __slots__ = ("_rels", "_arity")

    def __init__(self, relations: Mapping[str, Iterable[tuple]] = (), arities: Mapping[str, int] | None = None):
        rels: Dict[str, frozenset] = {}
        ar: Dict[str, int] = dict(arities or {})
        items = relations.items() if isinstance(relations, Mapping) else relations
        for name, tuples in items:
            ts = frozenset(tuple(t) for t in tuples)
            if name not in ar:
                if not ts:
                    raise ValueError(f"cannot infer arity of empty relation {name}")
                ar[name] = len(next(iter(ts)))
            for t in ts:
                if len(t) != ar[name]:
                    raise ValueError(f"tuple {t!r} does not have arity {ar[name]} of {name}")
            rels[name] = ts
        for name in ar:
            rels.setdefault(name, frozenset())
        self._rels = rels
        self._arity = ar

    @classmethod
    def from_facts(cls, facts: Iterable[Tuple[str, tuple]], arities: Mapping[str, int] | None = None) -> "Instance":
        grouped: Dict[str, set] = {}
        ar = dict(arities or {})
        for name, t in facts:
            t = tuple(t)
            if ar.setdefault(name, len(t)) != len(t):
                raise ValueError(f"relation {name} used with arities {ar[name]} and {len(t)}")
            grouped.setdefault(name, set()).add(t)
        return cls(grouped, ar)

    def __getitem__(self, name: str) -> frozenset:
        return self._rels[name]

    def get(self, name: str, default=frozenset()) -> frozenset:
        return self._rels.get(name, default)

    def __contains__(self, name: str) -> bool:
        return name in self._rels

    def __iter__(self):
        return iter(sorted(self._rels))

    def __len__(self) -> int:
        return len(self._rels)

    def arity(self, name: str) -> int:
        return self._arity[name]

    @property
    def arities(self) -> Dict[str, int]:
        return dict(self._arity)

    def relations(self) -> Dict[str, frozenset]:
        return dict(self._rels)

    def facts(self) -> List[Tuple[str, tuple]]:
        out = []
        for name in sorted(self._rels):
            for t in sorted(self._rels[name], key=tuple_key):
                out.append((name, t))
        return out

    def restrict(self, names: Iterable[str]) -> "Instance":
        names = set(names)
        return Instance({n: r for n, r in self._rels.items() if n in names},
                        {n: a for n, a in self._arity.items() if n in names})

    def union(self, other: "Instance") -> "Instance":
        rels = dict(self._rels)
        ar = dict(self._arity)
        for n in other:
            if n in ar and ar[n] != other.arity(n):
                raise ValueError(f"arity clash on {n}")
            ar[n] = other.arity(n)
            rels[n] = rels.get(n, frozenset()) | other[n]
        return Instance(rels, ar)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self._rels == other._rels and self._arity == other._arity

    def __hash__(self) -> int:
        return hash(frozenset(self._rels.items()))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{n}({', '.join(format_expr(p) for p in t)})" for n, t in self.facts()
        )
        return "Instance{" + body + "}"


def is_flat(i: Instance) -> bool:
    return all(not has_packing(p) for n in i for t in i[n] for p in t)
