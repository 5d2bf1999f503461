"""Doubling ``k1..kn`` to ``k1 k1 .. kn kn`` and back, without negation."""
from __future__ import annotations

from typing import Optional

from ..core import Var
from ..program import Predicate, Program, Rule, pos
from .common import Fresh

_X, _Z = Var("x"), Var("z")
_Y = Var("y", atomic=True)


def _fragment(src: str, dst: str, helper: str, forward: bool) -> Program:
    t = lambda a, b: Predicate(helper, (a, b))
    if forward:
        rules = [
            Rule(t((), (_X,)), (pos(Predicate(src, ((_X,),))),)),
            Rule(t((_X, _Y, _Y), (_Z,)), (pos(t((_X,), (_Y, _Z))),)),
            Rule(Predicate(dst, ((_X,),)), (pos(t((_X,), ())),)),
        ]
    else:
        rules = [
            Rule(t((_X,), ()), (pos(Predicate(src, ((_X,),))),)),
            Rule(t((_X,), (_Y, _Z)), (pos(t((_X, _Y, _Y), (_Z,))),)),
            Rule(Predicate(dst, ((_X,),)), (pos(t((), (_X,))),)),
        ]
    return Program.single(rules)


def make_doubler(rel: str, out: Optional[str] = None, fresh: Optional[Fresh] = None) -> Program:
    """Rules computing in ``out`` (default ``rel'``) the doubled paths of ``rel``."""
    fresh = fresh or Fresh(names=[rel])
    return _fragment(rel, out or rel + "'", fresh.rel("T"), True)


def make_undoubler(rel: str, out: Optional[str] = None, fresh: Optional[Fresh] = None) -> Program:
    """Rules computing in ``out`` the undoubled paths of the doubled ``rel``.
    Paths of odd shape have no preimage and are dropped."""
    if out is None:
        out = rel[:-1] if rel.endswith("'") else rel + "'"
    fresh = fresh or Fresh(names=[rel, out])
    return _fragment(rel, out, fresh.rel("T"), False)
