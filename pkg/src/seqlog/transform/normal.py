"""Normal form for nonrecursive, equation-free programs: every rule takes
one of six shapes that map directly onto algebra operators.

1. ``R1(v1..vn) :- R2(e1..em).``
2. ``R1(v1..vn, e) :- R2(v1..vn).``
3. ``R1(v1..vn) :- R2(x1..xk), R3(y1..yl).``
4. ``R1(v1..vn) :- R2(v1..vn), not R3(v'1..v'm).``
5. ``R1(v'1..v'm) :- R2(v1..vn).``
6. ``R(p).``

The ``v`` are distinct variables (path variables outside form 1), the
``x``/``y`` are path variables covering the head, the ``v'`` are distinct
and taken from the ``v``, and ``p`` is ground.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set

from ..analysis import is_recursive
from ..core import Var, is_ground, variables_in_order
from ..errors import EquationsPresent, RecursionPresent
from ..program import Literal, Predicate, Program, Rule, neg, pos
from .common import Fresh, subst_rule, var_args

FILLER = "a"


def _single_vars(args, path_only: bool) -> Optional[List[Var]]:
    out = []
    for a in args:
        if len(a) != 1 or not isinstance(a[0], Var):
            return None
        if path_only and a[0].atomic:
            return None
        out.append(a[0])
    return out


def _distinct(vs) -> bool:
    return vs is not None and len(set(vs)) == len(vs)


def rule_forms(r: Rule) -> Set[int]:
    """The normal forms (1 to 6) that ``r`` matches; empty if none."""
    forms: Set[int] = set()
    body = r.body
    head = r.head
    if not body:
        if all(is_ground(a) for a in head.args):
            forms.add(6)
        return forms
    pos_preds = r.positive_predicates()
    neg_preds = r.negative_predicates()
    if any(l.is_equation for l in body):
        return forms
    hv_any = _single_vars(head.args, path_only=False)
    hv = _single_vars(head.args, path_only=True)
    if len(body) == 1 and pos_preds:
        q = pos_preds[0]
        if _distinct(hv_any):
            forms.add(1)
        bv = _single_vars(q.args, path_only=True)
        if _distinct(bv):
            n = len(bv)
            if head.arity == n + 1 and _single_vars(head.args[:n], True) == bv:
                if set(variables_in_order(head.args[n])) <= set(bv):
                    forms.add(2)
            if _distinct(hv) and set(hv) <= set(bv):
                forms.add(5)
    if len(body) == 2 and len(pos_preds) == 2:
        xs = _single_vars(pos_preds[0].args, True)
        ys = _single_vars(pos_preds[1].args, True)
        if xs is not None and ys is not None and _distinct(hv) and set(hv) <= set(xs) | set(ys):
            forms.add(3)
    if len(body) == 2 and len(pos_preds) == 1 and len(neg_preds) == 1:
        bv = _single_vars(pos_preds[0].args, True)
        nv = _single_vars(neg_preds[0].args, True)
        if _distinct(bv) and hv == bv and _distinct(nv) and set(nv) <= set(bv):
            forms.add(4)
    return forms


class _RuleNormalizer:
    def __init__(self, fresh: Fresh):
        self.fresh = fresh
        self.out: List[Rule] = []

    def pvars(self, base: str, n: int) -> List[Var]:
        return [self.fresh.var(base) for _ in range(n)]

    def join(self, atoms: List[Predicate], base: str) -> Predicate:
        """Combine positive atoms pairwise into one (form 3 rules)."""
        atoms = list(atoms)
        while len(atoms) > 1:
            a, b = atoms.pop(0), atoms.pop(0)
            vs = list(dict.fromkeys(_single_vars(a.args, True) + _single_vars(b.args, True)))
            h = Predicate(self.fresh.rel(base), var_args(vs))
            self.out.append(Rule(h, (pos(a), pos(b))))
            atoms.insert(0, h)
        return atoms[0]

    def chain(self, start: Predicate, exprs: Sequence[tuple], base: str, vbase: str):
        """Form 2 rules appending ``exprs`` one column at a time; returns the
        last atom and the variables naming the appended columns."""
        vs = _single_vars(start.args, True)
        new: List[Var] = []
        cur = start
        for e in exprs:
            nxt = self.fresh.rel(base)
            self.out.append(Rule(Predicate(nxt, var_args(vs + new) + (e,)), (pos(cur),)))
            new.append(self.fresh.var(vbase))
            cur = Predicate(nxt, var_args(vs + new))
        return cur, new

    def run(self, r: Rule) -> List[Rule]:
        # atomic variables of the main rule become path variables; the form 1
        # rules below still bind them atomically
        names = {v.name for v in r.variables() if not v.atomic}
        ren: Dict[Var, tuple] = {}
        for v in r.variables():
            if v.atomic:
                ren[v] = (Var(v.name) if v.name not in names else self.fresh.var(v.name),)
                names.add(ren[v][0].name)

        # step 1.1: one form 1 rule per positive atom
        atoms: List[Predicate] = []
        for q in r.positive_predicates():
            vs = variables_in_order(*q.args)
            if vs:
                h = self.fresh.rel("H")
                self.out.append(Rule(Predicate(h, var_args(vs)), (pos(q),)))
                atoms.append(Predicate(h, tuple(ren.get(v, (v,)) for v in vs)))
            else:
                h1, h = self.fresh.rel("H"), self.fresh.rel("H")
                self.out.append(Rule(Predicate(h1), (pos(q),)))
                self.out.append(Rule(Predicate(h, ((FILLER,),)), (pos(Predicate(h1)),)))
                atoms.append(Predicate(h, ((self.fresh.var("v"),),)))
        # step 1.2
        if not atoms:
            c = self.fresh.rel("C")
            self.out.append(Rule(Predicate(c, ((FILLER,),))))
            atoms.append(Predicate(c, ((self.fresh.var("v"),),)))
        main = self.join(atoms, "H")
        vs = _single_vars(main.args, True)
        head = Predicate(r.head.relation, tuple(subst_rule(Rule(r.head), ren).head.args))
        negs = [subst_rule(Rule(r.head, (neg(q),)), ren).body[0].atom for q in r.negative_predicates()]

        # steps 2 and 3: one filtered copy of the main atom per negated atom
        if negs:
            filtered = []
            for q in negs:
                hn = Predicate(self.fresh.rel("HN"), main.args)
                filtered.append(hn)
                nv = _single_vars(q.args, True)
                if _distinct(nv) and set(nv) <= set(vs):
                    self.out.append(Rule(hn, (pos(main), neg(q))))
                    continue
                last, new = self.chain(main, q.args, "N", "n")
                fn = Predicate(self.fresh.rel("FN"), last.args)
                self.out.append(Rule(fn, (pos(last), neg(Predicate(q.relation, var_args(new))))))
                self.out.append(Rule(hn, (pos(fn),)))
            main = self.join(filtered, "HN")

        # step 4: head expressions
        final = Rule(head, (pos(main),))
        if 5 in rule_forms(final):
            self.out.append(final)
        else:
            last, new = self.chain(main, head.args, r.head.relation, "t")
            self.out.append(Rule(Predicate(r.head.relation, var_args(new)), (pos(last),)))
        return self.out


def normalize_rule(r: Rule, fresh: Fresh) -> List[Rule]:
    if rule_forms(r) - {1}:
        return [r]
    return _RuleNormalizer(fresh).run(r)


def normalize(p: Program) -> Program:
    """Equivalent program whose rules all have one of the six forms.
    Strata are preserved; new rules join the stratum of their source rule."""
    if any(l.is_equation for r in p.rules for l in r.body):
        raise EquationsPresent("normalize needs an equation-free program; eliminate equations first")
    if is_recursive(p):
        raise RecursionPresent("normalize needs a nonrecursive program")
    fresh = Fresh(p)
    return Program(tuple(tuple(x for r in s for x in normalize_rule(r, fresh)) for s in p.strata))


def check_normal_form(p: Program) -> List[Rule]:
    """Rules of ``p`` matching none of the six forms."""
    return [r for r in p.rules if not rule_forms(r)]
