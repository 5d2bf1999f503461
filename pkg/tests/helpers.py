"""Shared test utilities: small parsing shortcuts and brute-force oracles."""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Set

from seqlog.core import Pack, Var, apply_valuation, subpaths, variables
from seqlog.syntax import parse_expr, parse_instance, parse_program


def E(text: str) -> tuple:
    return parse_expr(text)


def P(text: str):
    return parse_program(text)


def I(text: str):
    return parse_instance(text)


def facts(i, name: str) -> Set[tuple]:
    return set(i.get(name))


def paths_of(i) -> Set[tuple]:
    """Every subpath (at any packing depth) of every path in ``i``."""
    out: Set[tuple] = {()}
    for n in i:
        for t in i[n]:
            for p in t:
                out.update(subpaths(p))
    return out


def brute_valuations(exprs: Iterable[tuple], universe: Iterable[tuple]) -> List[Dict[Var, tuple]]:
    """All valuations of the variables of ``exprs`` into ``universe``."""
    vs = sorted(set().union(*(variables(e) for e in exprs)), key=lambda v: (v.name, v.atomic))
    universe = sorted(set(universe), key=repr)
    atoms = [p for p in universe if len(p) == 1 and not isinstance(p[0], Pack)]
    pools = [atoms if v.atomic else universe for v in vs]
    return [dict(zip(vs, combo)) for combo in itertools.product(*pools)]


def ground(e: tuple, v) -> tuple:
    return apply_valuation(e, v)


# ---------------------------------------------------------------------------
# unification oracle


def bounded_paths(alphabet, max_len: int) -> List[tuple]:
    out = []
    for n in range(max_len + 1):
        out.extend(itertools.product(alphabet, repeat=n))
    return out


def side_valuations(e: tuple, path_domain, atom_domain) -> Dict[tuple, List[Dict[Var, tuple]]]:
    """Ground value of ``e`` -> valuations producing it."""
    vs = sorted(variables(e), key=lambda v: (v.name, v.atomic))
    pools = [[(a,) for a in atom_domain] if v.atomic else path_domain for v in vs]
    out: Dict[tuple, List[Dict[Var, tuple]]] = {}
    for combo in itertools.product(*pools):
        val = dict(zip(vs, combo))
        out.setdefault(apply_valuation(e, val), []).append(val)
    return out


def satisfying_valuations(lhs: tuple, rhs: tuple, path_domain, atom_domain) -> List[Dict[Var, tuple]]:
    """All bounded solutions of an equation whose sides share no variable."""
    assert not (variables(lhs) & variables(rhs))
    left = side_valuations(lhs, path_domain, atom_domain)
    right = side_valuations(rhs, path_domain, atom_domain)
    out = []
    for g, ls in left.items():
        for l in ls:
            for r in right.get(g, ()):
                out.append({**l, **r})
    return out


def _match_pairs(pairs, nu, lo: int) -> bool:
    if not pairs:
        return True
    (e, p), rest = pairs[0], pairs[1:]
    if not e:
        return not p and _match_pairs(rest, nu, lo)
    t = e[0]
    if isinstance(t, str):
        return bool(p) and p[0] == t and _match_pairs([(e[1:], p[1:])] + rest, nu, lo)
    if isinstance(t, Pack):
        return (bool(p) and isinstance(p[0], Pack)
                and _match_pairs([(t.items, p[0].items), (e[1:], p[1:])] + rest, nu, lo))
    if t in nu:
        b = nu[t]
        return p[:len(b)] == b and _match_pairs([(e[1:], p[len(b):])] + rest, nu, lo)
    if t.atomic:
        if not p or isinstance(p[0], Pack):
            return False
        return _match_pairs([(e[1:], p[1:])] + rest, {**nu, t: p[:1]}, lo)
    return any(_match_pairs([(e[1:], p[k:])] + rest, {**nu, t: p[:k]}, lo) for k in range(lo, len(p) + 1))


def covers(rho: Dict[Var, tuple], val: Dict[Var, tuple], nonempty: bool = False) -> bool:
    """Whether ``val`` is an instance of the substitution ``rho``; with
    ``nonempty`` the instantiating path values must be nonempty."""
    return _match_pairs([(rho.get(v, (v,)), p) for v, p in val.items()], {}, 1 if nonempty else 0)


def random_one_sided_equation(rng, max_vars: int = 4, max_tokens: int = 6):
    """Random equation whose sides use disjoint variables, one side using
    each of its variables at most once, with packing depth at most one."""
    names = ["x", "y", "z", "w"][:max_vars]
    k = rng.randint(0, max_vars)
    vs = [Var(n, rng.random() < 0.3) for n in names[:k]]
    split = rng.randint(0, k)
    left, right = vs[:split], vs[split:]

    def side(pool, linear):
        pool = list(pool)
        toks = []

        def pick():
            v = rng.choice(pool)
            if linear:
                pool.remove(v)
            return v

        for _ in range(rng.randint(0, max_tokens)):
            r = rng.random()
            if r < 0.15:
                inner = [pick() if pool and rng.random() < 0.5 else rng.choice("ab")
                         for _ in range(rng.randint(0, 2))]
                toks.append(Pack(tuple(inner)))
            elif pool and r < 0.6:
                toks.append(pick())
            else:
                toks.append(rng.choice("ab"))
        return tuple(toks)

    if rng.random() < 0.5:
        return side(left, False), side(right, True)
    return side(left, True), side(right, False)


def planted_one_sided_equation(rng, max_vars: int = 4, max_tokens: int = 6):
    """Random satisfiable equation of the same shape: the right side is a
    ground instance of the left side with some segments replaced by fresh
    variables, each used once."""
    from seqlog.gen import random_path

    for _ in range(100):
        lhs, _ = random_one_sided_equation(rng, max_vars, max_tokens)
        used = sorted(variables(lhs), key=lambda v: v.name)
        val = {v: (rng.choice("ab"),) if v.atomic else random_path(rng, ("a", "b"), 2) for v in used}
        word = apply_valuation(lhs, val)
        free = [n for n in ["x", "y", "z", "w"][:max_vars] if n not in {v.name for v in used}]
        rhs, k = [], 0
        while k < len(word):
            if free and rng.random() < 0.4:
                n = rng.randint(1, min(3, len(word) - k))
                atomic = n == 1 and not isinstance(word[k], Pack) and rng.random() < 0.3
                rhs.append(Var(free.pop(0), atomic))
                k += n
            else:
                rhs.append(word[k])
                k += 1
        if len(rhs) <= max_tokens:
            return (lhs, tuple(rhs)) if rng.random() < 0.5 else (tuple(rhs), lhs)
    return random_one_sided_equation(rng, max_vars, max_tokens)


def subpaths_deep(p: tuple) -> Set[tuple]:
    out: Set[tuple] = set()
    for i in range(len(p) + 1):
        for j in range(i, len(p) + 1):
            out.add(p[i:j])
    for v in p:
        if isinstance(v, Pack):
            out |= subpaths_deep(v.items)
    return out


# ---------------------------------------------------------------------------
# least-model oracle for semipositive programs


def deep_size(p: tuple) -> int:
    return sum(1 + (deep_size(v.items) if isinstance(v, Pack) else 0) for v in p)


class Diverges(Exception):
    pass


def _literal_holds(lit, val, rels) -> bool:
    from seqlog.program import Predicate

    a = lit.atom
    if isinstance(a, Predicate):
        held = tuple(apply_valuation(e, val) for e in a.args) in rels.get(a.relation, set())
    else:
        held = apply_valuation(a.lhs, val) == apply_valuation(a.rhs, val)
    return held != lit.negated


def _consequences(rules, rels):
    universe: Set[tuple] = {()}
    for ts in rels.values():
        for t in ts:
            for p in t:
                universe |= subpaths_deep(p)
    out = set()
    for r in rules:
        for val in brute_valuations(r.exprs(), universe):
            if all(_literal_holds(l, val, rels) for l in r.body):
                out.add((r.head.relation, tuple(apply_valuation(e, val) for e in r.head.args)))
    return out


def least_model(rules, instance, max_size: int = 8):
    """Least fixpoint of the immediate-consequence operator, computed with
    brute-force valuations.  Only valid when every variable of every rule
    occurs in a positive body predicate.  Raises :class:`Diverges` once a
    path longer than ``max_size`` is derived."""
    rels = {n: set(instance[n]) for n in instance}
    while True:
        new = {(n, t) for n, t in _consequences(rules, rels) if t not in rels.get(n, set())}
        if not new:
            return rels
        for n, t in new:
            if any(deep_size(p) > max_size for p in t):
                raise Diverges()
            rels.setdefault(n, set()).add(t)


def is_model(rules, rels) -> bool:
    return all((n, t) in {(m, s) for m in rels for s in rels[m]} for n, t in _consequences(rules, rels))


def random_semipositive_rules(rng, max_rules: int = 3):
    """Random rules over EDB R/1, S/1 and IDB T/1, U/2 with at most two
    variables per rule, negation only on EDB relations, and every variable
    bound by a positive predicate.  Bodies are biased towards matching
    something on small instances."""
    from seqlog.program import Equation, Literal, Predicate, Rule

    arity = {"R": 1, "S": 1, "T": 1, "U": 2}
    rules = []
    for k in range(rng.randint(1, max_rules)):
        vs = [Var(n, n == "u") for n in rng.sample(["x", "y", "u"], 2)]

        def expr(pool, k):
            toks = []
            for _ in range(rng.randint(0, k)):
                r = rng.random()
                if pool and r < 0.6:
                    toks.append(rng.choice(pool))
                elif r < 0.9:
                    toks.append(rng.choice("ab"))
                else:
                    toks.append(Pack(tuple(expr(pool, 1))))
            return tuple(toks)

        suffix = expr([], 1) if rng.random() < 0.3 else ()
        first = Predicate(rng.choice(["R", "S"]), (tuple(rng.sample(vs, rng.randint(1, 2))) + suffix,))
        body = [Literal(first)]
        if k > 0 and rng.random() < 0.8:
            rel = rng.choice(["R", "S", "T", "T", "U", "U"])
            args = [(rng.choice(vs),) if rng.random() < 0.7 else expr(vs, 2) for _ in range(arity[rel])]
            body.append(Literal(Predicate(rel, tuple(args))))
        bound = set().union(*(variables(e) for l in body for e in l.atom.args))
        pool = sorted(bound, key=lambda v: v.name)
        if rng.random() < 0.3:
            body.append(Literal(Predicate(rng.choice(["R", "S"]), (expr(pool, 2),)), negated=True))
        if rng.random() < 0.3:
            body.append(Literal(Equation(expr(pool, 2), expr(pool, 2)), negated=rng.random() < 0.5))
        head_rel = rng.choice(["T", "U"])
        rule = Rule(Predicate(head_rel, tuple(expr(pool, 3) for _ in range(arity[head_rel]))), tuple(body))
        rules.append(rule)
    return rules


def random_small_instance(rng, max_facts: int = 6):
    """At least one fact in each of R and S, at most ``max_facts`` in total."""
    from seqlog.core import Instance

    n = rng.randint(2, max_facts)
    k = rng.randint(1, n - 1)
    paths = lambda m: {(tuple(rng.choice("ab") for _ in range(rng.randint(0, 3))),) for _ in range(m)}
    return Instance({"R": paths(k), "S": paths(n - k)})


# ---------------------------------------------------------------------------
# equivalence harness


def edb_schema(p) -> Dict[str, int]:
    ar = p.arities()
    return {n: ar[n] for n in p.edb()}


def seeded_instance(rng, p, alphabet=("a", "b"), max_len: int = 3, noise: int = 4, pack_prob: float = 0.0):
    """Random instance over the EDB of ``p`` that also contains, for a few
    random valuations, the ground EDB atoms of rule bodies.  Plain random
    data rarely satisfies bodies with constants or repeated variables."""
    from seqlog.core import Instance
    from seqlog.gen import random_path

    schema = edb_schema(p)
    fs = []
    for name, k in schema.items():
        for _ in range(rng.randint(0, noise)):
            fs.append((name, tuple(random_path(rng, alphabet, max_len, pack_prob) for _ in range(k))))
    for r in p.rules:
        if rng.random() < 0.5:
            continue
        val = {}
        for v in r.variables():
            if v.atomic:
                val[v] = (rng.choice(alphabet),)
            else:
                val[v] = random_path(rng, alphabet, 2, pack_prob)
        for lit in r.body:
            a = lit.atom
            if lit.is_predicate and a.relation in schema and (not lit.negated or rng.random() < 0.4):
                t = tuple(apply_valuation(e, val) for e in a.args)
                if all(not variables(x) for x in t):
                    fs.append((a.relation, t))
    return Instance.from_facts(fs, schema)


def first_difference(p, q, outs, instances, budget=None):
    """The first instance on which ``p`` and ``q`` disagree on ``outs``."""
    import warnings

    from seqlog.engine import Budget, query

    budget = budget or Budget()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in instances:
            for s in outs:
                if query(p, i, s, budget) != query(q, i, s, budget):
                    return i, s
    return None


def instances_for(p, n: int, seed: int, **kw):
    import random

    rng = random.Random(seed)
    return [seeded_instance(rng, p, **kw) for _ in range(n)]


# ---------------------------------------------------------------------------
# random algebra expressions


def random_algebra(rng, schema=None, depth: int = 3):
    """Random well-typed algebra expression with arity at most 3; returns
    ``(expr, arity)``."""
    from seqlog.sra import ConstRel, Diff, Product, Project, Rel, Select, Sub, Union, Unpack, col

    schema = schema or {"R": 1, "S": 2}

    def cexpr(n, k=2):
        return tuple(col(rng.randint(1, n)) if rng.random() < 0.6 else rng.choice("ab")
                     for _ in range(rng.randint(0, k)))

    def leaf():
        if rng.random() < 0.15:
            t = tuple((rng.choice("ab"),) for _ in range(1))
            return ConstRel(1, frozenset([t])), 1
        name = rng.choice(sorted(schema))
        return Rel(name, schema[name]), schema[name]

    def gen(d):
        if d == 0:
            return leaf()
        op = rng.choice(["select", "project", "unpack", "sub", "union", "diff", "product", "leaf"])
        if op == "leaf":
            return leaf()
        if op in ("union", "diff"):
            a, n = gen(d - 1)
            b, m = gen(d - 1)
            a, b = Project((cexpr(n, 2),), a), Project((cexpr(m, 2),), b)
            return (Union(a, b) if op == "union" else Diff(a, b)), 1
        if op == "product":
            a, n = gen(d - 1)
            b, m = gen(d - 1)
            if n + m > 3:
                return a, n
            return Product(a, b), n + m
        child, n = gen(d - 1)
        if op == "select":
            return Select(cexpr(n), cexpr(n), child), n
        if op == "project":
            k = rng.randint(1, 2)
            return Project(tuple(cexpr(n) for _ in range(k)), child), k
        if op == "unpack":
            return Unpack(rng.randint(1, n), child), n
        if n >= 3:
            return child, n
        return Sub(rng.randint(1, n), child), n + 1

    return gen(depth)
