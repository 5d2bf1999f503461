import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from seqlog import corpus
from seqlog.core import Instance, Pack
from seqlog.engine import Budget, eval_program, eval_rule, eval_stratum, path_size, query
from seqlog.errors import NonTermination
from seqlog.program import Program
from helpers import Diverges, I, P, facts, is_model, least_model, random_semipositive_rules, random_small_instance


def test_eval_rule_examples():
    r = P("S($x) :- R($x), a/$x = $x/a.").rules[0]
    assert eval_rule(r, I("R(a/a/a). R(a/b).")) == {("S", (("a", "a", "a"),))}
    r = P("T($u/<$s>/$v) :- R($u/$s/$v), S($s).").rules[0]
    assert eval_rule(r, I("R(a/b). S(b).")) == {("T", (("a", Pack(("b",))),))}
    r = P("S(a) :- a = b.").rules[0]
    assert eval_rule(r, I("")) == set()


def test_nfa_stratum():
    p = corpus.load_program("nfa")
    out = eval_stratum(p.rules, corpus.load_instance("nfa"))
    assert facts(out, "A") == {(("a", "b"),)}


def test_nonterminating_raises():
    p = corpus.load_program("nonterminating")
    with pytest.raises(NonTermination) as e:
        eval_program(p, I("R(a)."), Budget(max_path_len=50))
    assert e.value.stratum == 0
    with pytest.raises(NonTermination):
        eval_program(p, Instance(), Budget(max_derived_facts=20))
    with pytest.raises(NonTermination):
        eval_program(p, Instance(), Budget(max_iterations=20))


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(max_path_len=0)


def test_empty_stratum_keeps_input():
    i = I("R(a).")
    assert eval_stratum([], i).facts() == i.facts()


def test_squaring():
    out = eval_program(corpus.load_program("squaring"), I("R(a/a/a).")).instance
    assert facts(out, "S") == {(("a",) * 9,)}


def test_white_black():
    # W is computed first; S then needs W false
    out = eval_program(corpus.load_program("white_black"), I("R(x/y).")).instance
    assert facts(out, "W") == {(("x",),)}
    assert facts(out, "S") == set()


def test_missing_edb_is_empty():
    out = eval_program(P("S($x) :- R($x).\nT($x) :- Q($x)."), I("R(a).")).instance
    assert facts(out, "S") == {(("a",),)} and facts(out, "T") == set()


def test_query():
    i = I("R(a/a/a). R(a/b). R(!). R(b/a).")
    assert query(corpus.load_program("onlyas_e"), i, "S") == query(corpus.load_program("onlyas_air"), i, "S")
    assert facts(query(corpus.load_program("reversal"), I("R(a/b/c)."), "S"), "S") == {(("c", "b", "a"),)}
    assert query(P("S($x) :- R($x), a = b."), i, "S")["S"] == frozenset()


def test_query_warnings():
    with pytest.warns(UserWarning, match="not flat"):
        query(P("S($x) :- R($x)."), I("R(<a>)."), "S")
    with pytest.warns(UserWarning, match="monadic"):
        query(P("S($x) :- R($x, $x)."), I("R(a, a)."), "S")


def test_path_size_counts_nesting():
    assert path_size(("a", "b")) == 2
    assert path_size((Pack(("a", Pack(("b",)))),)) == 4


def test_stats_per_stratum():
    res = eval_program(corpus.load_program("white_black"), corpus.load_instance("white_black"))
    assert len(res.stats) == 2 and all(s["iterations"] >= 1 for s in res.stats)


def _all_facts(i):
    return {(n, t) for n in i for t in i[n]}


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_matches_least_model(rng):
    rules = random_semipositive_rules(rng)
    i = random_small_instance(rng)
    try:
        expected = least_model(rules, i)
    except Diverges:
        with pytest.raises(NonTermination):
            eval_stratum(rules, i, Budget(max_path_len=8))
        return
    got = eval_stratum(rules, i, Budget(max_path_len=8))
    assert _all_facts(got) == {(n, t) for n in expected for t in expected[n]}
    assert is_model(rules, {n: set(got[n]) for n in got})


def _eval(rules, i, **kw):
    try:
        return _all_facts(eval_stratum(rules, i, Budget(max_path_len=8), **kw))
    except NonTermination:
        return None


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_naive_equals_seminaive(rng):
    rules = random_semipositive_rules(rng)
    i = random_small_instance(rng)
    assert _eval(rules, i, seminaive=True) == _eval(rules, i, seminaive=False)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_order_independence(rng):
    from seqlog.program import Rule

    rules = random_semipositive_rules(rng)
    i = random_small_instance(rng)
    shuffled = [Rule(r.head, tuple(rng.sample(r.body, len(r.body)))) for r in rules]
    rng.shuffle(shuffled)
    assert _eval(rules, i) == _eval(shuffled, i)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_monotone_without_negation(rng):
    rules = [r for r in random_semipositive_rules(rng)
             if not any(l.negated for l in r.body)]
    i = random_small_instance(rng)
    before = _eval(rules, i)
    extra = Instance.from_facts(i.facts() + [("R", ((rng.choice("ab"),),))])
    after = _eval(rules, extra)
    if before is not None and after is not None:
        assert before <= after
