"""Concrete text syntax for programs (``.sdl``) and instances (``.sdb``).

::

    % comment
    S($x) :- R($x), a/$x = $x/a.
    T($u/<$s>/$v) :- R($u/$s/$v), S($s).
    A :- T($x), T($y), $x != $y, not B($x).
    ---
    W(@x) :- R(@x/@y), not B(@y).

``$x`` path variable, ``@x`` atomic variable, ``/`` concatenation, ``!``
the empty path, ``<...>`` packing, ``---`` on its own line separates strata.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .core import Instance, Pack, Var, format_expr, tuple_key
from .errors import ArityMismatch, NonGroundFact, ParseError
from .program import Equation, Literal, Predicate, Program, Rule, print_program

__all__ = [
    "parse_program",
    "parse_instance",
    "parse_expr",
    "parse_equation",
    "print_program",
    "print_instance",
    "print_facts",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>%[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>:-)
  | (?P<neq>!=)
  | (?P<eq>=)
  | (?P<eps>!)
  | (?P<pvar>\$[A-Za-z0-9_]+)
  | (?P<avar>@[A-Za-z0-9_]+)
  | (?P<name>[A-Z][A-Za-z0-9_']*)
  | (?P<const>[a-z0-9][a-z0-9_]*)
  | (?P<punct>[/<>(),.])
    """,
    re.VERBOSE,
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.split("%", 1)[0].strip() == "---":
            toks.append(_Tok("sep", "---", lineno, 1))
            continue
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            kind = m.lastgroup
            if kind not in ("ws", "comment", "nl"):
                t = m.group()
                toks.append(_Tok(t if kind == "punct" else kind, t, lineno, pos + 1))
            pos = m.end()
    toks.append(_Tok("eof", "", len(text.split("\n")), 1))
    return toks


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self.arities: Dict[str, int] = {}

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.cur
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", tok.line, tok.col)

    def expect(self, kind: str) -> _Tok:
        if self.cur.kind != kind:
            self.fail(f"expected {kind!r}")
        tok = self.cur
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.cur.kind == kind:
            self.i += 1
            return True
        return False

    def check_name(self, tok: _Tok, name: str):
        if "__" in name and not self.allow_reserved:
            raise ParseError(f"name {name!r} uses the reserved '__' marker", tok.line, tok.col)

    # expressions ----------------------------------------------------------
    def expr(self) -> tuple:
        out = list(self.item())
        while self.accept("/"):
            out.extend(self.item())
        return tuple(out)

    def item(self) -> tuple:
        tok = self.cur
        if tok.kind == "eps":
            self.i += 1
            return ()
        if tok.kind == "const":
            self.i += 1
            return (tok.text,)
        if tok.kind in ("pvar", "avar"):
            self.i += 1
            name = tok.text[1:]
            self.check_name(tok, name)
            return (Var(name, tok.kind == "avar"),)
        if tok.kind == "<":
            self.i += 1
            if self.accept(">"):
                return (Pack(()),)
            inner = self.expr()
            self.expect(">")
            return (Pack(inner),)
        self.fail("expected a path expression")

    # atoms ----------------------------------------------------------------
    def predicate(self) -> Predicate:
        tok = self.expect("name")
        self.check_name(tok, tok.text)
        args: List[tuple] = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.expr())
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
        n = len(args)
        if self.arities.setdefault(tok.text, n) != n:
            raise ArityMismatch(
                f"{tok.line}:{tok.col}: relation {tok.text} used with arity {n} "
                f"and {self.arities[tok.text]}"
            )
        return Predicate(tok.text, tuple(args))

    def literal(self) -> Literal:
        tok = self.cur
        if tok.kind == "const" and tok.text == "not" and self.peek().kind == "name":
            self.i += 1
            return Literal(self.predicate(), True)
        if tok.kind == "name":
            return Literal(self.predicate(), False)
        lhs = self.expr()
        if self.accept("eq"):
            return Literal(Equation(lhs, self.expr()), False)
        if self.accept("neq"):
            return Literal(Equation(lhs, self.expr()), True)
        self.fail("expected '=' or '!='")

    def rule(self) -> Rule:
        head = self.predicate()
        body: List[Literal] = []
        if self.accept("arrow"):
            body.append(self.literal())
            while self.accept(","):
                body.append(self.literal())
        self.expect(".")
        return Rule(head, tuple(body))

    def program(self) -> Program:
        strata: List[List[Rule]] = [[]]
        while self.cur.kind != "eof":
            if self.accept("sep"):
                strata.append([])
                continue
            strata[-1].append(self.rule())
        return Program(tuple(tuple(s) for s in strata))


def parse_program(text: str, allow_reserved: bool = False) -> Program:
    """Parse program text.  Names containing ``__`` are reserved for
    generated relations and variables unless ``allow_reserved`` is set."""
    return _Parser(text, allow_reserved).program()


def parse_instance(text: str) -> Instance:
    p = _Parser(text, allow_reserved=True)
    facts = []
    while p.cur.kind != "eof":
        tok = p.cur
        if tok.kind == "sep":
            p.fail("stratum separator in instance")
        r = p.rule()
        if r.body:
            raise ParseError("facts cannot have a body", tok.line, tok.col)
        for a in r.head.args:
            if _has_var(a):
                raise NonGroundFact(f"fact {r.head} is not ground", tok.line, tok.col)
        facts.append((r.head.relation, r.head.args))
    return Instance.from_facts(facts, p.arities)


def _has_var(e: tuple) -> bool:
    return any(isinstance(t, Var) or (isinstance(t, Pack) and _has_var(t.items)) for t in e)


def parse_expr(text: str) -> tuple:
    p = _Parser(text, allow_reserved=True)
    if p.cur.kind == "eof":
        return ()
    e = p.expr()
    p.expect("eof")
    return e


def parse_equation(text: str) -> Equation:
    p = _Parser(text, allow_reserved=True)
    lhs = p.expr()
    p.expect("eq")
    rhs = p.expr()
    p.expect("eof")
    return Equation(lhs, rhs)


def print_facts(name: str, tuples) -> str:
    out = []
    for t in sorted(tuples, key=tuple_key):
        out.append(f"{Predicate(name, tuple(t))}.\n")
    return "".join(out)


def print_instance(i: Instance) -> str:
    return "".join(print_facts(n, i[n]) for n in i)
