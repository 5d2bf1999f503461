"""S-expression text format for plans, one operator per line::

    (project ($1/$2)
      (product
        (rel R 1)
        (sub 1
          (rel S 1))))
"""
from __future__ import annotations

import re
from typing import List, Tuple

from ..core import format_expr, tuple_key
from ..errors import ParseError
from ..syntax import parse_expr
from .ast import ConstRel, Diff, Product, Project, Rel, Select, Sub, Union, Unpack

_BINARY = {"union": Union, "diff": Diff, "product": Product}


def _tuple(t) -> str:
    return "(" + ", ".join(format_expr(x) for x in t) + ")"


def format_plan(e, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(e, Rel):
        return f"{pad}(rel {e.name}" + (f" {e.arity}" if e.arity is not None else "") + ")"
    if isinstance(e, ConstRel):
        body = " ".join(_tuple(t) for t in sorted(e.tuples, key=tuple_key))
        return f"{pad}(const {e.arity}" + (f" {body}" if body else "") + ")"
    if isinstance(e, Select):
        head = f"(select ({format_expr(e.lhs)} = {format_expr(e.rhs)})"
        kids = [e.child]
    elif isinstance(e, Project):
        head = f"(project {_tuple(e.exprs)}"
        kids = [e.child]
    elif isinstance(e, Unpack):
        head, kids = f"(unpack {e.index}", [e.child]
    elif isinstance(e, Sub):
        head, kids = f"(sub {e.index}", [e.child]
    else:
        op = {Union: "union", Diff: "diff", Product: "product"}[type(e)]
        head, kids = f"({op}", [e.left, e.right]
    return pad + head + "\n" + "\n".join(format_plan(k, indent + 1) for k in kids) + ")"


_TOK = re.compile(r"\s*(\(|\)|[^\s()]+)")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def fail(self, msg: str):
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        raise ParseError(msg, line, col)

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def word(self) -> str:
        self._skip()
        m = re.compile(r"[^\s()]+").match(self.text, self.pos)
        if not m:
            self.fail("expected a word")
        self.pos = m.end()
        return m.group()

    def group(self) -> str:
        """Raw text of a parenthesized group without nested parentheses."""
        self.expect("(")
        end = self.text.find(")", self.pos)
        if end < 0:
            self.fail("unclosed group")
        raw = self.text[self.pos:end]
        if "(" in raw:
            self.fail("nested parentheses in expression group")
        self.pos = end + 1
        return raw

    def exprs(self) -> tuple:
        raw = self.group()
        if not raw.strip():
            return ()
        return tuple(parse_expr(x.strip()) for x in raw.split(","))

    def node(self):
        self.expect("(")
        op = self.word()
        if op == "rel":
            name = self.word()
            ar = None
            if self.peek() != ")":
                ar = int(self.word())
            self.expect(")")
            return Rel(name, ar)
        if op == "const":
            n = int(self.word())
            tuples = set()
            while self.peek() == "(":
                t = self.exprs()
                if len(t) != n:
                    if not (n == 0 and t == ()):
                        self.fail(f"tuple of arity {len(t)} in constant of arity {n}")
                tuples.add(t)
            self.expect(")")
            return ConstRel(n, frozenset(tuples))
        if op == "select":
            raw = self.group()
            if raw.count("=") != 1:
                self.fail("selection needs one '='")
            lhs, rhs = raw.split("=")
            child = self.node()
            self.expect(")")
            return Select(parse_expr(lhs.strip()), parse_expr(rhs.strip()), child)
        if op == "project":
            ex = self.exprs()
            child = self.node()
            self.expect(")")
            return Project(ex, child)
        if op in ("unpack", "sub"):
            i = int(self.word())
            child = self.node()
            self.expect(")")
            return (Unpack if op == "unpack" else Sub)(i, child)
        if op in _BINARY:
            a = self.node()
            b = self.node()
            self.expect(")")
            return _BINARY[op](a, b)
        self.fail(f"unknown operator {op!r}")


def parse_plan(text: str):
    r = _Reader(text)
    e = r.node()
    if r.peek():
        r.fail("trailing input after plan")
    return e
