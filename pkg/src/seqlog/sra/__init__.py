"""Sequence relational algebra: AST, evaluator, compiler from nonrecursive
programs, and the translation back."""
from .ast import ConstRel, Diff, Product, Project, Rel, Select, Sub, Union, Unpack, arity, children, col
from .compiler import atomic_filter_plan, compile_program, to_program
from .evaluate import eval_expr
from .text import format_plan, parse_plan

compile = compile_program
eval = eval_expr

__all__ = [
    "Rel", "ConstRel", "Select", "Project", "Unpack", "Sub", "Union", "Diff", "Product",
    "arity", "children", "col", "atomic_filter_plan", "compile_program", "to_program",
    "eval_expr", "format_plan", "parse_plan",
]
