"""Sequence Datalog: paths with packing, a stratified evaluator, associative
unification, feature-removing program rewritings and a sequence relational
algebra."""
from .core import EPSILON, STAR, Instance, Pack, Var, format_expr, path
from .engine import Budget, EvalResult, eval_program, eval_rule, eval_stratum, query
from .errors import ResourceError, SeqlogError, StaticError
from .program import Equation, Literal, Predicate, Program, Rule
from .syntax import parse_equation, parse_expr, parse_instance, parse_program, print_instance, print_program

__all__ = [
    "EPSILON", "STAR", "Instance", "Pack", "Var", "format_expr", "path",
    "Budget", "EvalResult", "eval_program", "eval_rule", "eval_stratum", "query",
    "ResourceError", "SeqlogError", "StaticError",
    "Equation", "Literal", "Predicate", "Program", "Rule",
    "parse_equation", "parse_expr", "parse_instance", "parse_program", "print_instance", "print_program",
]
