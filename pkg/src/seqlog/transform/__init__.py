"""Program-to-program rewritings that remove features while preserving the
query computed on flat instances."""
from .arity import A0, B0, eliminate_arity, encode_args, encode_pair
from .common import Fresh, TransformReport
from .equations import eliminate_equations
from .doubling import make_doubler, make_undoubler
from .folding import fold_intermediates
from .normal import check_normal_form, normalize, normalize_rule, rule_forms
from .packing import depack_equations, eliminate_packing_nonrecursive, purify_rule

__all__ = [
    "A0",
    "B0",
    "Fresh",
    "TransformReport",
    "encode_pair",
    "encode_args",
    "eliminate_arity",
    "eliminate_equations",
    "purify_rule",
    "depack_equations",
    "eliminate_packing_nonrecursive",
    "make_doubler",
    "make_undoubler",
    "fold_intermediates",
    "normalize",
    "normalize_rule",
    "rule_forms",
    "check_normal_form",
]
