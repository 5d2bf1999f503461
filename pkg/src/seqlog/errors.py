"""Exception hierarchy.

Static problems (parse, arity, safety, preconditions of a transformation)
derive from :class:`StaticError`; runaway computations derive from
:class:`ResourceError`.  The CLI maps the two families to exit codes 1 and 2.
"""


class SeqlogError(Exception):
    """Base class for all errors raised by this package."""


class StaticError(SeqlogError):
    pass


class ResourceError(SeqlogError):
    pass


class ParseError(StaticError):
    def __init__(self, msg: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {msg}" if line else msg)
        self.line = line
        self.column = column


class ArityMismatch(StaticError):
    pass


class NonGroundFact(ParseError):
    pass


class SafetyError(StaticError):
    def __init__(self, offenders):
        # offenders: list of (rule, sorted variable names)
        self.offenders = list(offenders)
        lines = [f"{r}  unlimited: {', '.join(vs)}" for r, vs in self.offenders]
        super().__init__("unsafe rules:\n  " + "\n  ".join(lines))


class StratificationError(StaticError):
    pass


class PurityContextError(StaticError):
    pass


class OutputArityError(StaticError):
    pass


class RecursionPresent(StaticError):
    pass


class NegationPresent(StaticError):
    pass


class EquationsPresent(StaticError):
    pass


class ArityError(StaticError):
    pass


class UnknownRelation(StaticError):
    pass


class InternalError(SeqlogError):
    pass


class BudgetExceeded(ResourceError):
    def __init__(self, what: str, limit=None):
        super().__init__(f"budget exceeded: {what}" + (f" (limit {limit})" if limit is not None else ""))
        self.what = what
        self.limit = limit


class RecursionBudgetExceeded(BudgetExceeded):
    pass


class NonTermination(ResourceError):
    def __init__(self, dimension: str, limit, stratum: int | None = None):
        where = f" in stratum {stratum}" if stratum is not None else ""
        super().__init__(f"evaluation did not terminate{where}: {dimension} exceeded {limit}")
        self.dimension = dimension
        self.limit = limit
        self.stratum = stratum
