"""Exception hierarchy.

Validation problems (bad JSON, negative weights, bad exponents) derive from
``ValidationError``; everything else signals that a mathematical
precondition failed. The CLI maps the two families to exit codes 2 and 3.
"""


class HausfockError(Exception):
    pass


class ValidationError(HausfockError, ValueError):
    pass


class MathPreconditionError(HausfockError):
    pass


class DomainError(MathPreconditionError, ValueError):
    pass


class DivergenceError(MathPreconditionError):
    pass


class UnboundedOperatorError(MathPreconditionError):
    pass


class UndecidableError(MathPreconditionError):
    pass


class ConsistencyError(MathPreconditionError):
    pass


class SingularMultiplierError(MathPreconditionError):
    pass


class PreconditionError(MathPreconditionError):
    pass
