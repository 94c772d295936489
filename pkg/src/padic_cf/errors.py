"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class PadicCFError(Exception):
    code = "E_GENERIC"


class NotResidue(PadicCFError, ValueError):
    code = "E_NOT_RESIDUE"


class PrecisionExhausted(PadicCFError, ArithmeticError):
    code = "E_PRECISION"


class DivisionByZero(PadicCFError, ZeroDivisionError):
    code = "E_DIV_ZERO"


class MixedField(PadicCFError, TypeError):
    code = "E_MIXED_FIELD"


class DegenerateRelation(PadicCFError, ArithmeticError):
    code = "E_DEGENERATE"


class ZeroPolynomial(PadicCFError, ValueError):
    code = "E_ZERO_POLY"


class ReduciblePolynomial(PadicCFError, ValueError):
    code = "E_REDUCIBLE"


class HypothesisViolated(PadicCFError, ValueError):
    code = "E_HYPOTHESIS"


class InfeasibleSpec(PadicCFError, ValueError):
    code = "E_INFEASIBLE"


class RationalSlope(PadicCFError, ValueError):
    code = "E_RATIONAL_SLOPE"


class SizeLimit(PadicCFError, ValueError):
    code = "E_SIZE_LIMIT"


class ReportsViolation(PadicCFError, AssertionError):
    code = "E_VIOLATION"
