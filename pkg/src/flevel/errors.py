"""Exception hierarchy.  Every error carries a stable machine-readable ``code``."""


class FlevelError(Exception):
    code = "error"


class InvalidPrime(FlevelError):
    code = "invalid_prime"


class MismatchedContext(FlevelError):
    code = "mismatched_context"


class DegreeOverflow(FlevelError):
    code = "degree_overflow"


class NotHomogeneous(FlevelError):
    code = "not_homogeneous"


class InvalidExponent(FlevelError):
    code = "invalid_exponent"


class WrongDegree(FlevelError):
    code = "wrong_degree"


class InvalidCongruence(FlevelError):
    code = "invalid_congruence"


class CutoffExceeded(FlevelError):
    """The Frobenius-root chain did not stabilise before the cutoff.

    ``result`` holds the partial :class:`~flevel.invariants.LevelResult`.
    """

    code = "cutoff_exceeded"

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class VerificationFailed(FlevelError):
    code = "verification_failed"

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ParseError(FlevelError):
    code = "parse_error"


class ExpressionSyntaxError(ParseError):
    code = "syntax_error"

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NegativeExponent(ParseError):
    code = "negative_exponent"


class UnknownVariable(ParseError):
    code = "unknown_variable"
