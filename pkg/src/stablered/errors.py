"""Exception types shared across the package.

Errors split into two families: malformed input (caller passed something
that violates a precondition) and mathematical failure (input was well
formed but an exact identity did not hold).  The CLI maps the first family
to exit code 2 and the second to exit code 1.
"""


class StableRedError(Exception):
    """Base class for all package errors."""


class MalformedInput(StableRedError):
    """Caller violated a documented precondition."""


class MathematicalFailure(StableRedError):
    """Well-formed input failed an exact mathematical check."""


# --- char_p_algebra / superelliptic ---

class DivisionByZero(MalformedInput):
    pass


class NotCoprime(MalformedInput):
    pass


class EmptyRHS(MalformedInput):
    pass


class InternalInconsistency(StableRedError):
    pass


class ZeroDifferential(MalformedInput):
    pass


class NoRootOfUnity(MalformedInput):
    pass


# --- deformation data ---

class NoLogarithmicTwist(MathematicalFailure):
    """No scalar twist makes the candidate differential Cartier-fixed."""


class NotDivisible(MalformedInput):
    pass


# --- tree calculus ---

class MalformedGraph(MalformedInput):
    pass


class ExceptionalInput(MalformedInput):
    pass


class BoundsTooLarge(MalformedInput):
    pass


# --- tail covers ---

class HasseArfViolation(MalformedInput):
    pass


class InsufficientPrecision(MalformedInput):
    pass


class PreconditionViolated(MalformedInput):
    pass


# --- dessins ---

class DegreeTooLarge(MalformedInput):
    pass


class NonIntegralGenus(MathematicalFailure):
    pass


class SignatureViolation(MathematicalFailure):
    pass


class GenusNotZero(MathematicalFailure):
    pass


class PSylowNotCyclicOrderP(MalformedInput):
    pass


# --- cli ---

class UnknownSubcommand(MalformedInput):
    pass


class ParseError(MalformedInput):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
