"""Exception hierarchy shared by every module.

Each class maps to one CLI exit code (see ``cli.EXIT_CODES``).
"""


class TwistDynError(Exception):
    """Base class for all library errors."""


class ExtensionRequired(TwistDynError):
    """A root is needed that the coefficient field cannot represent."""


class PrecisionLoss(TwistDynError):
    """A decision depends on digits hidden behind an ``O(t^e)`` tail."""


class SamePoint(TwistDynError):
    pass


class InfiniteDistance(TwistDynError):
    pass


class MixedPoleConfiguration(TwistDynError):
    pass


class WeierstrassMismatch(TwistDynError):
    pass


class PoleOnBoundary(TwistDynError):
    pass


class NotFixed(TwistDynError):
    pass


class SegmentNotInvariant(TwistDynError):
    pass


class SimpleMap(TwistDynError):
    """The Julia set of the polynomial is a single point."""


class HypothesisViolated(TwistDynError):
    pass


class ExceptionalStart(TwistDynError):
    pass


class InvariantViolation(TwistDynError):
    """An internal cross-check failed; indicates a bug, not bad input."""


class SpecSyntaxError(TwistDynError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class SpecSemanticError(TwistDynError):
    pass
