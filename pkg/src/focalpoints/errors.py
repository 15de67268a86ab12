"""Exception hierarchy.

Each family maps to one CLI exit code (see ``focalpoints.cli``).
"""


class FocalPointsError(Exception):
    exit_code = 1


class ParseError(FocalPointsError):
    exit_code = 2


class ValidationError(FocalPointsError, ValueError):
    exit_code = 3


class MathDomainError(FocalPointsError, ArithmeticError):
    exit_code = 4


class ResourceError(FocalPointsError):
    exit_code = 5


class NotComparable(ValidationError):
    pass


class NotInSet(ValidationError):
    pass


class IncompleteInput(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class NotAMass(ValidationError):
    pass


class MaximumMissing(ValidationError):
    pass


class InvalidTarget(ValidationError):
    pass


class NotAFocalPoint(ValidationError):
    pass


class ZeroImage(MathDomainError):
    pass


class ZeroCommonality(ZeroImage):
    pass


class ZeroWeight(ZeroImage):
    pass


class TotalConflict(MathDomainError):
    pass


class FrameTooLarge(ResourceError):
    pass


class BenchDisagreement(FocalPointsError):
    """Two engines produced different results for the same cell."""
