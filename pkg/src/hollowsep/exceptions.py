"""Exception hierarchy. Everything derives from ``ValueError`` so callers that
only care about "bad input" can catch that."""


class HollowsepError(ValueError):
    pass


class NotSquare(HollowsepError):
    pass


class NotHermitian(HollowsepError):
    pass


class NotUnitary(HollowsepError):
    pass


class DimensionMismatch(HollowsepError):
    pass


class PartyOutOfRange(HollowsepError):
    pass


class InvalidPartition(HollowsepError):
    pass


class BadExcitationNumber(HollowsepError):
    pass


class NotDensityMatrix(HollowsepError):
    pass


class OverflowGuard(HollowsepError):
    """Raised when an operator family would exceed the configured size cap."""


class WrongShape(HollowsepError):
    pass


class WrongRank(HollowsepError):
    pass


class ShapeMismatch(HollowsepError):
    pass


class StateFileError(HollowsepError):
    """Malformed state file (syntax or schema)."""


class NotNormalized(HollowsepError):
    pass
