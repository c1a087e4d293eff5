"""Exception types raised by the recovery routines."""


class RecoveryError(Exception):
    """Base class for every error raised by csrecover."""


class DimensionMismatch(RecoveryError, ValueError):
    pass


class LengthMismatch(RecoveryError, ValueError):
    pass


class RankDeficient(RecoveryError, ArithmeticError):
    pass


class ZeroMatrix(RecoveryError, ValueError):
    pass


class DuplicateBin(RecoveryError, ValueError):
    pass


class BinOutOfRange(RecoveryError, ValueError):
    pass


class MTooLarge(RecoveryError, ValueError):
    pass


class AllForbidden(RecoveryError, ValueError):
    pass


class EmptyMeasurements(RecoveryError, ValueError):
    pass


class KOutOfRange(RecoveryError, ValueError):
    pass


class NonFinite(RecoveryError, ValueError):
    pass


class Infeasible(RecoveryError):
    pass


class Unbounded(RecoveryError):
    pass
