"""Exception hierarchy shared by every mfscan module."""


class MfscanError(Exception):
    """Base class for all toolkit errors."""


class InputError(MfscanError, ValueError):
    """The caller handed over data or parameters the operation cannot use."""


class EstimationError(MfscanError):
    """A numerical estimate could not be produced."""


# ingest / preprocessing
class EmptyInput(InputError):
    pass


class NonPositivePrice(InputError):
    pass


class UnorderedRecords(InputError):
    pass


class MissingTags(InputError):
    pass


class ZeroProfileMinute(EstimationError):
    pass


class UnknownMinute(InputError):
    pass


class ZeroVariance(EstimationError):
    pass


class LengthMismatch(InputError):
    pass


class NegativeMagnitude(InputError):
    pass


# MF-DFA
class WindowTooLarge(InputError):
    pass


class SingularFit(EstimationError):
    pass


class InsufficientScales(EstimationError):
    pass


class GridMismatch(InputError):
    pass


class ZeroDeltaH(EstimationError):
    pass


# surrogates
class TooShort(InputError):
    pass


# l-diagrams and box counting
class LagTooLarge(InputError):
    pass


class DegenerateRange(InputError):
    pass


class OutOfRange(InputError):
    pass


# density fitting
class NonPositiveForLog(InputError):
    pass


class ConvergenceFailure(EstimationError):
    pass


class InsufficientBins(EstimationError):
    pass


# generators
class InvalidSpec(InputError):
    pass


class InvalidH(InputError):
    pass


class DomainError(InputError):
    pass


class InvalidParameter(InputError):
    pass
