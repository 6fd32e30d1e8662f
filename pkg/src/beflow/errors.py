"""Exception hierarchy shared by every module."""


class BeflowError(Exception):
    """Base class; the CLI maps any subclass to exit status 2."""


class MalformedInput(BeflowError):
    pass


class NotCubic(BeflowError):
    pass


class LoopEdge(BeflowError):
    pass


class OddVertexCount(BeflowError):
    pass


class NotConnected(BeflowError):
    pass


class TooLarge(BeflowError):
    pass


class OddN(BeflowError):
    pass


class NotBisection(BeflowError):
    pass


class BadBounds(BeflowError):
    pass


class AlphaOutOfRange(BeflowError):
    pass


class MismatchedGraph(BeflowError):
    pass


class UndefinedTrace(BeflowError):
    pass


class NotOrientable(BeflowError):
    pass


class EmptyBelowOne(BeflowError):
    pass


class BadK(BeflowError):
    pass


class UnknownConjecture(BeflowError):
    pass


class Inconsistent(BeflowError):
    pass


class FactorInvalid(BeflowError):
    pass


class StructureViolation(BeflowError):
    pass


class InternalVerificationFailed(BeflowError):
    pass
