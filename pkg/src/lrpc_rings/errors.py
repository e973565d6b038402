"""Exception types shared across the package."""


class LrpcError(Exception):
    """Base class for all library errors."""


class NotPrime(LrpcError):
    pass


class NotLocal(LrpcError):
    pass


class MalformedModulus(LrpcError):
    pass


class RingMismatch(LrpcError):
    pass


class ExtensionMismatch(LrpcError):
    pass


class NotAUnit(LrpcError):
    pass


class NotFree(LrpcError):
    pass


class AmbientMismatch(LrpcError):
    pass


class BadRank(LrpcError):
    pass


class OneNotInModule(LrpcError):
    pass


class NoSuitableBasis(LrpcError):
    pass


class GenerationFailed(LrpcError):
    pass


class NotInF(LrpcError):
    pass


class NoInvertibleMinor(LrpcError):
    pass


class NoSolution(LrpcError):
    pass


class RankDeficient(LrpcError):
    pass


class UnsupportedRing(LrpcError):
    pass


class IndexOutOfRange(LrpcError):
    pass


class HypothesisViolated(LrpcError):
    pass


class ParseError(LrpcError):
    """Ring-spec parse error carrying the offending position."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"at position {position}: {message}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
