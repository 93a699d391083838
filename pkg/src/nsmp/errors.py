"""Exception types raised across the package."""

from __future__ import annotations


class NsmpError(Exception):
    """Base class for all errors raised by :mod:`nsmp`."""


class ParseError(NsmpError, ValueError):
    pass


class RaggedError(ParseError):
    pass


class BadTokenError(ParseError):
    pass


class NonSquareError(NsmpError, ValueError):
    pass


class DimensionMismatchError(NsmpError, ValueError):
    pass


class BothZeroError(NsmpError, ValueError):
    pass


class PatternMismatchError(NsmpError, ValueError):
    pass


class HypothesisViolatedError(NsmpError, ValueError):
    pass


class TooLargeError(NsmpError):
    """An exhaustive routine was asked for a size beyond its enumeration limit."""

    def __init__(self, n: int, limit: int, what: str = "operation"):
        super().__init__(f"{what} supports n <= {limit}, got n = {n}")
        self.n = n
        self.limit = limit
