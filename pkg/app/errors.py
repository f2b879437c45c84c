"""Exceptions raised by the toolkit.

Every error derives from ``RqaError`` and from the builtin that best
describes it, so callers can catch either.
"""


class RqaError(Exception):
    """Base class for all toolkit errors."""


class InvalidLengthError(RqaError, ValueError):
    pass


class InvalidParameterError(RqaError, ValueError):
    pass


class InvalidThresholdError(InvalidParameterError):
    pass


class InvalidWindowError(InvalidParameterError):
    pass


class ParseError(RqaError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NumericDomainError(RqaError, ArithmeticError):
    pass


class NumericOverflowError(RqaError, OverflowError):
    pass


class MicrostateIndexError(RqaError, IndexError):
    pass


class MatrixTooSmallError(RqaError, ValueError):
    pass


class PlacementLimitError(RqaError, ValueError):
    pass


class ConfigError(RqaError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class RunDirectoryExistsError(RqaError, FileExistsError):
    pass
