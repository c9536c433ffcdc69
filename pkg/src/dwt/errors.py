"""Exception hierarchy shared by the library and the command line."""


class DWTError(Exception):
    """Base class for every error raised by :mod:`dwt`."""


class ValidationError(DWTError, ValueError):
    """Input does not describe an admissible potential, word or schedule."""


class NumericFailure(DWTError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy answer."""


class BracketTooWide(NumericFailure):
    """The truncation bracket of a limit approximation exceeds tolerance."""
