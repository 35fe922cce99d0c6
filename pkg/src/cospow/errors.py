"""Exception hierarchy shared by the library and the command line."""


class CospowError(Exception):
    """Base class for all errors raised by cospow."""

    exit_code = 1


class DomainError(CospowError, ValueError):
    """An argument lies outside the domain of an operation."""

    exit_code = 2


class ResourceLimitError(CospowError):
    """A precision cap or range budget would be exceeded."""

    exit_code = 3


class FitError(CospowError):
    """Curve fitting cannot proceed on the given points."""

    exit_code = 4


class InsufficientDataError(CospowError):
    """Too few points to infer a structure."""

    exit_code = 4
