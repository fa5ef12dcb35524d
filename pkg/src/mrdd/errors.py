"""Exception hierarchy shared across the package.

Two broad families matter to callers: configuration problems (bad flags,
bad parameters) and data problems (files, columns, degenerate samples).
The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class MrddError(Exception):
    """Base class for all package errors."""


class ConfigError(MrddError):
    """Invalid configuration or parameters supplied by the caller."""


class DataError(MrddError):
    """The supplied data cannot support the requested computation."""


class InvalidConfig(ConfigError):
    pass


class InvalidGrid(ConfigError):
    pass


class InvalidParams(ConfigError):
    pass


class UnknownDgp(ConfigError):
    pass


class InvalidWeights(ConfigError):
    pass


class InsufficientData(DataError):
    """Too few usable observations in the requested window or side."""

    def __init__(self, message: str, side: str | None = None):
        super().__init__(message)
        self.side = side


class SingularDesign(DataError):
    """Rank-deficient weighted least squares design."""

    def __init__(self, message: str, side: str | None = None):
        super().__init__(message)
        self.side = side


class DegenerateSupport(DataError):
    """Running variable looks discrete: too many exact duplicates in window."""

    def __init__(self, message: str, side: str | None = None):
        super().__init__(message)
        self.side = side


class UnknownCovariate(DataError):
    pass


class InvalidOutcomeRange(DataError):
    pass


class EmptyWindow(DataError):
    pass


class EmptyInput(DataError):
    pass


class MixedTargets(DataError):
    pass


class TooManyFailedReplicates(DataError):
    pass


class InvalidInputs(DataError):
    pass


class InvalidDistribution(DataError):
    pass


class MissingLatents(DataError):
    pass


class MissingColumn(DataError):
    pass


class ParseError(DataError):
    """A data row failed to parse; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


class InternalError(MrddError):
    """An internal invariant was violated; indicates a bug."""
