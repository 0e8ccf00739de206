"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI:
    ConfigError            -> 2 (bad run configuration)
    InvalidInputError,
    OutOfRegimeError,
    InconsistentDataError,
    InsufficientDataError,
    MissingInputError      -> 3 (precondition violations)
    NumericsError          -> 4 (numerical failure at runtime)
"""


class BlowupLabError(Exception):
    """Base class for all package errors."""


class ConfigError(BlowupLabError):
    """Malformed run configuration text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidInputError(BlowupLabError):
    """Rejected input: negative density, non-finite samples, degenerate fields."""


class OutOfRegimeError(BlowupLabError):
    """Parameters outside the validity range of the requested criterion."""


class InconsistentDataError(BlowupLabError):
    """Supplied data contradicts an assumption it is required to satisfy."""


class InsufficientDataError(BlowupLabError):
    """Not enough samples/snapshots to perform the requested analysis."""


class MissingInputError(BlowupLabError):
    """A derived constant was requested without the scalars it needs."""

    def __init__(self, name, needs):
        super().__init__(f"constant {name} requires missing input(s): {', '.join(needs)}")
        self.name = name
        self.needs = tuple(needs)


class NumericsError(BlowupLabError):
    """Non-finite quadrature, overflow, or a solver that failed to converge."""
