"""Exception types shared across the package."""


class CliquePartError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(CliquePartError):
    """A parameter violates its documented range or consistency requirement."""


class DomainError(ParameterError):
    """A numeric argument lies outside the domain of the requested formula."""


class RegimeError(ParameterError):
    """The large-gap constant pair was requested outside its validity range."""


class ParseError(CliquePartError):
    """A graph file or graph text could not be parsed."""


class CapExceededError(CliquePartError):
    """An exact enumeration was requested above the configured size cap."""


class DegenerateSystemError(CliquePartError):
    """The triangular system tying g- and f-derivatives is singular (g(0) = 0)."""


class DecideRefusedError(CliquePartError):
    """The density decision was refused: the error certificate at the given
    truncation order is too weak to separate the two promise cases."""
