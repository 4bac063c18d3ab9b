"""Error taxonomy shared across the package.

ConfigurationError maps to CLI exit code 2, NumericalError to exit code 3.
"""


class StarThzError(Exception):
    """Base class for all package errors."""


class ConfigurationError(StarThzError):
    """Invalid parameters, scenario files, or violated type invariants."""


class DomainError(ConfigurationError):
    """Argument outside the mathematical domain of an operation."""


class NumericalError(StarThzError):
    """A numerical procedure failed to converge or lost too much accuracy."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
