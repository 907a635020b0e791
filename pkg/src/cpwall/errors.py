"""Exception types raised by the library."""


class CasimirError(Exception):
    """Base class for library errors."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedOrderError(DomainError):
    """Incomplete gamma order outside the supported range."""


class OutOfRegimeError(DomainError):
    """An asymptotic expansion was asked for outside its range of validity."""


class UnsupportedModelError(CasimirError, TypeError):
    """The requested evaluation path needs a different atom or metal model."""


class ConfigurationError(CasimirError):
    """A required input (for example the static polarizability) is missing."""


class IngestionError(CasimirError, ValueError):
    """A polarizability table could not be parsed or violates its invariants."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NumericalError(CasimirError, ArithmeticError):
    """A quadrature or series failed to converge.

    ``partial`` carries the best estimate reached before giving up.
    """

    def __init__(self, message, partial=None, diagnostics=None):
        self.partial = partial
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class TruncationError(NumericalError):
    """The Matsubara sum hit its term cap before meeting the tail tolerance."""


class SeriesError(NumericalError):
    """An asymptotic series did not converge within its term budget."""
