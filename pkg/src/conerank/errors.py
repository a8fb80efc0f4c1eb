"""Exception types shared across the package."""


class ConerankError(Exception):
    """Base class for all package-specific errors."""


class InputValidationError(ConerankError):
    """Numeric input rejected: negative entries, asymmetry, wrong shape, bad parameters."""


class ZeroInputError(InputValidationError):
    """All-zero input: the rank is 0 and there is nothing to bound."""


class CapExceededError(ConerankError):
    """An exact search was refused because the instance exceeds the configured cap."""


class SolveFailedError(ConerankError):
    """A bound could not be certified; carries the solver status that prevented it."""

    def __init__(self, status: str, message: str = ""):
        self.status = status
        super().__init__(message or f"solver returned status {status!r}")
