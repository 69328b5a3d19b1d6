"""Exception hierarchy shared by every lab module."""


class LabError(Exception):
    """Base class for errors raised by the lab."""


class ConfigurationError(LabError, ValueError):
    """Invalid input: a precondition on parameters or geometry does not hold."""


class GeometryError(ConfigurationError):
    """Boundary, reparametrization or arc configuration is inadmissible."""


class MeshError(LabError, RuntimeError):
    """Triangulation could not be produced or failed its quality checks."""


class NumericalError(LabError, RuntimeError):
    """A solver or quadrature failed to reach its tolerance."""

    def __init__(
        self,
        message: str,
        estimate: float | None = None,
        residuals: list[float] | None = None,
    ):
        super().__init__(message)
        self.estimate = estimate
        self.residuals = residuals


class CheckViolation(LabError):
    """A computed quantity violates a sign or monotonicity law it must obey."""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.details = details or {}


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code.

    Args:
        error: Exception raised while running a CLI verb

    Returns:
        2 for configuration errors, 3 for numerical failures, 4 for check violations
    """
    from pydantic import ValidationError

    if isinstance(error, CheckViolation):
        return 4
    if isinstance(error, ConfigurationError | ValidationError):
        return 2
    if isinstance(error, NumericalError | MeshError):
        return 3
    return 1
