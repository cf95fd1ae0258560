"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A size, index or numeric parameter is outside its allowed range."""


class EdgeListParseError(ValueError):
    """Malformed edge-list text. ``lineno`` is 1-based."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class NumericalFailureError(RuntimeError):
    """An iterative numerical routine failed to reach its tolerance."""

    def __init__(self, message, residual=None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (achieved residual {residual:.3e})"
        super().__init__(message)


class DegenerateWindowError(InvalidParameterError):
    """The smallest Q-eigenvalue is not simple, so no principal window exists."""
