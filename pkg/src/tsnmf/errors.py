"""Exception types shared across the package.

The CLI maps these onto exit codes: validation errors exit 2, I/O errors
(plain ``OSError``) exit 3, numerical failures exit 4.
"""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class ShapeError(ValidationError):
    """Raised when matrix dimensions do not conform."""


class SpecFileError(ValidationError):
    """Raised on malformed component or synthetic spec files.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(RuntimeError):
    """Raised when an internal numerical invariant is violated."""
