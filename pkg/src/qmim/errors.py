"""Exception and warning types shared across the package."""


class InvalidStateError(ValueError):
    """A quantum state violates a physicality invariant (norm, trace, positivity)."""


class NumericalFailureError(ArithmeticError):
    """A computed quantity landed outside its tolerated numerical range."""


class StateFormatError(ValueError):
    """A state or distribution file could not be parsed."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ClippedMutualInfoWarning(UserWarning):
    """A slightly negative mutual information was clipped to zero."""
