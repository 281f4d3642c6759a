"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (bad spec, failed condition, ...)."""


class Indeterminate(ArithmeticError):
    """An approximate comparison could not be decided at the working precision."""


class Falsification(AssertionError):
    """A certified claim was contradicted by an independent check.

    Raised (or reported) only when something that the mathematics guarantees
    turns out false, so it always indicates a bug or tampered input.
    """
