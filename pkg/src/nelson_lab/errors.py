"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where an operation is defined."""

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class PreconditionError(ValueError):
    """The inputs are valid but the requested specialization does not apply."""


class ToleranceNotReached(RuntimeError):
    """Adaptive integration exhausted its budget before meeting the tolerance.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class DivergentCounterterm(ValueError):
    """The counterterm grows like log(cutoff) and has no finite value at an infinite cutoff."""


class SizingError(MemoryError):
    """A simulation would exceed the configured memory budget."""
