class CapacityError(ValueError):
    """A generation or spectrum size exceeds the configured cap."""


class ToleranceNotReached(RuntimeError):
    """Adaptive quadrature hit its node budget before meeting ``tol``.

    The best available estimate and its error indicator are kept on the
    exception so callers can still report them.
    """

    def __init__(self, value, error, tol):
        super().__init__(
            f"tolerance {tol:g} not reached; estimate {value!r} with error {error:g}"
        )
        self.value = value
        self.error = error
        self.tol = tol
