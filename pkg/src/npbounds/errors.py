"""Exception types raised by the library."""


class NPBoundsError(Exception):
    """Base class for all library errors."""


class SupportMismatch(NPBoundsError, ValueError):
    """A distribution puts mass where the reference distribution has none."""


class DegenerateFamily(NPBoundsError, ValueError):
    """The two hypotheses coincide (on their common support)."""


class DeltaOutOfRange(NPBoundsError, ValueError):
    """The exponent level is outside the open interval (0, D(Q||P))."""


class DomainError(NPBoundsError, ValueError):
    """An argument lies outside the domain of a function."""


class TooLarge(NPBoundsError, ValueError):
    """An exact computation would exceed the configured size limit."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count
