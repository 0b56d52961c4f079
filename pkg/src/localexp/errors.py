"""Exception types shared across the package."""


class LocalExpError(Exception):
    """Base class for all package errors."""


class InvalidGrid(LocalExpError):
    pass


class StencilTooLarge(LocalExpError):
    pass


class DuplicateNodes(LocalExpError):
    pass


class OrderTooHigh(LocalExpError):
    pass


class NonFinite(LocalExpError):
    """Raised when an input, intermediate, or result stops being finite.

    Carries the last finite state of a time integration when raised by the
    run loop (``state`` and ``time`` attributes, else ``None``).
    """

    def __init__(self, message, state=None, time=None):
        super().__init__(message)
        self.state = state
        self.time = time


class NoConvergence(LocalExpError):
    pass


class DimensionMismatch(LocalExpError):
    pass


class NotWarmedUp(LocalExpError):
    pass


class InvalidConfig(LocalExpError):
    pass
