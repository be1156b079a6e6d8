"""Exception hierarchy shared by the library and the CLI."""


class KnapgapError(Exception):
    """Base class for all knapgap errors."""


class InvalidInstanceError(KnapgapError, ValueError):
    """Input violates a precondition; ``clause`` names the violated condition."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class ScaleError(KnapgapError):
    """A brute-force routine refused to run because its enumeration cap would be exceeded."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class InfeasibleError(KnapgapError):
    """The knapsack fiber contains no nonnegative integer point."""


class UnboundedError(KnapgapError):
    """The optimisation problem is unbounded below."""


class InvariantViolation(KnapgapError, AssertionError):
    """A proven inequality failed to hold on a computed object."""
