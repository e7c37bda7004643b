"""Exception types shared by every module and mapped to CLI exit codes."""


class ContractError(ValueError):
    """An argument violates an operation's precondition."""


class ResourceGuardError(RuntimeError):
    """A configured size guard would be exceeded."""


class NumericFailure(ArithmeticError):
    """An iterative method did not converge.

    ``best`` holds the last iterate so callers can still report something.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
