"""Exception hierarchy.

``UserError`` subclasses signal bad input (CLI exit code 1);
``ConsistencyError`` signals a violated internal invariant (exit code 2).
"""


class SPNError(Exception):
    pass


class UserError(SPNError):
    pass


class InvalidArgument(UserError, ValueError):
    pass


class OutOfRange(UserError, IndexError):
    pass


class CacheError(SPNError):
    """Cache file missing, corrupt or describing a different table."""


class TruncationError(UserError):
    """Series evaluation requested with a truncation not certified for it."""


class NoSolutionError(UserError):
    pass


class AmbiguousSolutionError(UserError):
    def __init__(self, message, sign_changes=()):
        super().__init__(message)
        self.sign_changes = list(sign_changes)


class PrecisionError(SPNError):
    pass


class ConsistencyError(SPNError, AssertionError):
    pass
