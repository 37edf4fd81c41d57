"""Exception types shared across the package."""


class SolvGroupError(Exception):
    """Base class for all library errors."""


class WordSyntaxError(SolvGroupError):
    """A word string does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InputValidationError(SolvGroupError):
    """An input value violates a documented precondition."""


class ContextMismatchError(SolvGroupError):
    """Flows attached to different graph contexts were combined."""


class CapExceededError(SolvGroupError):
    """A brute-force solver would exceed its configured cap."""


class UnsupportedOracleError(SolvGroupError):
    """The oracle lacks a capability the requested operation needs."""
