"""Exception hierarchy for brownthompson."""

from typing import Optional


class BrownThompsonError(Exception):
    """Base class for all library errors."""


class ParseError(BrownThompsonError):
    """Malformed word text."""

    def __init__(self, position: int, token: str, message: Optional[str] = None):
        self.position = position
        self.token = token
        super().__init__(message or f"Malformed token {token!r} at position {position}")


class EmptyWord(BrownThompsonError):
    """Operation needs a nonempty word."""


class NotNeutral(BrownThompsonError):
    """Operation needs a word evaluating to the identity."""


class WrongArity(BrownThompsonError):
    """Input lives in F_p for the wrong p."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Expected p={expected}, got p={got}")


class NotConnected(BrownThompsonError):
    """Planar graph is disconnected (a construction bug)."""


class PreconditionViolated(BrownThompsonError):
    """Inputs do not satisfy the documented precondition."""


class VerificationFailed(BrownThompsonError):
    """A computed result failed its independent re-check."""


class BudgetExceeded(BrownThompsonError):
    """Enumeration would exceed the configured budget."""

    def __init__(self, requested: int, budget: int, what: str = "words"):
        self.requested = requested
        self.budget = budget
        super().__init__(f"Refusing to enumerate {requested} {what} (budget {budget})")
