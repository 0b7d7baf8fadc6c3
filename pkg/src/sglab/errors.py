"""Exception types shared across the package."""


class SglabError(Exception):
    """Base class for all package-specific errors."""


class ConstraintViolation(SglabError, ValueError):
    """An element violates its carrier's coordinate constraints."""


class UnknownInstance(SglabError, KeyError):
    """Catalog lookup failed."""

    def __str__(self):  # KeyError would repr() the message
        return self.args[0] if self.args else ""


class BudgetExceeded(SglabError):
    """An exhaustive enumeration would exceed the configured budget."""


class IdempotentPresent(SglabError):
    """Identity adjunction refused: the carrier already has an idempotent."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"idempotent element present: {witness!r}")


class NotStronglyLeftInvariant(SglabError):
    """Identity adjunction refused: d(a, ab) depends on a."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"strong left-invariance fails: {witness!r}")


class LambdaNotLessThanOne(SglabError, ValueError):
    """The Klass-Nowicki hypothesis P(U_n >= 1) < 1 fails."""


class HypothesisNotSatisfied(SglabError, ValueError):
    """Neither the nonnegative nor the symmetric hypothesis applies."""
