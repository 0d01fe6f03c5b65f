"""Shared exception types."""


class StructureError(ValueError):
    """Operands disagree on algebra shape, vector length, or matrix size."""


class DomainError(ValueError):
    """A mathematical precondition (positivity, commutativity, ...) fails.

    Diagnostic payloads such as the offending index or the measured minimum
    spectrum are attached as keyword details.
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def __str__(self):
        base = super().__str__()
        if not self.details:
            return base
        tail = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{base} ({tail})"


class RangeError(ValueError):
    """An input exceeds a configured magnitude cap."""


class NumericalError(RuntimeError):
    """A dense eigensolver or factorization did not converge."""

    def __init__(self, message: str, block: int | None = None):
        super().__init__(message)
        self.block = block
