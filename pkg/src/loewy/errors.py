"""Exception types shared across the package.

DomainError marks invalid parameters (CLI exit code 1), CapacityError marks
inputs that exceed a configured resource guard (CLI exit code 2).
"""


class DomainError(ValueError):
    """Parameters violate a precondition (bad q, non-divisibility, ...)."""


class CapacityError(RuntimeError):
    """Input is valid but exceeds a memory/runtime guard."""
