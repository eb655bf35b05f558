"""Exception types shared across the package."""

from __future__ import annotations


class ReldavError(Exception):
    """Base class for every error raised by this package."""


class InvalidGroupError(ReldavError, ValueError):
    pass


class DomainError(ReldavError, ValueError):
    """An element or subset does not belong to the group it is used with."""


class InvalidSubgroupError(ReldavError, ValueError):
    pass


class InvalidArgumentError(ReldavError, ValueError):
    pass


class GroupTooLargeError(ReldavError):
    """Exhaustive search refused because the group exceeds the size guard."""

    def __init__(self, order: int, limit: int):
        super().__init__(
            f"group of order {order} exceeds the search guard of {limit}; "
            "raise max_order explicitly or use a closed form"
        )
        self.order = order
        self.limit = limit


class UnsupportedCaseError(ReldavError):
    """The requested parameters fall outside every formula the engine knows."""


class PreconditionError(ReldavError):
    pass


class InvariantViolation(ReldavError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
