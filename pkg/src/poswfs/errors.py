"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PoswfsError(Exception):
    pass


class StructureError(PoswfsError):
    """Malformed input: wrong dimensions, unknown labels, mismatched objects."""


class PreconditionError(PoswfsError):
    pass


class ConstructionError(PoswfsError):
    """A construction produced an object that fails its own post-checks."""


class InternalInconsistency(PoswfsError):
    """Raised when a check that should be unreachable fails."""


class BudgetExceeded(PoswfsError):
    def __init__(self, what: str, bound: int):
        super().__init__(f"{what}: budget of {bound} exceeded")
        self.what = what
        self.bound = bound
