"""Executable weak factorization systems on finite S-posets."""

from .errors import (
    BudgetExceeded,
    ConstructionError,
    InternalInconsistency,
    PoswfsError,
    PreconditionError,
    StructureError,
)
from .order import MonotoneMap, Poset, is_complete, macneille_completion
from .pomonoid import Pomonoid, named_pomonoid
from .report import ClassReport
from .sposet import SPoset, SPosetMap, compose, identity_map
from .suites import run_suite

__all__ = [
    "BudgetExceeded",
    "ClassReport",
    "ConstructionError",
    "InternalInconsistency",
    "MonotoneMap",
    "Poset",
    "Pomonoid",
    "PoswfsError",
    "PreconditionError",
    "SPoset",
    "SPosetMap",
    "StructureError",
    "compose",
    "identity_map",
    "is_complete",
    "macneille_completion",
    "named_pomonoid",
    "run_suite",
]
