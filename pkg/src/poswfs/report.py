from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class ClassReport:
    """Verdict of a membership check plus an optional witness.

    Truthiness follows the verdict, so ``if is_split_epi(f): ...`` works.
    The witness is a section/retraction/diagonal when the verdict is
    constructive, and a counterexample (pair, triple, square) otherwise.
    """

    verdict: bool
    witness: Any = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict


def passed(witness: Any = None, reason: str = "") -> ClassReport:
    return ClassReport(True, witness, reason)


def failed(reason: str, witness: Any = None) -> ClassReport:
    return ClassReport(False, witness, reason)
