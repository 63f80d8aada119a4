# Three-valued verdicts carrying certificates, witnesses or exhausted budgets
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, Optional


class Outcome(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def negated(self) -> "Outcome":
        if self is Outcome.YES:
            return Outcome.NO
        if self is Outcome.NO:
            return Outcome.YES
        return Outcome.UNKNOWN


@dataclass(frozen=True)
class Verdict3:
    """
    Outcome of a decision procedure.

    Yes and No always carry checkable evidence (a certificate or a witness
    object exposing ``to_record()``); Unknown carries the reason and the
    budgets that were spent.
    """

    outcome: Outcome
    evidence: Any = None
    budgets_used: Dict[str, int] = field(default_factory=dict)
    reason: str = ""

    @classmethod
    def yes(cls, evidence, budgets_used=None, reason=""):
        return cls(Outcome.YES, evidence, dict(budgets_used or {}), reason)

    @classmethod
    def no(cls, evidence, budgets_used=None, reason=""):
        return cls(Outcome.NO, evidence, dict(budgets_used or {}), reason)

    @classmethod
    def unknown(cls, reason, budgets_used=None, evidence=None):
        return cls(Outcome.UNKNOWN, evidence, dict(budgets_used or {}), reason)

    @property
    def is_yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def is_no(self) -> bool:
        return self.outcome is Outcome.NO

    @property
    def is_unknown(self) -> bool:
        return self.outcome is Outcome.UNKNOWN

    def negated(self) -> "Verdict3":
        """Same evidence with Yes and No swapped."""
        return Verdict3(self.outcome.negated(), self.evidence, dict(self.budgets_used), self.reason)

    def to_record(self) -> Dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "evidence": evidence_record(self.evidence),
            "budgets_used": dict(sorted(self.budgets_used.items())),
            "reason": self.reason,
        }


def evidence_record(evidence: Optional[Any]):
    """Serialize an evidence object (or None) to plain JSON-able data."""
    if evidence is None:
        return None
    if hasattr(evidence, "to_record"):
        return evidence.to_record()
    return evidence
