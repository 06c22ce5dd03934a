"""Membership verdicts shared by every cone test."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class MembershipVerdict(Enum):
    INTERIOR = "I"
    BOUNDARY = "B"
    OUTSIDE = "O"
    UNKNOWN = "U"

    @property
    def code(self) -> str:
        return self.value

    @property
    def exit_code(self) -> int:
        return _EXIT[self]

    @property
    def is_member(self) -> bool | None:
        if self is MembershipVerdict.UNKNOWN:
            return None
        return self is not MembershipVerdict.OUTSIDE

    def __str__(self):
        return self.name.capitalize()


_EXIT = {
    MembershipVerdict.INTERIOR: 0,
    MembershipVerdict.BOUNDARY: 1,
    MembershipVerdict.OUTSIDE: 2,
    MembershipVerdict.UNKNOWN: 3,
}

INTERIOR = MembershipVerdict.INTERIOR
BOUNDARY = MembershipVerdict.BOUNDARY
OUTSIDE = MembershipVerdict.OUTSIDE
UNKNOWN = MembershipVerdict.UNKNOWN


@dataclass(frozen=True, eq=False)
class Decision:
    """A verdict together with the exact data that decided it.

    Compares equal to a bare :class:`MembershipVerdict` with the same value,
    so ``convex_status(p) == BOUNDARY`` reads naturally.
    """

    verdict: MembershipVerdict
    cone: str
    reason: str = ""
    evidence: dict = field(default_factory=dict)

    def __eq__(self, other):
        if isinstance(other, MembershipVerdict):
            return self.verdict is other
        if isinstance(other, Decision):
            return self.verdict is other.verdict and self.cone == other.cone
        return NotImplemented

    def __hash__(self):
        return hash((self.verdict, self.cone))

    @property
    def is_member(self):
        return self.verdict.is_member

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_json(self) -> dict:
        from .serialize import jsonable

        return {
            "cone": self.cone,
            "verdict": str(self.verdict),
            "code": self.verdict.code,
            "reason": self.reason,
            "evidence": jsonable(self.evidence),
        }
