"""Shared result records: validation reports and search provenance."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError


@dataclass(frozen=True)
class Report:
    """Outcome of a validator: pass flag plus the first failing axiom."""

    ok: bool
    check: str
    message: str = ""
    location: dict = field(default_factory=dict)

    @classmethod
    def passed(cls, check: str) -> Report:
        return cls(True, check)

    @classmethod
    def failed(cls, check: str, message: str, **location) -> Report:
        return cls(False, check, message, location)

    def __bool__(self) -> bool:
        return self.ok

    def raise_for_failure(self) -> None:
        if not self.ok:
            raise ValidationError(self.check, self.message, self.location)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "check": self.check,
            "message": self.message,
            "location": {k: _plain(v) for k, v in self.location.items()},
        }


def first_failure(*reports: Report, check: str = "all") -> Report:
    """The first failed report, or a pass labelled *check*."""
    for r in reports:
        if not r.ok:
            return r
    return Report.passed(check)


@dataclass(frozen=True)
class SearchProvenance:
    """How a witness search ran: exhaustive enumeration or seeded attempts."""

    exhaustive: bool
    seed: int
    attempts: int

    def to_dict(self) -> dict:
        return {"exhaustive": self.exhaustive, "seed": hex(self.seed), "attempts": self.attempts}


def _plain(value):
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value
