"""Verification reports and the shared error types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple


class DomainError(ValueError):
    """An element lies outside the carrier (or outside a continuous domain guard)."""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its stated preconditions."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class BoundExceeded(ValueError):
    """An exhaustive checker was asked to run above its size cap."""


class Verdict(NamedTuple):
    """A boolean answer together with the evidence behind a negative one."""

    ok: bool
    witness: Any = None
    note: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: tuple | None = None
    samples: int = 0
    note: str | None = None

    def to_dict(self, encode=None) -> dict:
        witness = self.witness
        if witness is not None and encode is not None:
            witness = [encode(w) for w in witness]
        elif witness is not None:
            witness = list(witness)
        out = {"name": self.name, "passed": self.passed, "samples": self.samples}
        if witness is not None:
            out["witness"] = witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.checks + other.checks, self.notes + other.notes)

    def to_dict(self, encode=None) -> dict:
        out = {
            "overall": self.overall,
            "checks": [c.to_dict(encode) for c in self.checks],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def render(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"[{mark}] {c.name} ({c.samples} cases)"
            if c.witness is not None and not c.passed:
                line += f" witness={c.witness!r}"
            if c.note:
                line += f"  # {c.note}"
            lines.append(line)
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)
