"""Three-valued results carried by every decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: Any = None
    witness: Any = None
    bound: Optional[int] = None
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN

    @property
    def definite(self) -> bool:
        return self.status != UNKNOWN

    def __bool__(self):
        raise TypeError("use .holds / .fails / .unknown on a Verdict")


def Holds(certificate=None, reason: str = "", **details) -> Verdict:
    return Verdict(HOLDS, certificate=certificate, reason=reason, details=details)


def Fails(witness=None, reason: str = "", **details) -> Verdict:
    return Verdict(FAILS, witness=witness, reason=reason, details=details)


def Unknown(bound: int, reason: str = "", witness=None, **details) -> Verdict:
    return Verdict(UNKNOWN, witness=witness, bound=bound, reason=reason, details=details)


def conjoin(*parts: Verdict) -> Verdict:
    """First Fails wins, then first Unknown, else Holds with the certificates collected."""
    for v in parts:
        if v.fails:
            return v
    for v in parts:
        if v.unknown:
            return v
    return Holds(tuple(v.certificate for v in parts), reason="; ".join(v.reason for v in parts if v.reason))


def from_bool(ok: bool, witness=None, reason: str = "", certificate=None) -> Verdict:
    return Holds(certificate, reason) if ok else Fails(witness, reason)
