"""Check records, exit codes and the text/JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..verdict import FAILS, HOLDS, UNKNOWN, Verdict
from .checks import ERROR

EXIT_CODES = {HOLDS: 0, FAILS: 1, UNKNOWN: 2, ERROR: 3}
# error > fails > unknown > holds
_PRECEDENCE = (ERROR, FAILS, UNKNOWN, HOLDS)

RECORD_SCHEMA = {
    "type": "object",
    "required": ["predicate", "morphism", "verdict", "millis"],
    "additionalProperties": False,
    "properties": {
        "predicate": {"type": "string"},
        "morphism": {"type": "string"},
        "verdict": {"enum": [HOLDS, FAILS, UNKNOWN, ERROR]},
        "witness": {},
        "certificate": {},
        "bound": {"type": "integer", "minimum": 0},
        "reason": {"type": "string"},
        "millis": {"type": "integer", "minimum": 0},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["version", "exit_code", "records"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": 1},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "records": {"type": "array", "items": RECORD_SCHEMA},
        "census": {"type": "object"},
    },
}


@dataclass
class Record:
    predicate: str
    target: str
    verdict: Verdict
    millis: int = 0

    @property
    def status(self) -> str:
        return self.verdict.status

    @property
    def bound(self) -> Optional[int]:
        b = self.verdict.bound
        if b is None:
            b = self.verdict.details.get("bound")
        return None if b is None else int(b)


def exit_code(statuses) -> int:
    seen = set(statuses)
    for s in _PRECEDENCE:
        if s in seen:
            return EXIT_CODES[s]
    return 0


def plain(x: Any):
    """JSON-ready copy: tuples become lists, numpy scalars become ints."""
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, np.ndarray):
        return plain(x.tolist())
    if x is None or isinstance(x, (str, float)):
        return x
    return str(x)


def show(x: Any) -> str:
    """Element expressions as written: strings bare, tuples in parentheses."""
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(show(v) for v in x) + ")"
    if isinstance(x, np.ndarray):
        return show(x.tolist())
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def record_dict(r: Record) -> dict:
    v = r.verdict
    out = {"predicate": r.predicate, "morphism": r.target, "verdict": v.status}
    if v.witness is not None and v.status != HOLDS:
        out["witness"] = plain(v.witness)
    if v.certificate is not None:
        out["certificate"] = plain(v.certificate)
    if r.bound is not None:
        out["bound"] = r.bound
    if v.reason:
        out["reason"] = v.reason
    out["millis"] = int(r.millis)
    return out


def text_line(r: Record) -> str:
    v = r.verdict
    head = f"{r.predicate} {r.target}: {v.status.upper()}"
    if v.status == HOLDS:
        body = f"certificate: {show(v.certificate)}" if v.certificate is not None else v.reason
    elif v.status == FAILS:
        body = f"witness: {show(v.witness)}" + (f"; {v.reason}" if v.reason else "")
    elif v.status == UNKNOWN:
        body = f"bound {r.bound}: {v.reason}" + (f"; open at {show(v.witness)}" if v.witness is not None else "")
    else:
        body = v.reason
    line = f"{head} ({body})" if body else head
    if r.millis:
        line += f" [{r.millis} ms]"
    return line


def emit_report(records: list[Record], fmt: str = "text", census: Optional[dict] = None, code: Optional[int] = None) -> str:
    if code is None:
        code = exit_code(r.status for r in records)
    if fmt == "json":
        doc = {"version": 1, "exit_code": code, "records": [record_dict(r) for r in records]}
        if census is not None:
            doc["census"] = plain(census)
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    lines = [text_line(r) for r in records] if census is None else census_text(census)
    return "\n".join(lines) + "\n" if lines else ""


def census_text(c: dict) -> list[str]:
    out = [f"census: {c['morphisms']} regular epis (finite domain order <= {c['max_order']}, {c['block']} block)"]
    width = max(len(p) for p in c["counts"])
    out.append(f"{'predicate'.ljust(width)}  holds  fails  unknown  error")
    for p, n in c["counts"].items():
        out.append(f"{p.ljust(width)}  {n[HOLDS]:5d}  {n[FAILS]:5d}  {n[UNKNOWN]:7d}  {n[ERROR]:5d}")
    out.append(f"central but not gammac-normal: {c['central_not_gammac']}")
    out.append(f"gammac-normal but not central: {c['gammac_not_central_count']}")
    for name in c["gammac_not_central"]:
        out.append(f"  separation: {name}")
    out.append(f"central vs normal-g disagreements: {c['central_vs_normal_g']}")
    out.append(f"gammac-normal vs normal-gc disagreements: {c['gammac_vs_normal_gc']}")
    return out
