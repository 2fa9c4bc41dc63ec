"""Law reports: the one record type every check in this package produces.

A report says which law ran, how its quantifiers were enumerated
(exhaustively or as a seeded sample), how many cases executed, and --
on failure -- a witness dict whose values are canonical serializable
forms (atoms, tables, nested lists), so the failure can be replayed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field


def canon(value):
    """Canonical JSON-ready form: tuples become lists, recursively."""
    if isinstance(value, tuple):
        return [canon(v) for v in value]
    if isinstance(value, list):
        return [canon(v) for v in value]
    if isinstance(value, dict):
        return {str(k): canon(v) for k, v in value.items()}
    return value


@dataclass
class LawReport:
    law_id: str
    anchor: str                 # tag tying the law to its source statement, or "plumbing"
    mode: str                   # "exhaustive" | "sampled"
    cases: int
    outcome: str                # "pass" | "fail"
    witness: dict | None = None
    ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def to_dict(self) -> dict:
        d = {
            "id": self.law_id,
            "anchor": self.anchor,
            "mode": self.mode,
            "cases": self.cases,
            "outcome": self.outcome,
            "ms": round(self.ms, 3),
        }
        if self.witness is not None:
            d["witness"] = canon(self.witness)
        return d


def witness_bytes(witness) -> str:
    """Stable serialization used for byte-identity comparisons across runs."""
    return json.dumps(canon(witness), sort_keys=True, separators=(",", ":"))


class LawRun:
    """Accumulator for one law: counts cases, keeps the first counterexample."""

    def __init__(self, law_id: str, anchor: str):
        self.law_id = law_id
        self.anchor = anchor
        self.cases = 0
        self.witness = None
        self.exhaustive = True
        self._t0 = time.perf_counter()

    def sampled(self) -> None:
        self.exhaustive = False

    def check(self, ok: bool, witness_fn) -> bool:
        """Record one case; returns False once a counterexample is held."""
        self.cases += 1
        if not ok and self.witness is None:
            self.witness = canon(witness_fn())
            return False
        return self.witness is None

    def fail(self, witness: dict) -> None:
        if self.witness is None:
            self.witness = canon(witness)

    @property
    def failed(self) -> bool:
        return self.witness is not None

    def report(self) -> LawReport:
        return LawReport(
            law_id=self.law_id,
            anchor=self.anchor,
            mode="exhaustive" if self.exhaustive else "sampled",
            cases=self.cases,
            outcome="fail" if self.failed else "pass",
            witness=self.witness,
            ms=(time.perf_counter() - self._t0) * 1000.0,
        )


def failed_reports(reports) -> list[LawReport]:
    return [r for r in reports if not r.passed]
