"""Law-check reports and their JSON form."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

MAX_RECORDED_FAILURES = 200


@dataclass(frozen=True)
class Failure:
    law: str
    instance: str
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"law": self.law, "instance": self.instance, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class LawReport:
    """Outcome of one law suite.

    ``failures`` is empty iff every checked instance passed. Only the first
    ``MAX_RECORDED_FAILURES`` failures are kept; ``omitted`` counts the rest.
    ``exact`` is False when some instance was only checked up to bounded
    bisimilarity.
    """

    suite: str
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)
    exact: bool = True
    omitted: int = 0
    elapsed_ms: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures and not self.omitted

    def check(self, law: str, lhs: Any, rhs: Any, instance: Callable[[], str] | str = "",
              eq: Callable[[Any, Any], bool] | None = None) -> bool:
        ok = (lhs == rhs) if eq is None else eq(lhs, rhs)
        self.record(law, ok, instance, lhs, rhs)
        return ok

    def record(self, law: str, ok: bool, instance: Callable[[], str] | str = "", lhs: Any = "", rhs: Any = "") -> None:
        self.instances += 1
        self.counts[law] = self.counts.get(law, 0) + 1
        if ok:
            return
        if len(self.failures) >= MAX_RECORDED_FAILURES:
            self.omitted += 1
            return
        text = instance() if callable(instance) else str(instance)
        self.failures.append(Failure(law, text, _show(lhs), _show(rhs)))

    def skip(self, region: str) -> None:
        self.skipped.append(region)

    def merge(self, other: "LawReport") -> "LawReport":
        self.instances += other.instances
        for law, n in other.counts.items():
            self.counts[law] = self.counts.get(law, 0) + n
        room = MAX_RECORDED_FAILURES - len(self.failures)
        self.failures.extend(other.failures[:room])
        self.omitted += other.omitted + max(0, len(other.failures) - room)
        self.skipped.extend(other.skipped)
        self.exact = self.exact and other.exact
        return self

    def to_json(self, deterministic: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "instances": self.instances,
            "failures": [f.to_json() for f in self.failures],
            "exact": self.exact,
        }
        if self.skipped:
            out["skipped"] = list(self.skipped)
        if self.omitted:
            out["omitted_failures"] = self.omitted
        if not deterministic and self.elapsed_ms is not None:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        laws = ", ".join(f"{law}={n}" for law, n in self.counts.items())
        line = f"{status} {self.suite}: {self.instances} instances, {len(self.failures) + self.omitted} failures"
        if laws:
            line += f" [{laws}]"
        if self.skipped:
            line += f" skipped: {'; '.join(self.skipped)}"
        return line


def _show(value: Any) -> str:
    return value if isinstance(value, str) else repr(value)


class timed:
    """Context manager stamping ``elapsed_ms`` on a report."""

    def __init__(self, report: LawReport):
        self.report = report

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed_ms = int((time.perf_counter() - self._t0) * 1000)
        return False


LAW_REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "instances", "failures"],
    "properties": {
        "suite": {"type": "string"},
        "instances": {"type": "integer", "minimum": 0},
        "failures": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["law", "instance", "lhs", "rhs"],
                "properties": {
                    "law": {"type": "string"},
                    "instance": {"type": "string"},
                    "lhs": {"type": "string"},
                    "rhs": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "exact": {"type": "boolean"},
        "skipped": {"type": "array", "items": {"type": "string"}},
        "omitted_failures": {"type": "integer", "minimum": 0},
        "elapsed_ms": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}
