"""Machine-readable verification reports.

A report is a list of named checks, each pass/fail/skipped with an optional
counterexample certificate (rendered inputs and both sides of the failed
identity), plus a coverage fraction for partially defined structures.
JSON output is deterministic: sorted keys, all numbers as strings, no
timing data.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Union

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

# Detail values may be plain strings or algebra Elements; Elements are
# rendered as strings for humans and as sorted (monomial, coefficient)
# pair lists in JSON.
DetailValue = Union[str, "Element"]  # noqa: F821 (structural, no import cycle)


def _detail_json(value):
    from .algebra import Element, element_to_pairs
    if isinstance(value, Element):
        return [list(pair) for pair in element_to_pairs(value)]
    return str(value)


@dataclass
class CheckResult:
    name: str
    verdict: str
    checked: int = 0
    skipped: int = 0
    certificate: Optional[Dict[str, str]] = None


class CheckAccumulator:
    """Tallies one named check over many instances, keeping the first
    counterexample as the certificate."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.skipped = 0
        self.failures = 0
        self.certificate: Optional[Dict[str, str]] = None

    def record_pass(self) -> None:
        self.checked += 1

    def record_skip(self) -> None:
        self.skipped += 1

    def record_fail(self, certificate: Dict[str, str]) -> None:
        self.checked += 1
        self.failures += 1
        if self.certificate is None:
            self.certificate = dict(certificate)

    def result(self) -> CheckResult:
        if self.failures:
            verdict = FAIL
        elif self.checked == 0 and self.skipped > 0:
            verdict = SKIPPED
        else:
            verdict = PASS
        return CheckResult(self.name, verdict, self.checked, self.skipped,
                           self.certificate)


@dataclass
class Report:
    checks: List[CheckResult] = dc_field(default_factory=list)
    betti: Optional[List[int]] = None
    details: Dict[str, DetailValue] = dc_field(default_factory=dict)
    elapsed: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(c.verdict != FAIL for c in self.checks)

    @property
    def coverage(self) -> Fraction:
        checked = sum(c.checked for c in self.checks)
        skipped = sum(c.skipped for c in self.checks)
        total = checked + skipped
        return Fraction(checked, total) if total else Fraction(1)

    def certificates(self) -> List[Dict[str, str]]:
        out = []
        for c in self.checks:
            if c.certificate is not None:
                cert = {"check": c.name}
                cert.update(c.certificate)
                out.append(cert)
        return out

    def to_json_dict(self) -> Dict:
        verdicts = [
            {"check": c.name, "verdict": c.verdict,
             "checked": str(c.checked), "skipped": str(c.skipped)}
            for c in self.checks
        ]
        doc = {
            "verdicts": verdicts,
            "certificates": self.certificates(),
            "coverage": str(self.coverage),
            "betti": [str(b) for b in self.betti] if self.betti is not None else [],
        }
        if self.details:
            doc["details"] = {k: _detail_json(v)
                              for k, v in sorted(self.details.items())}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def render_human(self) -> str:
        lines = []
        for c in self.checks:
            counts = f"({c.checked} checked"
            counts += f", {c.skipped} skipped)" if c.skipped else ")"
            lines.append(f"{c.verdict.upper():7s} {c.name} {counts}")
            if c.certificate is not None:
                for key, value in c.certificate.items():
                    lines.append(f"        {key}: {value}")
        for key, value in sorted(self.details.items()):
            lines.append(f"{key} = {value}")
        if self.betti is not None:
            lines.append("betti: " + " ".join(str(b) for b in self.betti))
        lines.append(f"coverage: {self.coverage}")
        if self.elapsed is not None:
            lines.append(f"elapsed: {self.elapsed:.3f}s")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


class Stopwatch:
    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._start
        return False


def merge_reports(*reports: Report) -> Report:
    merged = Report()
    for r in reports:
        merged.checks.extend(r.checks)
        merged.details.update(r.details)
        if r.betti is not None:
            merged.betti = r.betti
    return merged
