"""Check records and reports.

A report is a list of records in the order the checks ran, plus summary
counts. JSON output sorts keys and omits timings unless asked, so two runs
on the same scenario give identical bytes.
"""

import json
from dataclasses import dataclass, field

from .anchors import anchor
from .finmod import FinModule, ModuleMap, Submodule

REPORT_SCHEMA = "localix-report/1"


def jsonable(value):
    """Plain JSON data for witnesses and details."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, Submodule):
        return str(value)
    if isinstance(value, ModuleMap):
        return jsonable(value.matrix)
    if isinstance(value, FinModule):
        return str(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


@dataclass
class Record:
    check: str
    subject: str
    passed: bool
    witness: dict = None
    details: dict = None
    elapsed: float = None

    @property
    def anchor(self):
        return anchor(self.check)

    @property
    def status(self):
        return "pass" if self.passed else "fail"

    def to_dict(self, timings=False):
        out = {
            "check": self.check,
            "anchor": self.anchor,
            "status": self.status,
            "subject": self.subject,
            "witness": jsonable(self.witness),
        }
        if self.details:
            out["details"] = jsonable(self.details)
        if timings and self.elapsed is not None:
            out["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return out


@dataclass
class Report:
    command: str
    scenario: str
    corpus: list = field(default_factory=list)
    records: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    invalid: bool = False

    def add(self, check, subject, passed, witness=None, details=None, elapsed=None):
        if not passed and witness is None:
            witness = {"reason": "no witness recorded"}
        rec = Record(check, subject, bool(passed), None if passed else witness, details, elapsed)
        self.records.append(rec)
        return rec

    def add_law(self, subject, law, elapsed=None):
        return self.add(law.check, subject, law.passed, law.witness, law.details, elapsed)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]

    @property
    def passed(self):
        return not self.invalid and not self.failures

    def summary(self):
        by_check = {}
        for r in self.records:
            counts = by_check.setdefault(r.check, {"pass": 0, "fail": 0})
            counts[r.status] += 1
        return {
            "total": len(self.records),
            "pass": sum(r.passed for r in self.records),
            "fail": len(self.failures),
            "by_check": by_check,
        }

    def to_dict(self, timings=False):
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "scenario": self.scenario,
            "corpus": list(self.corpus),
            "valid": not self.invalid,
            "records": [r.to_dict(timings) for r in self.records],
            "results": jsonable(self.results),
            "summary": self.summary(),
        }

    def to_json(self, timings=False):
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2) + "\n"

    def to_text(self, timings=False):
        lines = [f"{self.command} on {self.scenario}"]
        for r in self.records:
            line = f"  {r.status.upper():4} {r.check:22} {r.anchor:10} {r.subject}"
            if timings and r.elapsed is not None:
                line += f"  ({r.elapsed * 1000:.1f} ms)"
            lines.append(line)
            if not r.passed:
                lines.append(f"       witness: {json.dumps(jsonable(r.witness), sort_keys=True)}")
        s = self.summary()
        verdict = "INVALID SCENARIO" if self.invalid else ("OK" if self.passed else "VIOLATIONS")
        lines.append(f"{s['total']} checks, {s['pass']} passed, {s['fail']} failed: {verdict}")
        return "\n".join(lines) + "\n"
