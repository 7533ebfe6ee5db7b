"""Suite reports and their JSON-lines serialization."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .. import __version__

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def case_sort_key(case_id: str):
    """Natural order: digit runs compare as numbers, so R2 sorts before R10."""
    return [(0, int(tok), "") if tok.isdigit() else (1, 0, tok) for tok in re.findall(r"\d+|\D+", case_id)]


@dataclass
class CaseResult:
    suite: str
    case: str
    status: str
    witness: Any = None
    counts: dict[str, int] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"type": "case", "suite": self.suite, "case": self.case, "status": self.status}
        if self.counts:
            out["counts"] = self.counts
        if self.witness is not None:
            out["witness"] = self.witness
        if self.info:
            out["info"] = self.info
        return out


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult] = field(default_factory=list)

    def add(self, case: str, ok: bool | None, witness=None, counts=None, info=None) -> CaseResult:
        status = SKIPPED if ok is None else PASS if ok else FAIL
        res = CaseResult(self.suite, case, status, witness, dict(counts or {}), dict(info or {}))
        self.cases.append(res)
        return res

    def sorted_cases(self) -> list[CaseResult]:
        return sorted(self.cases, key=lambda c: case_sort_key(c.case))

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        n_pass = sum(c.status == PASS for c in self.cases)
        n_skip = sum(c.status == SKIPPED for c in self.cases)
        line = f"{self.suite}: {n_pass} passed, {len(self.failures)} failed"
        return line + (f", {n_skip} skipped" if n_skip else "")


def header_record(seed: int, pool: int, suites: list[str], backend: str) -> dict:
    return {"type": "header", "version": __version__, "seed": seed, "pool": pool,
            "suites": suites, "backend": backend}


def dumps_report(header: dict, reports: list[SuiteReport]) -> str:
    lines = [json.dumps(header, sort_keys=True)]
    for rep in reports:
        lines.extend(json.dumps(c.to_json(), sort_keys=True) for c in rep.sorted_cases())
    return "\n".join(lines) + "\n"


def write_report(path, header: dict, reports: list[SuiteReport]) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_report(header, reports))


def read_report(path) -> tuple[dict, list[dict]]:
    with open(path) as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    if not records or records[0].get("type") != "header":
        raise ValueError(f"{path}: first record is not a header")
    return records[0], records[1:]
