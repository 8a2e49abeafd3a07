"""Check reports and their CSV / JSON-lines emission."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

COLUMNS = (
    "family",
    "functional",
    "n",
    "m",
    "xs",
    "f",
    "quantity",
    "value",
    "tail_bound",
    "tolerance",
    "verdict",
    "method",
)

PASS = "PASS"
FAIL = "FAIL"


def rejected(reason: str) -> str:
    return f"REJECTED({reason})"


@dataclass(frozen=True)
class CheckReport:
    family: str
    functional: str
    n: int
    m: int
    xs: tuple
    f: str
    quantity: str
    value: float
    tail_bound: float
    tolerance: float
    verdict: str
    method: str
    detail: str = field(default="", compare=False)

    def __post_init__(self):
        if self.verdict == FAIL and not math.isfinite(self.value):
            raise ValueError("a FAIL report needs a finite witness value")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    @property
    def is_rejected(self) -> bool:
        return self.verdict.startswith("REJECTED")

    def sort_key(self):
        return (self.family, self.functional, self.n, self.m, tuple(self.xs), self.f, self.quantity)

    def row(self) -> dict:
        return {
            "family": self.family,
            "functional": self.functional,
            "n": self.n,
            "m": self.m,
            "xs": ";".join(repr(float(x)) for x in self.xs),
            "f": self.f,
            "quantity": self.quantity,
            "value": repr(float(self.value)),
            "tail_bound": repr(float(self.tail_bound)),
            "tolerance": repr(float(self.tolerance)),
            "verdict": self.verdict,
            "method": self.method,
        }


def sorted_reports(reports: Iterable[CheckReport]) -> list[CheckReport]:
    return sorted(reports, key=CheckReport.sort_key)


def format_reports(reports: Sequence[CheckReport], fmt: str = "csv") -> str:
    rows = [r.row() for r in sorted_reports(reports)]
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    elif fmt == "jsonl":
        for row in rows:
            buf.write(json.dumps(row) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()


def emit_report(reports: Sequence[CheckReport], fmt: str = "csv", out: str | TextIO | None = None) -> str:
    """Write sorted reports to a path or stream; returns the text written."""
    text = format_reports(reports, fmt)
    if out is None:
        return text
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return text


def exit_status(reports: Iterable[CheckReport]) -> int:
    return 1 if any(r.failed for r in reports) else 0
