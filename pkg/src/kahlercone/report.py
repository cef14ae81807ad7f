"""Verification records and their deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__, linalg
from .jet import value_part
from .scalars import EXACT

REPORT_SCHEMA_VERSION = 1
FLOAT_TOL = 1e-10


@dataclass
class Record:
    fixture: str
    point: list
    identity: str
    detail: str
    mode: str
    residual: float
    passed: bool


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)
    seed: int | None = None
    version: str = __version__

    def add(self, record: Record) -> None:
        self.records.append(record)

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.records.extend(other.records)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self) -> dict:
        total = len(self.records)
        ok = sum(r.passed for r in self.records)
        return {"total": total, "passed": ok, "failed": total - ok}

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "version": self.version,
            "seed": self.seed,
            "summary": self.summary(),
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["fixture", "point", "identity", "detail", "mode", "residual", "pass"])
        for r in self.records:
            w.writerow([r.fixture, " ".join(r.point), r.identity, r.detail, r.mode,
                        repr(r.residual), int(r.passed)])
        return buf.getvalue()


def fmt_point(t) -> list:
    out = []
    for x in t:
        x = value_part(x)
        if hasattr(x, "re"):
            x = x.re
        elif isinstance(x, complex):
            x = x.real
        if isinstance(x, float):
            out.append(repr(x))
        else:
            out.append(str(Fraction(int(x.numerator), int(x.denominator))))
    return out


def residual(lhs, rhs, mode: str, tol: float = FLOAT_TOL, scale: float = 0.0) -> tuple[float, bool]:
    """Residual of a matrix (or scalar) identity.

    Exact mode passes only on literal equality; float mode uses the maximum
    entry difference relative to the larger operand, or to ``scale`` when the
    caller compares one block of a larger operator.
    """
    if not isinstance(lhs, list):
        lhs, rhs = [[lhs]], [[rhs]]
    diff = linalg.sub(lhs, rhs)
    err = linalg.max_abs(diff)
    if mode == EXACT:
        if any(isinstance(x, (float, complex)) for m in (lhs, rhs) for row in m for x in row):
            raise TypeError("float entry in an exact-mode identity")
        return err, linalg.is_zero(diff)
    scale = max(linalg.max_abs(lhs), linalg.max_abs(rhs), scale)
    rel = err / scale if scale > 0 else err
    return rel, rel < tol
