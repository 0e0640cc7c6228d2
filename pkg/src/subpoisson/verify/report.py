"""Grids, check reports, and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import mpmath

from ..precision import DEFAULT_BITS, fmt, to_hifloat, workprec

SCHEMA_VERSION = 1
JSON_DIGITS = 30
CSV_DIGITS = 20


@dataclass(frozen=True)
class GridSpec:
    """One axis: ``count`` points from ``lo`` to ``hi`` inclusive."""

    lo: Fraction | str
    hi: Fraction | str
    count: int
    spacing: str = "log"

    def __post_init__(self):
        if self.spacing not in ("lin", "log"):
            raise ValueError(f"spacing must be 'lin' or 'log', got {self.spacing!r}")
        if self.count < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.count}")
        lo, hi = Fraction(str(self.lo)), Fraction(str(self.hi))
        if not lo < hi:
            raise ValueError(f"grid needs lo < hi, got {self.lo}..{self.hi}")
        if self.spacing == "log" and lo <= 0:
            raise ValueError("log spacing needs lo > 0")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``lo:hi:count[:lin|log]``, e.g. ``1e-6:1e6:10000:log``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid must look like lo:hi:count[:lin|log], got {text!r}")
        spacing = parts[3] if len(parts) == 4 else "log"
        return cls(parts[0], parts[1], int(parts[2]), spacing)

    def points(self) -> list[mpmath.mpf]:
        lo, hi = to_hifloat(Fraction(str(self.lo))), to_hifloat(Fraction(str(self.hi)))
        n = self.count - 1
        if self.spacing == "lin":
            pts = [lo + (hi - lo) * i / n for i in range(n + 1)]
        else:
            a, b = mpmath.log(lo), mpmath.log(hi)
            pts = [mpmath.exp(a + (b - a) * i / n) for i in range(n + 1)]
        # pin the endpoints exactly
        pts[0], pts[-1] = lo, hi
        return pts

    def describe(self) -> dict:
        return {"min": str(self.lo), "max": str(self.hi), "count": self.count, "spacing": self.spacing}


@dataclass
class CheckReport:
    check_name: str
    grid: dict
    tolerance: Any
    worst_margin: Any
    worst_point: dict
    passed: bool
    report_only: bool = False
    bits: int = DEFAULT_BITS
    retried: bool = False
    columns: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "grid": _jsonable(self.grid),
            "tolerance": fmt(self.tolerance, JSON_DIGITS) if not isinstance(self.tolerance, str) else self.tolerance,
            "worst_margin": fmt(self.worst_margin, JSON_DIGITS),
            "worst_point": _jsonable(self.worst_point),
            "passed": bool(self.passed),
            "report_only": bool(self.report_only),
            "bits": self.bits,
            "retried": self.retried,
            "details": _jsonable(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["schema_version", *self.columns])
        for row in self.rows:
            w.writerow([SCHEMA_VERSION, *(_cell(v) for v in row)])
        return buf.getvalue()

    def summary_line(self) -> str:
        tag = "PASS" if self.passed else ("REPORT" if self.report_only else "FAIL")
        return f"[{tag}] {self.check_name}: worst margin {fmt(self.worst_margin, 8)}"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if v is None:
        return ""
    if isinstance(v, (float, mpmath.mpf)):
        return fmt(v, CSV_DIGITS)
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, mpmath.mpf)):
        return fmt(obj, JSON_DIGITS)
    return str(obj)


def worst(margins: Iterable[tuple[Any, dict]]):
    """(min margin, its point); first occurrence wins on ties."""
    best = None
    for m, pt in margins:
        if best is None or m < best[0]:
            best = (m, pt)
    if best is None:
        raise ValueError("empty grid")
    return best


def write_reports(reports: Sequence[CheckReport], out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for r in reports:
        for ext, text in (("json", r.to_json()), ("csv", r.to_csv())):
            path = os.path.join(out_dir, f"{r.check_name}.{ext}")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.append(path)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "checks": [
            {"check_name": r.check_name, "passed": r.passed, "report_only": r.report_only,
             "worst_margin": fmt(r.worst_margin, JSON_DIGITS)}
            for r in reports
        ],
        "all_passed": all(r.passed or r.report_only for r in reports),
    }
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary, indent=2) + "\n")
    written.append(path)
    return written


# -- grid evaluation -----------------------------------------------------------


def _init_worker(bits: int) -> None:
    mpmath.mp.prec = bits


def _call_at(args):
    func, bits, item = args
    with workprec(bits):
        return func(item)


def grid_map(func: Callable, items: Sequence, workers: int = 1) -> list:
    """Evaluate ``func`` on each item, results in input order.

    With ``workers > 1`` items go to a process pool; ``func`` must be a
    module-level function.  Order-preserving reduction keeps reports
    identical for any worker count.
    """
    bits = mpmath.mp.prec
    if workers <= 1 or len(items) < 2:
        return [func(it) for it in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(bits,)) as ex:
        return list(ex.map(_call_at, [(func, bits, it) for it in items], chunksize=chunk))
