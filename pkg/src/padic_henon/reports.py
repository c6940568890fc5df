"""Run configuration, report envelopes and their JSON / CSV / text renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

from . import __version__
from .balls import DEFAULT_STATE_BUDGET, cycle_structure
from .errors import BudgetExceeded
from .henon import HenonParams
from .localfield import is_odd_prime

FORMATS = ("json", "csv", "text")

# p, a, b and the level range used to reproduce the published table
PUBLISHED_ROWS = [
    (3, "2", "3", 6),
    (3, "8", "3", 6),
    (3, "2", "9", 6),
    (5, "4", "5", 5),
    (5, "1", "5", 5),
    (7, "1", "7", 4),
    (7, "2", "7", 4),
]

CSV_HEADER = ["prime", "a", "b", "k", "P_k", "periodic_balls", "cycles"]


@dataclass
class RunConfig:
    p: int = 3
    a: str | None = None
    b: str | None = None
    precision: int = 20
    k: int | None = None
    kmax: int = 6
    n: int | None = None
    max_iter: int = 200
    threads: int = 1
    state_budget: int = DEFAULT_STATE_BUDGET
    format: str = "json"
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.precision < 1:
            raise ValueError("precision must be positive")
        for name in ("kmax", "max_iter", "threads", "state_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    def params(self) -> HenonParams:
        if self.a is None or self.b is None:
            raise ValueError("this command needs --a and --b")
        return HenonParams.parse(self.a, self.b, self.p, self.precision)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


@dataclass
class Report:
    command: str
    config: dict
    result: dict | None = None
    error: dict | None = None
    duration_s: float = 0.0
    version: str = __version__
    table: list[list] = field(default_factory=list)

    def payload(self) -> dict:
        """Everything except the wall-clock time."""
        d = {"command": self.command, "config": self.config, "version": self.version}
        if self.error is not None:
            d["error"] = self.error
        else:
            d["result"] = self.result
        return d

    def to_json(self) -> str:
        d = self.payload()
        d["duration_s"] = round(self.duration_s, 6)
        return json.dumps(d, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        d = json.loads(text)
        return cls(d["command"], d["config"], d.get("result"), d.get("error"),
                   d.get("duration_s", 0.0), d["version"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.table)
        return buf.getvalue()

    def to_text(self) -> str:
        if self.error is not None:
            return f"error {self.error['kind']}: {self.error['message']}\n"
        lines = []
        _flatten(self.result, "", lines)
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            if self.error is not None or not self.command == "table":
                return self.to_json()
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        return self.to_json()


def _flatten(obj, prefix: str, out: list[str]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", out)
    else:
        out.append(f"{prefix}: {obj}")


def table_rows(rows: list[tuple[int, str, str, int]], precision: int = 20,
               budget: int = DEFAULT_STATE_BUDGET) -> list[list]:
    """One CSV row per ``(p, a, b, k)``; levels past the budget are marked."""
    out = []
    for p, a, b, kmax in rows:
        params = HenonParams.parse(a, b, p, precision)
        for k in range(1, kmax + 1):
            try:
                r = cycle_structure(params, k, budget=budget)
            except BudgetExceeded:
                out.extend([p, a, b, kk, "budget", "", ""] for kk in range(k, kmax + 1))
                break
            out.append([p, a, b, k, r.max_period, r.periodic_count, r.histogram()])
    return out


def parse_rows(text: str) -> list[tuple[int, str, str, int]]:
    """``"p,a,b,kmax;p,a,b,kmax"`` into row tuples."""
    rows = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = [s.strip() for s in chunk.split(",")]
        if len(parts) != 4:
            raise ValueError(f"row {chunk!r} needs four fields p,a,b,kmax")
        rows.append((int(parts[0]), parts[1], parts[2], int(parts[3])))
    return rows
