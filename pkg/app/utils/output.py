import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

# |Im E| below this fraction of max(1, |E|) is printed as 0
IMAG_SNAP = 1e-10

CHECK_HEADER = ["check", "max_deviation", "tolerance", "passed"]


@dataclass
class CheckRow:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool


@dataclass
class CommandResult:
    """What a command hands back to the CLI: a table, raw results and check reports."""

    header: List[str]
    rows: List[List[Any]]
    results: Dict[str, Any] = field(default_factory=dict)
    reports: Dict[str, BaseModel] = field(default_factory=dict)
    checks: List[CheckRow] = field(default_factory=list)
    comments: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def split_complex(z: complex, snap: bool = True) -> List[float]:
    z = complex(z)
    if snap and abs(z.imag) < IMAG_SNAP * max(1.0, abs(z)):
        return [z.real, 0.0]
    return [z.real, z.imag]


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        # -0 and 0 print the same
        return f"{value + 0.0:.8g}"
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], comments: Sequence[str] = ()) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    for line in comments:
        buffer.write(f"# {line}\n")
    return buffer.getvalue()


def check_rows(checks: Sequence[CheckRow]) -> List[List[Any]]:
    return [[c.name, c.max_deviation, c.tolerance, c.passed] for c in checks]


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    return value


def render_json(config: Dict[str, Any], result: CommandResult) -> str:
    payload = {
        "config": _jsonable(config),
        "results": _jsonable(result.results),
        "checks": {
            "summary": [c.__dict__ for c in result.checks],
            **{name: _jsonable(report.model_dump()) for name, report in result.reports.items()},
        },
    }
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text, end="")
        return
    with open(path, "w", newline="") as f:
        f.write(text)
