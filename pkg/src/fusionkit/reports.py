"""Report objects shared by the command-line subcommands."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .checks import Check, _jsonable

SCHEMA_VERSION = 1


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def report_schema() -> dict:
    """The JSON schema every ``--json`` report conforms to."""
    text = (resources.files("fusionkit") / "schema" / "report.schema.json").read_text()
    return json.loads(text)


@dataclass
class Report:
    command: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    error: dict | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if self.passed else "fail"

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": list(self.command),
            "inputs": dict(sorted(self.inputs.items())),
            "checks": [c.to_dict() for c in self.checks],
            "data": _jsonable(self.data),
            "error": self.error,
            "status": self.status,
            "wall_time_seconds": round(self.seconds, 6),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        checks = [Check(c["name"], c["passed"], c.get("witness"), c.get("residual"),
                        c.get("detail", "")) for c in d["checks"]]
        return cls(list(d["command"]), dict(d["inputs"]), checks, dict(d["data"]),
                   d.get("error"), float(d.get("wall_time_seconds", 0.0)))


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)) and len(v) > 12:
        return "[" + ", ".join(map(str, v[:12])) + ", ...]"
    return str(v)


def render_text(report: Report) -> str:
    """Plain-text rendering for terminals."""
    lines = [f"fusionkit {' '.join(report.command)}"]
    for name, digest in sorted(report.inputs.items()):
        lines.append(f"  input {name}  sha256:{digest[:16]}")
    if report.error is not None:
        lines.append(f"ERROR ({report.error['type']}): {report.error['message']}")
        for k, v in (report.error.get("details") or {}).items():
            lines.append(f"  {k}: {_fmt_value(v)}")
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        extra = []
        if c.residual is not None:
            extra.append(f"residual={c.residual:.3g}")
        if c.witness is not None and not c.passed:
            extra.append(f"witness={c.witness}")
        if c.detail:
            extra.append(c.detail)
        lines.append(f"  [{mark}] {c.name}" + (f"  ({'; '.join(extra)})" if extra else ""))
    for k, v in report.data.items():
        if isinstance(v, dict):
            lines.append(f"  {k}:")
            for k2, v2 in v.items():
                lines.append(f"    {k2}: {_fmt_value(v2)}")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"  {k}:")
            for item in v:
                lines.append("    - " + ", ".join(f"{a}={_fmt_value(b)}" for a, b in item.items()))
        else:
            lines.append(f"  {k}: {_fmt_value(v)}")
    lines.append(f"status: {report.status}  ({report.seconds:.3f} s)")
    return "\n".join(lines) + "\n"
