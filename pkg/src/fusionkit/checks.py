"""Small result containers used by every validator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "item"):  # numpy scalar
        return _jsonable(value.item())
    return value


@dataclass(frozen=True)
class Check:
    """Outcome of a single named check.

    ``witness`` holds the first violating index tuple (or another small
    certificate of failure), ``residual`` the worst numerical deviation.
    """

    name: str
    passed: bool
    witness: Any = None
    residual: float | None = None
    detail: str = ""

    def to_dict(self):
        out = {"name": self.name, "passed": bool(self.passed)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.residual is not None:
            out["residual"] = float(self.residual)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.valid

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {"valid": self.valid, "checks": [c.to_dict() for c in self.checks]}
