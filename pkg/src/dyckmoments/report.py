"""Pass/fail records shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .poly import Poly


def jsonable(value: Any) -> Any:
    """Convert Fractions, Polys and containers into JSON-safe values."""
    if isinstance(value, Poly):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return jsonable(value.item())
    return str(value)


@dataclass
class Report:
    name: str
    passed: bool = True
    checked: int = 0
    mismatches: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def check(self, label: Any, lhs: Any, rhs: Any) -> bool:
        """Record one equality check; keeps both sides on failure."""
        self.checked += 1
        ok = lhs == rhs
        if not ok:
            self.passed = False
            self.mismatches.append({"at": label, "lhs": lhs, "rhs": rhs})
        return ok

    def fail(self, label: Any, **details) -> None:
        self.passed = False
        self.mismatches.append({"at": label, **details})

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        if not other.passed:
            self.passed = False
            for mm in other.mismatches:
                self.mismatches.append({"in": other.name, **mm})
        return self

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
            "mismatches": jsonable(self.mismatches),
            "info": jsonable(self.info),
        }

    def summary(self) -> str:
        return f"{self.status} {self.name} ({self.checked} checks)"
