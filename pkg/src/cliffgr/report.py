"""Check reports and their JSON form.

Floats are written with 17 significant digits so that parsing a report and
writing it again reproduces the same bytes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .checks import Check

REPORT_KEYS = ("metadata", "checks", "tables", "summary")
CHECK_KEYS = ("name", "point", "residual", "tolerance", "pass")


class ReportSchemaError(ValueError):
    pass


@dataclass
class CheckReport:
    metadata: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float, point=None) -> Check:
        c = Check(name, None if point is None else [float(v) for v in point], float(residual), float(tolerance))
        self.checks.append(c)
        return c

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> dict[str, Any]:
        n_fail = len(self.failures)
        out: dict[str, Any] = {"total": len(self.checks), "passed": len(self.checks) - n_fail, "failed": n_fail}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata,
            "checks": [
                {"name": c.name, "point": c.point, "residual": c.residual,
                 "tolerance": c.tolerance, "pass": c.passed}
                for c in self.checks
            ],
            "tables": self.tables,
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        # JSON has no non-finite numbers; keep them readable and distinct.
        return json.dumps(repr(x))
    text = format(x, ".17g")
    # keep integral floats as floats when read back
    return text if any(ch in text for ch in ".en") else text + ".0"


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return _emit(obj.item(), indent, level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def loads(text: str) -> dict[str, Any]:
    """Parse and validate a report; floats stay floats, integers stay integers."""
    data = json.loads(text)
    validate(data)
    return data


def validate(data: Any) -> None:
    if not isinstance(data, dict) or tuple(data) != REPORT_KEYS:
        raise ReportSchemaError(f"report keys must be exactly {list(REPORT_KEYS)}")
    if not isinstance(data["checks"], list):
        raise ReportSchemaError("checks must be a list")
    seen = set()
    for c in data["checks"]:
        if not isinstance(c, dict) or tuple(c) != CHECK_KEYS:
            raise ReportSchemaError(f"check entries need keys {list(CHECK_KEYS)}")
        key = (c["name"], None if c["point"] is None else tuple(c["point"]))
        if key in seen:
            raise ReportSchemaError(f"duplicate check {c['name']!r} at one point")
        seen.add(key)
        res, tol = c["residual"], c["tolerance"]
        if isinstance(res, (int, float)) and c["pass"] != (res <= tol):
            raise ReportSchemaError(f"check {c['name']!r}: pass flag disagrees with residual and tolerance")
    for key in ("metadata", "tables", "summary"):
        if not isinstance(data[key], dict):
            raise ReportSchemaError(f"{key} must be an object")


__all__ = ["CheckReport", "ReportSchemaError", "dumps", "loads", "validate"]
