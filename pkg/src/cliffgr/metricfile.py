"""Reader for metric description files (TOML)."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import expr

_ENTRY = re.compile(r"^g\.([0-3])\.([0-3])$")


class MetricFileError(ValueError):
    """Invalid metric file; the message names the offending entry."""


@dataclass(frozen=True)
class MetricSpec:
    """Chart, parameters and metric component expressions.

    Only the upper triangle of `g` is stored; `component` mirrors it.
    """

    label: str
    coords: tuple[str, str, str, str]
    params: dict[str, float]
    upper: dict[tuple[int, int], expr.Expr]
    asymptotically_flat: bool = False
    quasi_cartesian: bool = False
    # The parameter m (0 if absent) is the asserted inertial mass of the chart.
    mass_reference: bool = False
    sample: dict[str, tuple[float, float]] = field(default_factory=dict)
    stress_energy: dict[str, object] | None = None

    def component(self, i: int, j: int) -> expr.Expr | None:
        return self.upper.get((min(i, j), max(i, j)))

    def is_diagonal(self) -> bool:
        return all(i == j or expr.is_zero(e) for (i, j), e in self.upper.items())

    def with_params(self, **values: float) -> "MetricSpec":
        p = dict(self.params)
        p.update(values)
        return MetricSpec(
            self.label, self.coords, p, self.upper, self.asymptotically_flat,
            self.quasi_cartesian, self.mass_reference, self.sample, self.stress_energy,
        )


def from_strings(
    coords, metric: dict[str, str], params: dict[str, float] | None = None,
    label: str = "inline", **kw,
) -> MetricSpec:
    """Build a MetricSpec from "g.i.j" -> expression text entries."""
    params = dict(params or {})
    coords = tuple(coords)
    if len(coords) != 4 or len(set(coords)) != 4:
        raise MetricFileError(f"need 4 distinct coordinate names, got {list(coords)}")
    upper: dict[tuple[int, int], expr.Expr] = {}
    known = set(coords) | set(params)
    for key, text in metric.items():
        m = _ENTRY.match(key)
        if not m:
            raise MetricFileError(f"bad metric key {key!r}; expected g.<i>.<j>")
        i, j = int(m.group(1)), int(m.group(2))
        if i > j:
            raise MetricFileError(f"metric key {key!r} is below the diagonal")
        try:
            e = expr.parse(str(text))
        except expr.ParseError as exc:
            raise MetricFileError(f"in {key}: {exc}") from exc
        unknown = e.variables() - known
        if unknown:
            raise MetricFileError(f"in {key}: undeclared names {sorted(unknown)}")
        upper[(i, j)] = e
    for i in range(4):
        if (i, i) not in upper:
            raise MetricFileError(f"missing diagonal entry g.{i}.{i}")
    return MetricSpec(label, coords, params, upper, **kw)


def loads(text: str, label: str = "inline") -> MetricSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise MetricFileError(str(exc)) from exc
    try:
        coords = data["coordinates"]["names"]
        metric = data["metric"]
    except KeyError as exc:
        raise MetricFileError(f"missing section or key {exc}") from None
    params = {k: float(v) for k, v in data.get("parameters", {}).items()}
    flags = data.get("flags", {})
    sample = {k: (float(v[0]), float(v[1])) for k, v in data.get("sample", {}).items()}
    for name in sample:
        if name not in coords:
            raise MetricFileError(f"sample range for unknown coordinate {name!r}")
    stress = data.get("stress_energy")
    if stress is not None:
        stress = dict(stress)
        for key in ("rho", "p"):
            if key in stress:
                try:
                    stress[key] = expr.parse(str(stress[key]))
                except expr.ParseError as exc:
                    raise MetricFileError(f"in stress_energy.{key}: {exc}") from exc
    return from_strings(
        coords, metric, params, label=data.get("label", label),
        asymptotically_flat=bool(flags.get("asymptotically_flat", False)),
        quasi_cartesian=bool(flags.get("quasi_cartesian", False)),
        mass_reference=bool(flags.get("mass_reference", False)),
        sample=sample, stress_energy=stress,
    )


def load(path: str | Path) -> MetricSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise MetricFileError(f"cannot read {p}: {exc}") from exc
    return loads(text, label=p.stem)


def builtin(name: str) -> MetricSpec:
    """One of the shipped fixtures, e.g. "schwarzschild"."""
    ref = resources.files("cliffgr") / "metrics" / f"{name}.toml"
    return loads(ref.read_text(encoding="utf-8"), label=name)


BUILTINS = ("minkowski", "minkowski_qc", "schwarzschild", "schwarzschild_qc", "isotropic_qc", "frw")
