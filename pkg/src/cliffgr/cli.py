"""Command-line driver: check, identities, energy and claims subcommands."""
from __future__ import annotations

import argparse
import datetime
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, checks, dirac, einstein, identities, kernels, metricfile
from .geometry import SignatureError, SingularPoint
from .jet import DomainError
from .report import CheckReport

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

IDENTITY_TOLERANCES: dict[str, str | float] = {name: "algebraic" for name in (
    "vector_split", "grade_expansion", "equal_grade_contraction", "contraction_order",
    "hodge_identities", "hodge_inverse", "bivector_commutator_grade", "orthogonal_bivector",
    "graded_antisymmetry", "graded_jacobi",
)}
IDENTITY_TOLERANCES["blade_table_mismatches"] = 0.0

CLAIM_TOLERANCES: dict[str, str | float] = {"claim_equivalence": 1e-7, "claim_vacuum_F": 1e-9}
EVANS_THRESHOLD = 1e-6
FLAT_CURVATURE = 1e-12
DEFAULT_RADII = (50.0, 100.0, 200.0, 400.0, 800.0)


class InputError(Exception):
    pass


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the same seed gives the same stream everywhere."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _parse_tol(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise InputError(f"--tol expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InputError(f"--tol {name}: {value!r} is not a number") from None
    return out


def _parse_radii(text: str) -> tuple[float, ...]:
    try:
        radii = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise InputError(f"--radii expects comma-separated numbers, got {text!r}") from None
    if not radii or any(r <= 0 for r in radii):
        raise InputError("--radii needs at least one positive radius")
    return radii


def load_metric(name: str) -> metricfile.MetricSpec:
    """A metric file path, or the name of a shipped fixture."""
    if name in metricfile.BUILTINS and not Path(name).exists():
        return metricfile.builtin(name)
    return metricfile.load(name)


def _metadata(args, command: str, spec=None) -> dict:
    meta = {"tool": "cliffgr", "version": __version__, "command": command,
            "backend": kernels.BACKEND}
    if spec is not None:
        meta["metric"] = spec.label
        meta["parameters"] = dict(sorted(spec.params.items()))
    meta["seed"] = args.seed
    if not args.no_timestamp:
        meta["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return meta


def _conventions() -> dict:
    return {
        "current_commutator": einstein.CURRENT_COMMUTATOR,
        "sachs_curvature_sign": einstein.SACHS_R_SIGN,
        "ricci_operator_sign": dirac.RICCI_OPERATOR_SIGN,
        "weitzenbock_sign": dirac.WEITZENBOCK_SIGN,
        "excd_product_coefficient": 0.5,
    }


def _require_sample(spec) -> None:
    missing = [c for c in spec.coords if c not in spec.sample]
    if missing:
        raise InputError(f"metric {spec.label!r} has no sample range for {missing}")


# ----------------------------------------------------------------- commands


def cmd_identities(args) -> CheckReport:
    count = args.points if args.points is not None else 1000
    tol = _parse_tol(args.tol)
    rep = CheckReport(_metadata(args, "identities"))
    rep.metadata["count"] = count
    res = identities.run_suite(make_rng(args.seed), count, fault=args.inject_fault)
    for name, value in res.items():
        rep.add(name, value, checks.resolve_tolerance(name, tol, IDENTITY_TOLERANCES))
    return rep


def cmd_check(args) -> CheckReport:
    spec = load_metric(args.metric)
    _require_sample(spec)
    tol = _parse_tol(args.tol)
    count = args.points if args.points is not None else 20
    ss = np.random.SeedSequence(args.seed)
    point_seed, *field_seeds = ss.spawn(count + 1)
    pts = checks.sample_points(spec, np.random.Generator(np.random.Philox(point_seed)), count)
    rep = CheckReport(_metadata(args, "check", spec))
    rep.metadata["points"] = count
    rep.metadata["conventions"] = _conventions()
    coeffs, printed = set(), 0.0
    for x, fs in zip(pts, field_seeds):
        info: dict = {}
        res = checks.point_battery(spec, x, np.random.Generator(np.random.Philox(fs)), info)
        for name, value in res.items():
            rep.add(name, value, checks.resolve_tolerance(name, tol), x)
        if info["current_coefficient"] is not None:
            coeffs.add(info["current_coefficient"])
        printed = max(printed, info["printed_current_discrepancy"])
    rep.tables["gauge_current"] = {
        # None: the current vanishes and every candidate fits.
        "selected_coefficient": (None if not coeffs else sorted(coeffs)[0] if len(coeffs) == 1
                                 else sorted(coeffs)),
        "printed_coefficient": einstein.PRINTED_CURRENT_COMMUTATOR,
        "printed_max_discrepancy": printed,
    }
    return rep


def cmd_energy(args) -> CheckReport:
    spec = load_metric(args.metric)
    if not spec.quasi_cartesian:
        raise InputError(
            f"metric {spec.label!r} is not flagged quasi_cartesian; the surface integral "
            "assumes coordinates that become Cartesian at large radius"
        )
    radii = _parse_radii(args.radii) if args.radii else DEFAULT_RADII
    q = args.quad_order
    tol = _parse_tol(args.tol)
    rep = CheckReport(_metadata(args, "energy", spec))
    rep.metadata["quad_order"] = q
    try:
        res = einstein.inertial_mass(spec, radii, q)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    m = float(spec.params.get("m", 0.0))
    table = {
        "radii": list(res.radii),
        "estimates": list(res.estimates),
        "richardson_limit": res.limit,
        "convergence_slope": res.slope,
        "comparison": {"mass_parameter": m, "difference": res.limit - m},
    }
    rep.tables["mass"] = table
    if spec.mass_reference:
        if m == 0.0:
            rep.add("mass_flat", max(abs(e) for e in res.estimates), tol.get("mass_flat", 1e-10))
        else:
            qt = tol.get("mass_limit", tol.get("quadrature", checks.TOLERANCE_CLASSES["quadrature"]))
            rep.add("mass_limit", abs(res.limit - m), qt)
    else:
        rep.notes.append("chart is not a mass reference; table emitted for comparison only")
    return rep


def cmd_claims(args) -> CheckReport:
    spec = load_metric(args.metric)
    _require_sample(spec)
    tol = _parse_tol(args.tol)
    count = args.points if args.points is not None else 5
    pts = checks.sample_points(spec, make_rng(args.seed), count)
    rep = CheckReport(_metadata(args, "claims", spec))
    rep.metadata["points"] = count
    rep.metadata["conventions"] = _conventions()
    eq, vac, ev, curv = 0.0, 0.0, 0.0, 0.0
    skipped = False
    for x in pts:
        c = checks.claims_battery(spec, x)
        eq, ev = max(eq, c["equivalence"]), max(ev, c["evans_witness"])
        curv = max(curv, checks.max_curvature(spec, x))
        rep.add("claim_equivalence", c["equivalence"], checks.resolve_tolerance("claim_equivalence", tol, CLAIM_TOLERANCES), x)
        if c["vacuum_F"] is None:
            skipped = True
        else:
            vac = max(vac, c["vacuum_F"])
            rep.add("claim_vacuum_F", c["vacuum_F"], checks.resolve_tolerance("claim_vacuum_F", tol, CLAIM_TOLERANCES), x)
    flat = curv < FLAT_CURVATURE
    if flat:
        verdict = "witness inconclusive on flat space"
    elif ev > EVANS_THRESHOLD:
        verdict = "boxed wave equation refuted"
    else:
        verdict = "witness below threshold"
    table = {
        "equivalence_residual": eq,
        "vacuum_F_residual": None if skipped else vac,
        "evans_witness": ev,
        "evans_threshold": EVANS_THRESHOLD,
        "evans_verdict": verdict,
        "max_curvature": curv,
    }
    if skipped:
        table["vacuum_F_skipped"] = "metric declares a non-vacuum stress-energy"
        rep.notes.append("vacuum field-strength check skipped: non-vacuum metric")
    if flat:
        rep.notes.append(verdict)
    rep.tables["claims"] = table
    return rep


COMMANDS = {"check": cmd_check, "identities": cmd_identities, "energy": cmd_energy, "claims": cmd_claims}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliffgr", description="Residual checks of tetrad gravity identities.")
    p.add_argument("--version", action="version", version=f"cliffgr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "identities":
            sp.add_argument("--metric", required=True, help="metric file path or shipped fixture name")
        sp.add_argument("--points", type=int, default=None,
                        help="sample points (check, claims) or random inputs (identities)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a check or tolerance class")
        sp.add_argument("--json", type=Path, default=None, help="write the report here instead of stdout")
        sp.add_argument("--no-timestamp", action="store_true")
        sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
        if name == "energy":
            sp.add_argument("--radii", default=None, help="comma-separated radii")
            sp.add_argument("--quad-order", type=int, default=32)
    return p


def _summary_line(rep: CheckReport, elapsed: float) -> str:
    s = rep.summary()
    return f"{rep.metadata['command']}: {s['passed']}/{s['total']} passed in {elapsed:.2f} s"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    t0 = time.perf_counter()
    try:
        if args.points is not None and args.points < 1:
            raise InputError("--points must be at least 1")
        rep = COMMANDS[args.command](args)
    except (InputError, metricfile.MetricFileError, SingularPoint, SignatureError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.to_json()
    if args.json is not None:
        args.json.write_text(text, encoding="utf-8")
        print(_summary_line(rep, time.perf_counter() - t0))
        for c in rep.failures:
            print(f"FAIL {c.name} residual={c.residual:.3e} tol={c.tolerance:.1e} point={c.point}")
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if rep.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
