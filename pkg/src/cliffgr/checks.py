"""Per-point residual battery and tolerance classes used by the command line."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cforms, dirac, einstein, fields, geometry
from ._tables import DIM
from .metricfile import MetricSpec

TOLERANCE_CLASSES = {
    "algebraic": 1e-11,
    "first": 1e-9,
    "second": 1e-7,
    "quadrature": 1e-2,
}

# check name -> tolerance (class name or explicit value)
BATTERY_TOLERANCES: dict[str, str | float] = {
    "eta": "algebraic",
    "torsion": "first",
    "riemann_symmetry": 1e-10,
    "cartan_structure": "first",
    "curvature_two_path": "first",
    "bianchi_form": 1e-8,
    "bianchi_cyclic": 1e-8,
    "cartan_relation": 1e-10,
    "excd_square_scalar": 1e-8,
    "excd_square_form": 1e-8,
    "excd_product_rule": 1e-8,
    "excd_reassembly": "first",
    "einstein": "first",
    "einstein_vector": "first",
    "maxwell_F_grade": "first",
    "maxwell_F_routes": "first",
    "maxwell_divergence": 1e-8,
    "vacuum_identity": "first",
    "sachs_equivalence": "second",
    "sachs_divergence": "second",
    "superpotential_identity": "second",
    "superpotential_lowered": "first",
    "pseudo_current_closure": "second",
    "gauge_current": "second",
    "dirac_split": "first",
    "dirac_squared_hodge": "second",
    "box_plus_ricci_operator": "second",
    "ricci_operator": "second",
    "tetrad_wave": 1e-6,
    "weitzenbock": "second",
    "star_identities": "second",
}


def resolve_tolerance(name: str, overrides: dict[str, float] | None = None,
                      table: dict[str, str | float] | None = None) -> float:
    """Tolerance for a check: explicit override, then class override, then default."""
    overrides = overrides or {}
    table = BATTERY_TOLERANCES if table is None else table
    if name in overrides:
        return overrides[name]
    spec = table.get(name, "first")
    if isinstance(spec, str):
        return overrides.get(spec, TOLERANCE_CLASSES[spec])
    return float(spec)


@dataclass
class Check:
    name: str
    point: list[float] | None
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def sample_points(spec: MetricSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """count points drawn uniformly per coordinate from the declared sample box."""
    lo = np.array([spec.sample[c][0] for c in spec.coords])
    hi = np.array([spec.sample[c][1] for c in spec.coords])
    return lo + (hi - lo) * rng.random((count, DIM))


def point_battery(spec: MetricSpec, x, rng: np.random.Generator, info: dict | None = None) -> dict[str, float]:
    """Every geometric, field-equation and Dirac residual at one point.

    info, when given, receives the calibrated current coefficient and the
    discrepancy of the printed one.
    """
    s = geometry.snapshot(spec, x, 3)
    T = einstein.stress_energy(spec, x, 3)
    w = s.omega_form()
    out: dict[str, float] = {}

    out["eta"] = geometry.eta_residual(s)
    out["torsion"] = geometry.torsion(s).norm()
    out["riemann_symmetry"] = geometry.riemann_symmetry_residual(s)
    out["cartan_structure"] = geometry.cartan2_residual(s)
    lit = s.curvature_form(literal=True)
    out["curvature_two_path"] = (cforms.excd(w, w) - lit.truncate(min(lit.order, 2))).norm()
    out["bianchi_form"] = geometry.bianchi_form_residual(s)
    out["bianchi_cyclic"] = geometry.bianchi_cyclic_residual(s)

    vec1 = fields.clifford_form(rng, 1, x, 3, {1})
    vec2 = fields.clifford_form(rng, 2, x, 3, {1})
    out["cartan_relation"] = max(cforms.cartan_relation_residual(vec1, w, s.conn),
                                 cforms.cartan_relation_residual(vec2, w, s.conn))
    a0 = fields.clifford_form(rng, 0, x, 3)
    a1 = fields.clifford_form(rng, 1, x, 3)
    t0 = cforms.excd_square_terms(a0, w)
    out["excd_square_scalar"] = (t0["D2"] - 0.25 * t0["R"] - 0.25 * t0["dw"]).norm()
    t1 = cforms.excd_square_terms(a1, w)
    out["excd_square_form"] = (t1["D2"] - 0.5 * t1["R"] - 0.5 * t1["w_dA"]).norm()
    b2 = fields.clifford_form(rng, 2, x, 3)
    out["excd_product_rule"] = cforms.excd_product_residual(a1, b2, w)
    out["excd_reassembly"] = cforms.reassembly_residuals(a1, s.omega_a, s.E, s.h, w)["left"]

    out["einstein"] = einstein.einstein_residual(s, T)
    out["einstein_vector"] = einstein.vector_equation_residual(s, T)
    F = einstein.maxwell_like_F(s)
    out["maxwell_F_grade"] = einstein.grade_residual(F, {2})
    out["maxwell_F_routes"] = float(np.max(np.abs(F - einstein.maxwell_like_F_products(s))))
    out["maxwell_divergence"] = einstein.maxwell_like_divergence(s, T)
    if not np.any(T.T[..., 0]):
        out["vacuum_identity"] = einstein.vacuum_identity_residual(s)
    out["sachs_equivalence"] = einstein.sachs_equivalence_residual(s)
    out["sachs_divergence"] = einstein.sachs_residual(s, T)
    out["superpotential_identity"] = einstein.superpotential_identity_residual(s)
    out["superpotential_lowered"] = einstein.superpotential_forms_residual(s)
    out["pseudo_current_closure"] = einstein.pseudo_current_closure(s, T)
    gc = einstein.gauge_current(s)
    out["gauge_current"] = gc["discrepancy"]
    if info is not None:
        info["current_coefficient"] = gc["coefficient"]
        info["printed_current_discrepancy"] = gc["printed_discrepancy"]

    ctx = dirac.DiracContext(s)
    A = dirac.FormField(fields.multivector_field(rng, x, 3))
    out["dirac_split"] = dirac.split_residual(ctx, A)
    lap = dirac.laplacian_split_residuals(ctx, A)
    out["dirac_squared_hodge"] = lap["dirac_squared_vs_hodge"]
    out["box_plus_ricci_operator"] = lap["box_plus_ricci_operator"]
    out["ricci_operator"] = dirac.ricci_operator_residual(ctx)
    out["tetrad_wave"] = dirac.tetrad_wave_residuals(ctx, T)["derived"]
    A_coord = np.stack([fields.polynomial(rng, x, 3) for _ in range(DIM)])
    out["weitzenbock"] = dirac.weitzenbock_residuals(ctx, A_coord)["derived"]
    out["star_identities"] = max(dirac.star_identity_residuals(ctx, A).values())
    return out


def claims_battery(spec: MetricSpec, x) -> dict[str, float | None]:
    """Sachs equivalence, vacuum field strength and the Evans witness at one point.

    The vacuum entry is None when the metric file declares matter.
    """
    s = geometry.snapshot(spec, x, 3)
    T = einstein.stress_energy(spec, x, 3)
    vacuum = not np.any(T.T[..., 0])
    ctx = dirac.DiracContext(s)
    return {
        "equivalence": einstein.sachs_equivalence_residual(s),
        "vacuum_F": float(np.max(np.abs(einstein.maxwell_like_F(s)[..., 0]))) if vacuum else None,
        "evans_witness": dirac.evans_residual(ctx, T),
    }


def max_curvature(spec: MetricSpec, x) -> float:
    s = geometry.snapshot(spec, x, 2)
    return float(np.max(np.abs(s.R_ab[..., 0])))


__all__ = [
    "BATTERY_TOLERANCES",
    "Check",
    "TOLERANCE_CLASSES",
    "claims_battery",
    "max_curvature",
    "point_battery",
    "resolve_tolerance",
    "sample_points",
]
