"""Dirac operator on co-frame multiforms and the second-order identities.

Fields are scalar multiforms on the theta-blades, arrays (16, N). The
covariant derivative along e_a acts as d_{e_a} + 1/2 [W_a, .], where W_a is
the connection bivector of the snapshot re-expressed on the co-frame.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jet, multiform, stal
from ._tables import DIM, ETA, GRADE, NBLADES
from .einstein import StressEnergy
from .geometry import GeometrySnapshot

# (d ^ d) theta^a = RICCI_OPERATOR_SIGN * Ric^a_b theta^b with the standard Ricci.
RICCI_OPERATOR_SIGN = -1.0

# (d^2 A)_alpha = g^{mu nu} nabla_mu nabla_nu A_alpha + WEITZENBOCK_SIGN R^nu_alpha A_nu.
WEITZENBOCK_SIGN = -1.0


def _maxabs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _trunc(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = min(jet.order_of(a), jet.order_of(b))
    return jet.truncate(a, k), jet.truncate(b, k)


def _sum(*terms: np.ndarray) -> np.ndarray:
    k = min(jet.order_of(t) for t in terms)
    return sum(jet.truncate(t, k) for t in terms)


@dataclass(frozen=True)
class FormField:
    """Scalar multiform on the co-frame blades with jet coefficients (16, N)."""

    comps: np.ndarray

    def __post_init__(self):
        if self.comps.ndim != 2 or self.comps.shape[0] != NBLADES:
            raise ValueError(f"multiform needs shape (16, N), got {self.comps.shape}")
        jet.order_of(self.comps)

    @property
    def order(self) -> int:
        return jet.order_of(self.comps)

    def grade(self, p: int) -> "FormField":
        return FormField(multiform.grade_part(self.comps, p))

    def degrees(self) -> set[int]:
        return stal.grades(self.comps)

    def value(self) -> np.ndarray:
        return self.comps[:, 0]

    def __add__(self, o: "FormField") -> "FormField":
        return FormField(_sum(self.comps, o.comps))

    def __sub__(self, o: "FormField") -> "FormField":
        return FormField(_sum(self.comps, -o.comps))

    def __mul__(self, s: float) -> "FormField":
        return FormField(self.comps * float(s))

    __rmul__ = __mul__

    def __neg__(self) -> "FormField":
        return FormField(-self.comps)


class DiracContext:
    """Operators d, delta, star, D_{e_a} and the Dirac operator at a snapshot."""

    def __init__(self, s: GeometrySnapshot):
        self.s = s
        self.frame = multiform.CoFrame(s.h, s.E)
        self.W = stal.lower(s.omega_a)  # connection on the co-frame blades
        self.fc = s.frame_conn  # [a, b, c] = Gamma^c_{ab}
        self.E = s.E

    # ---- fields

    def from_coordinates(self, coord: np.ndarray) -> FormField:
        """A field given on the coordinate blades dx^I (16, N)."""
        return FormField(self.frame.to_frame(coord))

    def to_coordinates(self, A: FormField) -> np.ndarray:
        return self.frame.to_coord(A.comps)

    def theta(self, a: int) -> FormField:
        return FormField(multiform.basis(a, jet.order_of(self.E)))

    # ---- exterior calculus

    def d(self, A: FormField) -> FormField:
        return FormField(self.frame.d(A.comps))

    def star(self, A: FormField) -> FormField:
        return FormField(multiform.hodge(A.comps))

    def star_inv(self, A: FormField) -> FormField:
        return FormField(multiform.hodge_inv(A.comps))

    def delta(self, A: FormField) -> FormField:
        """Codifferential (-1)^p star^-1 d star on each degree p."""
        out = None
        for p in range(1, DIM + 1):
            part = A.grade(p)
            if not np.any(part.comps):
                continue
            term = (-1.0) ** p * self.star_inv(self.d(self.star(part)))
            out = term if out is None else out + term
        if out is None:
            return FormField(np.zeros((NBLADES, jet.NCOEF[max(A.order - 1, 0)])))
        return out

    # ---- covariant derivative and Dirac operator

    def directional(self, A: FormField, a: int) -> np.ndarray:
        grads = jet.gradient(A.comps)
        k = jet.order_of(grads)
        E = jet.truncate(self.E, k)
        return sum(jet.mul(E[a, mu][None], grads[mu]) for mu in range(DIM))

    def D(self, A: FormField, a: int) -> FormField:
        """D_{e_a} A = d_{e_a} A + 1/2 [W_a, A]."""
        der = self.directional(A, a)
        w, x = _trunc(self.W[a], A.comps)
        return FormField(_sum(der, 0.5 * stal.comm(w, x)))

    def dirac(self, A: FormField) -> FormField:
        """theta^a D_{e_a} A."""
        terms = [stal.gp(self.theta(a).comps, self.D(A, a).comps) for a in range(DIM)]
        return FormField(_sum(*terms))

    def second(self, A: FormField, a: int, b: int) -> FormField:
        """D_a D_b A - Gamma^c_{ab} D_c A."""
        out = self.D(self.D(A, b), a)
        for c in range(DIM):
            g = self.fc[a, b, c]
            if np.any(g):
                dc = self.D(A, c)
                gg, x = _trunc(g[None], dc.comps)
                out = out - FormField(jet.mul(gg, x))
        return out

    def box(self, A: FormField) -> FormField:
        """Covariant D'Alembertian eta^{ab}(D_a D_b - Gamma^c_{ab} D_c)."""
        return FormField(_sum(*[ETA[a] * self.second(A, a, a).comps for a in range(DIM)]))

    def ricci_operator(self, A: FormField) -> FormField:
        """(theta^a ^ theta^b)(D_a D_b - Gamma^c_{ab} D_c) A."""
        terms = []
        for a in range(DIM):
            for b in range(DIM):
                if a == b:
                    continue
                tab = stal.wedge(self.theta(a).comps, self.theta(b).comps)
                terms.append(stal.gp(tab, self.second(A, a, b).comps))
        return FormField(_sum(*terms))

    def hodge_laplacian(self, A: FormField) -> FormField:
        """-(d delta + delta d), through the Hodge route."""
        return -(self.d(self.delta(A)) + self.delta(self.d(A)))

    def dirac_squared(self, A: FormField) -> FormField:
        return self.dirac(self.dirac(A))


# ------------------------------------------------------------------ checks


def split_residual(ctx: DiracContext, A: FormField) -> float:
    """Dirac operator against d - delta (Hodge route)."""
    return _maxabs((ctx.dirac(A) - (ctx.d(A) - ctx.delta(A))).value())


def codifferential_routes_residual(ctx: DiracContext, A: FormField) -> float:
    """-delta A against the grade-lowering part of the Dirac operator, and d A against the raising part."""
    worst = 0.0
    for p in A.degrees():
        part = A.grade(p)
        dp = ctx.dirac(part)
        worst = max(worst, _maxabs((dp.grade(p + 1) - ctx.d(part)).value()) if p < DIM else 0.0)
        if p > 0:
            worst = max(worst, _maxabs((dp.grade(p - 1) + ctx.delta(part)).value()))
    return worst


def laplacians(ctx: DiracContext, A: FormField) -> dict[str, FormField]:
    return {
        "hodge_laplacian": ctx.hodge_laplacian(A),
        "dirac_squared": ctx.dirac_squared(A),
        "dalembertian": ctx.box(A),
        "ricci_operator": ctx.ricci_operator(A),
    }


def laplacian_split_residuals(ctx: DiracContext, A: FormField) -> dict[str, float]:
    """d^2 = -(d delta + delta d) and d^2 = box + (d ^ d)."""
    L = laplacians(ctx, A)
    return {
        "dirac_squared_vs_hodge": _maxabs((L["dirac_squared"] - L["hodge_laplacian"]).value()),
        "box_plus_ricci_operator": _maxabs((L["dirac_squared"] - L["dalembertian"] - L["ricci_operator"]).value()),
    }


def ricci_forms(s: GeometrySnapshot, order: int = 0) -> np.ndarray:
    """R^a = Ric^a_b theta^b with the standard Ricci tensor, (4, 16, N)."""
    ric = jet.truncate(s.ricci, order) * ETA[:, None, None]  # Ric^a_b
    out = np.zeros((DIM, NBLADES, jet.NCOEF[order]))
    for a in range(DIM):
        for b in range(DIM):
            out[a, 1 << b] = ric[a, b]
    return out


def ricci_operator_residual(ctx: DiracContext, sign: float = RICCI_OPERATOR_SIGN) -> float:
    """max_a |(d ^ d) theta^a - sign R^a|; the printed identity has sign +1."""
    R = ricci_forms(ctx.s)[..., 0]
    return max(_maxabs(ctx.ricci_operator(ctx.theta(a)).value() - sign * R[a]) for a in range(DIM))


def wave_lhs(ctx: DiracContext, a: int) -> FormField:
    """-(d.d) theta^a + d ^ (d . theta^a) + d _| (d ^ theta^a) via Dirac grade parts."""
    th = ctx.theta(a)
    div = ctx.dirac(th).grade(0)
    curl = ctx.dirac(th).grade(2)
    return -ctx.box(th) + ctx.dirac(div).grade(1) + ctx.dirac(curl).grade(1)


def matter_one_forms(T: StressEnergy, order: int = 0) -> np.ndarray:
    Tu = jet.truncate(T.T, order) * ETA[:, None, None]  # T^a_b
    out = np.zeros((DIM, NBLADES, jet.NCOEF[order]))
    for a in range(DIM):
        for b in range(DIM):
            out[a, 1 << b] = Tu[a, b]
    return out


def tetrad_wave_residuals(ctx: DiracContext, T: StressEnergy) -> dict[str, float]:
    """Wave equation for the co-frame with the printed and the sign-consistent source.

    printed: LHS = T^a - 1/2 T theta^a.
    derived: LHS = -(T^a - 1/2 T theta^a), which follows from
    (d ^ d) theta^a = -R^a and the Einstein equation.
    """
    Tf = matter_one_forms(T)[..., 0]
    tr = float(T.trace()[0])
    out = {"printed": 0.0, "derived": 0.0}
    for a in range(DIM):
        lhs = wave_lhs(ctx, a).value()
        rhs = Tf[a].copy()
        rhs[1 << a] -= 0.5 * tr
        out["printed"] = max(out["printed"], _maxabs(lhs - rhs))
        out["derived"] = max(out["derived"], _maxabs(lhs + rhs))
    return out


def wave_ricci_residual(ctx: DiracContext) -> float:
    """Wave operator on theta^a against the Ricci operator, per the operator split."""
    return max(_maxabs((wave_lhs(ctx, a) - ctx.ricci_operator(ctx.theta(a))).value()) for a in range(DIM))


def coordinate_ricci(s: GeometrySnapshot) -> np.ndarray:
    """R^mu_nu from Christoffel symbols alone (standard contraction)."""
    G = s.Gamma
    dG = jet.gradient(G)[..., 0]  # [r, s, l, m] = d_r Gamma^s_{lm}
    G0 = G[..., 0]
    # R^s_{m r l} = d_r G^s_{lm} - d_l G^s_{rm} + G^s_{rk} G^k_{lm} - G^s_{lk} G^k_{rm}
    Rc = (np.einsum("rslm->smrl", dG) - np.einsum("lsrm->smrl", dG)
          + np.einsum("srk,klm->smrl", G0, G0) - np.einsum("slk,krm->smrl", G0, G0))
    ric = np.einsum("smsl->ml", Rc)  # R_{ml} = R^s_{msl}
    return np.einsum("mk,kl->ml", s.ginv[..., 0], ric)


def component_form_residual(ctx: DiracContext, sign: float = RICCI_OPERATOR_SIGN) -> float:
    """Coordinate assembly: e_a^mu (d ^ d) theta^a against sign R^mu_nu dx^nu.

    The right side uses the Christoffel-only Ricci tensor, so this ties the
    co-frame wave equation to its coordinate form R^mu - 1/2 R dx^mu = T^mu.
    """
    s = ctx.s
    E0 = s.E[..., 0]
    Rmn = coordinate_ricci(s)
    worst = 0.0
    ops = [ctx.ricci_operator(ctx.theta(a)).value() for a in range(DIM)]
    for mu in range(DIM):
        got = sum(E0[a, mu] * ops[a] for a in range(DIM))
        want = np.zeros(NBLADES)
        for b in range(DIM):
            want[1 << b] = sign * sum(Rmn[mu, nu] * E0[b, nu] for nu in range(DIM))
        worst = max(worst, _maxabs(got - want))
    return worst


def evans_residual(ctx: DiracContext, T: StressEnergy) -> float:
    """max_a |(box + T) theta^a|; nonzero refutes the boxed claim."""
    tr = float(T.trace()[0])
    worst = 0.0
    for a in range(DIM):
        th = ctx.theta(a)
        worst = max(worst, _maxabs(ctx.box(th).value() + tr * th.value()))
    return worst


def weitzenbock_residuals(ctx: DiracContext, A_coord: np.ndarray) -> dict[str, float]:
    """Compare (d^2 A)_alpha with g^{mu nu} nabla_mu nabla_nu A_alpha +/- R^nu_alpha A_nu.

    A_coord holds the four coordinate components A_alpha as jets (4, N).
    """
    s = ctx.s
    coord = np.zeros((NBLADES, A_coord.shape[-1]))
    for al in range(DIM):
        coord[1 << al] = A_coord[al]
    A = ctx.from_coordinates(coord)
    lap = ctx.to_coordinates(ctx.dirac_squared(A))[..., 0]
    lhs = np.array([lap[1 << al] for al in range(DIM)])
    # Tensor route with Christoffel symbols only.
    G = s.Gamma
    dA = jet.gradient(A_coord)  # [nu, alpha]
    k = jet.order_of(dA)
    Gk = jet.truncate(G, k)
    Ak = jet.truncate(A_coord, k)
    nab = dA - jet.mul(np.transpose(Gk, (1, 2, 0, 3)), Ak[None, None]).sum(axis=2)  # [nu, alpha]
    dnab = jet.gradient(nab)[..., 0]  # [mu, nu, alpha]
    G0, n0 = G[..., 0], nab[..., 0]
    nn = (dnab - np.einsum("lmn,la->mna", G0, n0) - np.einsum("lma,nl->mna", G0, n0))
    box = np.einsum("mn,mna->a", s.ginv[..., 0], nn)
    Rud = coordinate_ricci(s)  # R^nu_alpha as [nu, alpha]
    curv = np.einsum("na,n->a", Rud, A_coord[:, 0])
    return {
        "printed": _maxabs(lhs - box - curv),
        "derived": _maxabs(lhs - box - WEITZENBOCK_SIGN * curv),
    }


# ------------------------------------------------------ identity catalogue


def star_identity_residuals(ctx: DiracContext, A: FormField) -> dict[str, float]:
    """Commutation and star identities on one homogeneous or mixed field.

    Signs are the ones that follow from delta = (-1)^p star^-1 d star; the
    printed star-delta relation pairs forms of different degree and is read
    as star delta = (-1)^p d star.
    """
    out = {
        "dd": _maxabs(ctx.d(ctx.d(A)).value()),
        "deltadelta": _maxabs(ctx.delta(ctx.delta(A)).value()),
        "d_lap": _maxabs((ctx.d(ctx.dirac_squared(A)) - ctx.dirac_squared(ctx.d(A))).value()),
        "delta_lap": _maxabs((ctx.delta(ctx.dirac_squared(A)) - ctx.dirac_squared(ctx.delta(A))).value()),
        "star_lap": _maxabs((ctx.star(ctx.dirac_squared(A)) - ctx.dirac_squared(ctx.star(A))).value()),
    }
    ds, sd, dd1, dd2 = 0.0, 0.0, 0.0, 0.0
    for p in A.degrees():
        part = A.grade(p)
        sg = (-1.0) ** p
        if p < DIM:
            ds = max(ds, _maxabs((ctx.delta(ctx.star(part)) - (-sg) * ctx.star(ctx.d(part))).value()))
        if p > 0:
            sd = max(sd, _maxabs((ctx.star(ctx.delta(part)) - sg * ctx.d(ctx.star(part))).value()))
        dd1 = max(dd1, _maxabs((ctx.d(ctx.delta(ctx.star(part))) - ctx.star(ctx.delta(ctx.d(part)))).value()))
        dd2 = max(dd2, _maxabs((ctx.star(ctx.d(ctx.delta(part))) - ctx.delta(ctx.d(ctx.star(part)))).value()))
    out.update({"delta_star": ds, "star_delta": sd, "d_delta_star": dd1, "star_d_delta": dd2})
    return out


# -------------------------------------------------------------- flat demo


def flat_maxwell_demo(order: int = 3) -> dict[str, float]:
    """Plane wave A = cos(k.x) eps on Minkowski space, k null and k.eps = 0."""
    from . import geometry, metricfile

    x0 = np.array([0.3, -0.2, 0.5, 0.1])
    s = geometry.snapshot(metricfile.builtin("minkowski"), x0, order)
    ctx = DiracContext(s)
    k = np.array([1.0, 1.0, 0.0, 0.0])
    eps = np.array([0.0, 0.0, 1.0, 0.0])
    xs = [jet.variable(x0[i], i, order) for i in range(DIM)]
    phase = sum(k[i] * xs[i] for i in range(DIM))
    c = jet.cos(phase)
    coord = np.zeros((NBLADES, jet.NCOEF[order]))
    for mu in range(DIM):
        coord[1 << mu] = eps[mu] * c
    A = ctx.from_coordinates(coord)
    F = ctx.d(A)
    dF = ctx.d(F)
    dlF = ctx.delta(F)
    wave = ctx.box(A)
    static = np.zeros((NBLADES, jet.NCOEF[order]))
    static[0b0011, 0] = 2.5
    Fs = ctx.from_coordinates(static)
    return {
        "dF": _maxabs(dF.value()),
        "deltaF": _maxabs(dlF.value()),
        "diracF": _maxabs(ctx.dirac(F).value()),
        "lorenz": _maxabs(ctx.delta(A).value()),
        "box_A": _maxabs(wave.value()),
        "static_diracF": _maxabs(ctx.dirac(Fs).value()),
        "F_norm": _maxabs(F.value()),
    }


def harmonic_coordinates_residual(ctx: DiracContext, T: StressEnergy) -> float:
    """box dx^mu + 1/2 R dx^mu + T^mu for harmonic coordinates (flat charts only)."""
    R = float(np.einsum("a,aa->", ETA, ctx.s.ricci[..., 0]))
    worst = 0.0
    E0 = ctx.s.E[..., 0]
    Tm = matter_one_forms(T)[..., 0]
    for mu in range(DIM):
        coord = np.zeros((NBLADES, jet.NCOEF[jet.order_of(ctx.E)]))
        coord[1 << mu, 0] = 1.0
        th = ctx.from_coordinates(coord)
        Tmu = sum(E0[a, mu] * Tm[a] for a in range(DIM))
        worst = max(worst, _maxabs(ctx.box(th).value() + 0.5 * R * th.value() + Tmu))
    return worst


def grade_mask(p: int) -> np.ndarray:
    return (GRADE == p)


__all__ = [
    "DiracContext",
    "FormField",
    "RICCI_OPERATOR_SIGN",
    "WEITZENBOCK_SIGN",
    "codifferential_routes_residual",
    "component_form_residual",
    "evans_residual",
    "flat_maxwell_demo",
    "harmonic_coordinates_residual",
    "laplacian_split_residuals",
    "laplacians",
    "ricci_forms",
    "ricci_operator_residual",
    "split_residual",
    "star_identity_residuals",
    "tetrad_wave_residuals",
    "wave_ricci_residual",
    "weitzenbock_residuals",
]
