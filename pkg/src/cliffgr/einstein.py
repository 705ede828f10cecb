"""Field-equation faces built on a GeometrySnapshot.

Frame indices are orthonormal; T[a, b] holds T_ab jets. All residuals are
max-abs values at the snapshot point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cforms, expr, geometry, jet, multiform, stal
from ._tables import DIM, ETA, GRADE, NBLADES
from .geometry import GeometrySnapshot
from .metricfile import MetricSpec

# Coefficient of [omega_mu, R^mu_nu] that makes the direct current agree with
# the Hodge route; the printed value is 2.
CURRENT_COMMUTATOR = 1.0
PRINTED_CURRENT_COMMUTATOR = 2.0

# Sign of the scalar-curvature term in the paravector equation; printed +1.
SACHS_R_SIGN = -1.0
PRINTED_SACHS_R_SIGN = 1.0


def _vec(comps: np.ndarray) -> np.ndarray:
    """Vector jets (..., 16, N) from components (..., 4, N) on e_0..e_3."""
    out = np.zeros(comps.shape[:-2] + (NBLADES, comps.shape[-1]))
    for a in range(DIM):
        out[..., 1 << a, :] = comps[..., a, :]
    return out


def _e(a: int, order: int) -> np.ndarray:
    out = np.zeros((NBLADES, jet.NCOEF[order]))
    out[1 << a, 0] = 1.0
    return out


def _scalar_mv(x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[:-1] + (NBLADES, x.shape[-1]))
    out[..., 0, :] = x
    return out


def _maxabs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


# ----------------------------------------------------------- stress-energy


@dataclass(frozen=True)
class StressEnergy:
    """Orthonormal-frame T_ab as jets (4, 4, N)."""

    T: np.ndarray
    preset: str = "custom"

    @property
    def order(self) -> int:
        return jet.order_of(self.T)

    def trace(self) -> np.ndarray:
        return np.einsum("a,aan->n", ETA, self.T)

    def mixed(self) -> np.ndarray:
        """T_a^b = T_ab eta^bb."""
        return self.T * ETA[None, :, None]

    def symmetry_residual(self) -> float:
        return _maxabs(self.T - np.transpose(self.T, (1, 0, 2)))


def vacuum(order: int) -> StressEnergy:
    return StressEnergy(np.zeros((DIM, DIM, jet.NCOEF[order])), "vacuum")


def perfect_fluid(rho: np.ndarray, p: np.ndarray | None = None) -> StressEnergy:
    """Comoving fluid in the frame: T = diag(rho, p, p, p)."""
    T = np.zeros((DIM, DIM, rho.shape[-1]))
    T[0, 0] = rho
    if p is not None:
        for i in range(1, DIM):
            T[i, i] = p
    return StressEnergy(T, "dust" if p is None else "fluid")


def stress_energy(spec: MetricSpec, x, order: int) -> StressEnergy:
    """Evaluate the stress-energy preset declared in the metric file."""
    se = spec.stress_energy
    if not se or se.get("preset", "vacuum") == "vacuum":
        return vacuum(order)
    env = dict(spec.params)
    for i, name in enumerate(spec.coords):
        env[name] = jet.variable(float(x[i]), i, order)
    preset = se["preset"]
    rho = expr.eval_jet(se["rho"], env, order)
    if preset == "dust":
        return perfect_fluid(rho)
    if preset == "fluid":
        return perfect_fluid(rho, expr.eval_jet(se["p"], env, order))
    raise ValueError(f"unknown stress-energy preset {preset!r}")


def _fit(T: StressEnergy, k: int) -> np.ndarray:
    if T.order < k:
        raise ValueError(f"stress-energy jets of order {T.order} below the needed {k}")
    return jet.truncate(T.T, k)


# --------------------------------------------------------- Einstein tensor


def einstein_tensor(s: GeometrySnapshot) -> np.ndarray:
    """G_ab = R_ab - 1/2 eta_ab R as jets."""
    ric = s.ricci
    R = np.einsum("a,aan->n", ETA, ric)
    return ric - 0.5 * np.diag(ETA)[:, :, None] * R[None, None, :]


def einstein_residual(s: GeometrySnapshot, T: StressEnergy) -> float:
    G = einstein_tensor(s)[..., 0]
    return _maxabs(G - T.T[..., 0])


def ricci_vectors(s: GeometrySnapshot) -> np.ndarray:
    """R_a = -e^c _| R_ac, jets (4, 16, N)."""
    k = jet.order_of(s.R_ab)
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for c in range(DIM):
            out[a] -= ETA[c] * stal.lcontr(_e(c, k), s.R_ab[a, c])
    return out


def scalar_curvature(s: GeometrySnapshot) -> np.ndarray:
    return np.einsum("a,aan->n", ETA, s.ricci)


def vector_equation_residual(s: GeometrySnapshot, T: StressEnergy) -> float:
    """R_a - 1/2 R e_a = T_a with T_a = T_a^b e_b."""
    Ra = ricci_vectors(s)[..., 0]
    R = float(scalar_curvature(s)[0])
    worst = 0.0
    Tm = T.mixed()[..., 0]
    for a in range(DIM):
        want = np.zeros(NBLADES)
        for b in range(DIM):
            want[1 << b] = Tm[a, b]
        got = Ra[a].copy()
        got[1 << a] -= 0.5 * R
        worst = max(worst, _maxabs(got - want))
    return worst


def ricci_vector_components_residual(s: GeometrySnapshot) -> float:
    """R_a from the bivectors against Ric_ab e^b from the Riemann contraction."""
    Ra = ricci_vectors(s)[..., 0]
    want = _vec(s.ricci[..., :1] * ETA[None, :, None])[..., 0]
    return _maxabs(Ra - want)


# ------------------------------------------------------- Maxwell-like face


def maxwell_like_F(s: GeometrySnapshot) -> np.ndarray:
    """F_ab = R_a e_b - e_b R_a - 1/2 R (e_a e_b - e_b e_a), jets (4, 4, 16, N)."""
    Ra = ricci_vectors(s)
    k = jet.order_of(Ra)
    R = scalar_curvature(s)[: jet.NCOEF[k]]
    F = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for b in range(DIM):
            eb, ea = _e(b, k), _e(a, k)
            F[a, b] = stal.comm(Ra[a], eb) - 0.5 * jet.mul(R[None], stal.comm(ea, eb))
    return F


def maxwell_like_F_products(s: GeometrySnapshot) -> np.ndarray:
    """Second assembly through geometric products only.

    F_ab = 1/2 (R_ac e^c e_b + e_b e^c R_ac - e^c R_ac e_b - e_b R_ac e^c)
           - 1/2 R (e_a e_b - e_b e_a).
    """
    k = jet.order_of(s.R_ab)
    R = scalar_curvature(s)[: jet.NCOEF[k]]
    F = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for b in range(DIM):
            eb = _e(b, k)
            acc = np.zeros((NBLADES, jet.NCOEF[k]))
            for c in range(DIM):
                ec = ETA[c] * _e(c, k)
                Rac = s.R_ab[a, c]
                acc += stal.gp(stal.gp(Rac, ec), eb) + stal.gp(eb, stal.gp(ec, Rac))
                acc -= stal.gp(stal.gp(ec, Rac), eb) + stal.gp(eb, stal.gp(Rac, ec))
            F[a, b] = 0.5 * acc - 0.5 * jet.mul(R[None], stal.comm(_e(a, k), eb))
    return F


def grade_residual(x: np.ndarray, allowed: set[int]) -> float:
    """Largest coefficient outside the allowed grades (blade axis at -2)."""
    mask = np.array([g not in allowed for g in GRADE])
    return _maxabs(x[..., mask, :])


def vacuum_identity_residual(s: GeometrySnapshot) -> float:
    """(e^c _| R_ac) e_b = (e^c _| R_bc) e_a."""
    Ra = -ricci_vectors(s)[..., 0]
    worst = 0.0
    for a in range(DIM):
        for b in range(DIM):
            lhs = stal.gp(Ra[a], stal.E[b].c)
            rhs = stal.gp(Ra[b], stal.E[a].c)
            worst = max(worst, _maxabs(lhs - rhs))
    return worst


def source_bivectors(s: GeometrySnapshot, T: StressEnergy) -> np.ndarray:
    """T_a e_b - e_b T_a with T_a = T_a^c e_c, jets (4, 4, 16, N)."""
    Tm = T.mixed()
    Ta = _vec(Tm)
    k = T.order
    out = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for b in range(DIM):
            out[a, b] = stal.comm(Ta[a], _e(b, k))
    return out


def frame_divergence(s: GeometrySnapshot, X: np.ndarray, clifford_coeff: float = 0.5) -> np.ndarray:
    """eta^{ca} (D_c X)_{ab} for a multivector field with two frame indices.

    D_c differentiates the value along e_c, adds clifford_coeff [omega_c, X]
    and transports both frame indices with Gamma^d_{ca}.
    """
    dX = jet.gradient(X)  # [mu, a, b, 16, N-]
    k = jet.order_of(dX)
    E = jet.truncate(s.E, k)
    fc = jet.truncate(s.frame_conn, k)  # [c, a, d] = Gamma^d_{ca}
    w = jet.truncate(s.omega_a, k)
    Xk = jet.truncate(X, k)
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for c in range(DIM):
        a = c
        for b in range(DIM):
            term = sum(jet.mul(E[c, mu][None], dX[mu, a, b]) for mu in range(DIM))
            term = term + clifford_coeff * stal.comm(w[c], Xk[a, b])
            for d in range(DIM):
                term = term - jet.mul(fc[c, a, d][None], Xk[d, b]) - jet.mul(fc[c, b, d][None], Xk[a, d])
            out[b] += ETA[c] * term
    return out


def maxwell_like_divergence(s: GeometrySnapshot, T: StressEnergy, clifford_coeff: float = 0.5) -> float:
    """Residual of D_{e_a} F^a_b = D_{e_a}(T^a e_b - e_b T^a)."""
    F = maxwell_like_F(s)
    k = jet.order_of(F)
    src = jet.truncate(source_bivectors(s, _as_order(T, k)), k)
    lhs = frame_divergence(s, F, clifford_coeff)
    rhs = frame_divergence(s, src, clifford_coeff)
    return _maxabs(lhs[..., 0] - rhs[..., 0])


def _as_order(T: StressEnergy, k: int) -> StressEnergy:
    return StressEnergy(_fit(T, k), T.preset)


def maxwell_like_equivalence(s: GeometrySnapshot, T: StressEnergy) -> float:
    """F_ab against T_a e_b - e_b T_a at the point."""
    F = maxwell_like_F(s)[..., 0]
    return _maxabs(F - source_bivectors(s, T)[..., 0])


# -------------------------------------------------------------- paravectors


def paravectors(order: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """q_a = e_a e_0 and the check conjugates (-1, q_1, q_2, q_3), jets (4, 16, N)."""
    q = np.zeros((DIM, NBLADES, jet.NCOEF[order]))
    qc = np.zeros_like(q)
    for a in range(DIM):
        q[a] = stal.gp(_e(a, order), _e(0, order))
        qc[a] = -stal.gp(_e(0, order), _e(a, order))
    return q, qc


def dagger(x):
    """A^dagger = e^0 reverse(A) e^0."""
    e0 = _e(0, jet.order_of(np.asarray(x))) if np.ndim(x) >= 2 else stal.E[0].c
    return stal.gp(stal.gp(e0, stal.reverse(x)), e0)


def sachs_lhs(s: GeometrySnapshot, r_sign: float = SACHS_R_SIGN) -> np.ndarray:
    """R_ab q^b + q^b R_ab^dagger + r_sign R q_a, jets (4, 16, N)."""
    k = jet.order_of(s.R_ab)
    q, _ = paravectors(k)
    qu = q * ETA[:, None, None]
    R = scalar_curvature(s)[: jet.NCOEF[k]]
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for b in range(DIM):
            Rab = s.R_ab[a, b]
            out[a] += stal.gp(Rab, qu[b]) + stal.gp(qu[b], dagger(Rab))
        out[a] += r_sign * jet.mul(R[None], q[a])
    return out


def sachs_source(T: StressEnergy) -> np.ndarray:
    """T_a = T_a^b q_b as paravector jets (4, 16, N)."""
    q, _ = paravectors(T.order)
    return _mixed_q(T, q)


def _mixed_q(T: StressEnergy, q: np.ndarray) -> np.ndarray:
    Tm = T.mixed()
    out = np.zeros((DIM, NBLADES, Tm.shape[-1]))
    for a in range(DIM):
        for b in range(DIM):
            out[a] += jet.mul(Tm[a, b][None], q[b])
    return out


def sachs_equation_residual(s: GeometrySnapshot, T: StressEnergy, r_sign: float = SACHS_R_SIGN) -> float:
    lhs = sachs_lhs(s, r_sign)[..., 0]
    return _maxabs(lhs - 2.0 * sachs_source(T)[..., 0])


def sachs_F(s: GeometrySnapshot, r_sign: float = SACHS_R_SIGN) -> np.ndarray:
    """The antisymmetric paravector field, jets (4, 4, 16, N)."""
    k = jet.order_of(s.R_ab)
    q, qc = paravectors(k)
    qu, qcu = q * ETA[:, None, None], qc * ETA[:, None, None]
    R = scalar_curvature(s)[: jet.NCOEF[k]]
    out = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for r in range(DIM):
        for g in range(DIM):
            acc = np.zeros((NBLADES, jet.NCOEF[k]))
            for lam in range(DIM):
                Rrl = s.R_ab[r, lam]
                Rd = dagger(Rrl)
                acc += stal.gp(stal.gp(Rrl, qu[lam]), qc[g])
                acc += stal.gp(stal.gp(q[g], qcu[lam]), Rrl)
                acc += stal.gp(stal.gp(qu[lam], Rd), qc[g])
                acc += stal.gp(stal.gp(q[g], Rd), qcu[lam])
            pair = stal.gp(q[r], qc[g]) - stal.gp(q[g], qc[r])
            out[r, g] = 0.5 * acc + 0.5 * r_sign * jet.mul(R[None], pair)
    return out


def sachs_current_field(T: StressEnergy) -> np.ndarray:
    """T^rho qcheck_gamma - q_gamma Tcheck^rho before differentiation, lower indices."""
    k = T.order
    q, qc = paravectors(k)
    Tm = T.mixed()
    Tq = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    Tqc = np.zeros_like(Tq)
    for a in range(DIM):
        for b in range(DIM):
            Tq[a] += jet.mul(Tm[a, b][None], q[b])
            Tqc[a] += jet.mul(Tm[a, b][None], qc[b])
    out = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for r in range(DIM):
        for g in range(DIM):
            out[r, g] = stal.gp(Tq[r], qc[g]) - stal.gp(q[g], Tqc[r])
    return out


def sachs_equivalence_residual(s: GeometrySnapshot, r_sign: float = SACHS_R_SIGN) -> float:
    """The paravector field against -F_ab from the Maxwell-like face."""
    return _maxabs(sachs_F(s, r_sign)[..., 0] + maxwell_like_F(s)[..., 0])


def sachs_residual(s: GeometrySnapshot, T: StressEnergy, r_sign: float = SACHS_R_SIGN) -> float:
    """Residual of D_{e_rho} F^rho_gamma = J_gamma for the paravector fields."""
    F = sachs_F(s, r_sign)
    k = jet.order_of(F)
    src = jet.truncate(sachs_current_field(_as_order(T, k)), k)
    return _maxabs(frame_divergence(s, F)[..., 0] - frame_divergence(s, src)[..., 0])


# ------------------------------------------------------------ gauge current


def _raise_first(s: GeometrySnapshot, X: np.ndarray) -> np.ndarray:
    """X^mu_nu = g^{mu a} X_{a nu} for (4, 4, 16, N) jets."""
    k = jet.order_of(X)
    gi = jet.truncate(s.ginv, k)
    return jet.mul(gi[:, :, None, None, :], X[None]).sum(axis=1)


def gauge_current_direct(s: GeometrySnapshot, coeff: float = CURRENT_COMMUTATOR) -> np.ndarray:
    """J_nu = nabla_mu R^mu_nu + coeff [omega_mu, R^mu_nu], jets (4, 16, N)."""
    Rup = _raise_first(s, s.R_mn)
    dR = jet.gradient(Rup)  # [rho, mu, nu]
    k = jet.order_of(dR)
    Rk = jet.truncate(Rup, k)
    G = jet.truncate(s.Gamma, k)
    w = jet.truncate(s.omega_mu, k)
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for nu in range(DIM):
        acc = sum(dR[mu, mu, nu] for mu in range(DIM))
        for mu in range(DIM):
            for lam in range(DIM):
                acc = acc + jet.mul(G[mu, mu, lam][None], Rk[lam, nu]) - jet.mul(G[lam, mu, nu][None], Rk[mu, lam])
            acc = acc + coeff * stal.comm(w[mu], Rk[mu, nu])
        out[nu] = acc
    return out


def _dual_curvature(s: GeometrySnapshot, frame: multiform.CoFrame) -> np.ndarray:
    """Star of the curvature 2-form as a coordinate multiform (16, 16, N)."""
    Rf = multiform.from_cform(s.curvature_form())
    return frame.to_coord(multiform.hodge(frame.to_frame(Rf)))


def _omega_bracket(s: GeometrySnapshot, a: np.ndarray, p: int) -> np.ndarray:
    """Graded commutator [omega, A] for a coordinate multiform of degree p."""
    A = multiform.to_cform(a, p)
    om = s.omega_form().truncate(A.order) if s.omega_form().order > A.order else s.omega_form()
    return multiform.from_cform(cforms.comm_form(om, A.truncate(min(A.order, om.order))))


def gauge_current_hodge(s: GeometrySnapshot) -> np.ndarray:
    """J_nu from star J = -(d star R + [omega, star R]), jets (4, 16, N)."""
    frame = multiform.CoFrame(s.h, s.E)
    sR = _dual_curvature(s, frame)
    dsR = multiform.d_coord(sR)
    br = _omega_bracket(s, sR, 2)
    k = min(jet.order_of(dsR), jet.order_of(br))
    starJ = -(jet.truncate(dsR, k) + jet.truncate(br, k))
    J = frame.to_coord(multiform.hodge_inv(frame.to_frame(starJ)))
    return np.stack([J[1 << nu] for nu in range(DIM)])


def current_closure_residuals(s: GeometrySnapshot) -> dict[str, float]:
    """d(star J + c [omega, star R]) for c = 1 (derived) and c = -1/2 (printed).

    Needs jets of order 4 in the snapshot.
    """
    frame = multiform.CoFrame(s.h, s.E)
    sR = _dual_curvature(s, frame)
    dsR = multiform.d_coord(sR)
    br = _omega_bracket(s, sR, 2)
    k = min(jet.order_of(dsR), jet.order_of(br))
    if k < 1:
        raise ValueError("closure needs a snapshot of order 4")
    starJ = -(jet.truncate(dsR, k) + jet.truncate(br, k))
    out = {}
    for name, c in (("derived", 1.0), ("printed", -0.5)):
        out[name] = _maxabs(multiform.d_coord(starJ + c * jet.truncate(br, k))[..., 0])
    return out


def gauge_current(s: GeometrySnapshot) -> dict:
    """Both current routes, the calibrated coefficient and their discrepancy.

    The coefficient is None when every candidate fits equally, as on flat space.
    """
    hodge_route = gauge_current_hodge(s)[..., 0]
    fits = {}
    for c in (0.5, 1.0, 2.0):
        fits[c] = _maxabs(gauge_current_direct(s, c)[..., 0] - hodge_route)
    best = min(fits, key=fits.get)
    tied = max(fits.values()) - fits[best] <= 1e-12
    return {
        "J": hodge_route,
        "coefficient": None if tied else best,
        "discrepancy": fits[best],
        "printed_discrepancy": fits[PRINTED_CURRENT_COMMUTATOR],
        "fits": fits,
    }


# ---------------------------------------------------------- superpotentials


def connection_one_forms(s: GeometrySnapshot) -> np.ndarray:
    """omega_ab = eta_aa Gamma^a_{cb} theta^c as co-frame multiforms (4, 4, 16, N)."""
    fc = s.frame_conn  # [c, b, a] = Gamma^a_{cb}
    out = np.zeros((DIM, DIM, NBLADES, fc.shape[-1]))
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                out[a, b, 1 << c] = ETA[a] * fc[c, b, a]
    return out


def _star_triple(order: int) -> np.ndarray:
    """star(theta^a ^ theta^b ^ theta^c) for all a, b, c, shape (4, 4, 4, 16, N)."""
    out = np.zeros((DIM, DIM, DIM, NBLADES, jet.NCOEF[order]))
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                t = stal.wedge(stal.wedge(stal.E[a].c, stal.E[b].c), stal.E[c].c)
                out[a, b, c, :, 0] = stal.hodge(t)
    return out


def superpotentials(s: GeometrySnapshot, printed_t: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """(star S^c, star t^c) as co-frame multiforms, each (4, 16, N).

    star S^c = 1/2 w_ab ^ star(th^a th^b th^c)
    star t^c = -1/2 w_ab ^ [w^c_d ^ star(th^a th^b th^d) + w^b_d ^ star(th^a th^d th^c)]
    The printed expression has a minus on the second bracket term.
    """
    w = connection_one_forms(s)
    k = jet.order_of(w)
    st = _star_triple(k)
    wu = w * ETA[:, None, None, None]  # w^a_b
    sign = -1.0 if printed_t else 1.0
    S = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    t = np.zeros_like(S)
    for c in range(DIM):
        for a in range(DIM):
            for b in range(DIM):
                if not np.any(w[a, b]):
                    continue
                S[c] += 0.5 * stal.wedge(w[a, b], st[a, b, c])
                inner = np.zeros((NBLADES, jet.NCOEF[k]))
                for d in range(DIM):
                    inner += stal.wedge(wu[c, d], st[a, b, d]) + sign * stal.wedge(wu[b, d], st[a, d, c])
                t[c] -= 0.5 * stal.wedge(w[a, b], inner)
    return S, t


def superpotential_lowered(s: GeometrySnapshot) -> np.ndarray:
    """star S_c = [-1/2 w_ab _| (th^a ^ th^b ^ th_c)] th^5, (4, 16, N)."""
    w = connection_one_forms(s)
    k = jet.order_of(w)
    I = np.zeros((NBLADES, jet.NCOEF[k]))
    I[15, 0] = 1.0
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for c in range(DIM):
        for a in range(DIM):
            for b in range(DIM):
                tri = np.zeros((NBLADES, jet.NCOEF[k]))
                tri[:, 0] = ETA[c] * stal.wedge(stal.wedge(stal.E[a].c, stal.E[b].c), stal.E[c].c)
                out[c] -= 0.5 * stal.gp(stal.lcontr(w[a, b], tri), I)
    return out


def curvature_two_forms(s: GeometrySnapshot) -> np.ndarray:
    """R_ab = 1/2 R_abcd th^c ^ th^d (standard index order), (4, 4, 16, N)."""
    Rup = geometry.bivector_coeffs(s.R_ab)  # [c, d, a, b] = R^{ab}_{cd}
    k = jet.order_of(Rup)
    out = np.zeros((DIM, DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        for b in range(DIM):
            for c, d in geometry.BIVECTOR_PAIRS:
                out[a, b, (1 << c) | (1 << d)] = ETA[a] * ETA[b] * Rup[c, d, a, b]
    return out


def einstein_forms(s: GeometrySnapshot) -> np.ndarray:
    """Star of G^a = G^a_b theta^b, co-frame 3-forms (4, 16, N)."""
    G = einstein_tensor(s) * ETA[:, None, None]  # G^a_b
    k = jet.order_of(G)
    out = np.zeros((DIM, NBLADES, jet.NCOEF[k]))
    for a in range(DIM):
        one = np.zeros((NBLADES, jet.NCOEF[k]))
        for b in range(DIM):
            one[1 << b] = G[a, b]
        out[a] = multiform.hodge(one)
    return out


def matter_forms(T: StressEnergy) -> np.ndarray:
    """Star of T^a = T^a_b theta^b, (4, 16, N)."""
    Tu = T.T * ETA[:, None, None]
    out = np.zeros((DIM, NBLADES, Tu.shape[-1]))
    for a in range(DIM):
        one = np.zeros((NBLADES, Tu.shape[-1]))
        for b in range(DIM):
            one[1 << b] = Tu[a, b]
        out[a] = multiform.hodge(one)
    return out


def einstein_form_identity_residual(s: GeometrySnapshot) -> float:
    """star G^d = -1/2 R_ab ^ star(th^a th^b th^d)."""
    Rf = curvature_two_forms(s)
    k = jet.order_of(Rf)
    st = _star_triple(k)
    G = einstein_forms(s)
    worst = 0.0
    for d in range(DIM):
        acc = np.zeros((NBLADES, jet.NCOEF[k]))
        for a in range(DIM):
            for b in range(DIM):
                acc -= 0.5 * stal.wedge(Rf[a, b], st[a, b, d])
        worst = max(worst, _maxabs(acc[..., 0] - G[d][..., 0]))
    return worst


def superpotential_identity_residual(s: GeometrySnapshot, printed_t: bool = False) -> float:
    """-d star S^a - star t^a = star G^a."""
    S, t = superpotentials(s, printed_t)
    frame = multiform.CoFrame(s.h, s.E)
    worst = 0.0
    G = einstein_forms(s)
    for a in range(DIM):
        lhs = -frame.d(S[a])[..., 0] - t[a][..., 0]
        worst = max(worst, _maxabs(lhs - G[a][..., 0]))
    return worst


def superpotential_forms_residual(s: GeometrySnapshot) -> float:
    """Lowered form against eta_cc star S^c."""
    S, _ = superpotentials(s)
    low = superpotential_lowered(s)
    return _maxabs(low[..., 0] - (S * ETA[:, None, None])[..., 0])


def pseudo_current_closure(s: GeometrySnapshot, T: StressEnergy) -> float:
    """d(star T^a + star t^a) as a 4-form."""
    _, t = superpotentials(s)
    k = jet.order_of(t)
    M = matter_forms(_as_order(T, k))
    frame = multiform.CoFrame(s.h, s.E)
    return max(_maxabs(frame.d(M[a] + t[a])[..., 0]) for a in range(DIM))


# ----------------------------------------------------------- inertial mass


@dataclass(frozen=True)
class MassResult:
    radii: tuple[float, ...]
    estimates: tuple[float, ...]
    limit: float
    slope: float | None
    quad_order: int


def _flux(spec: MetricSpec, X: np.ndarray) -> np.ndarray:
    """d_beta(g11 g22 g33 g^{alpha beta}) for spatial alpha at a batch of points.

    Returns shape (M, 3). Uses d g^{-1} = -g^{-1} (d g) g^{-1}.
    """
    g = geometry.metric_jets(spec, X, 1)  # (4, 4, M, 5)
    g0 = np.moveaxis(g[..., 0], 2, 0)  # (M, 4, 4)
    dg = np.moveaxis(g[..., 1:], (2, 3), (0, 1))  # (M, beta, 4, 4)
    gi = np.linalg.inv(g0)
    dgi = -np.einsum("mai,mbij,mjc->mbac", gi, dg, gi)
    f = g0[:, 1, 1] * g0[:, 2, 2] * g0[:, 3, 3]
    df = (dg[:, :, 1, 1] * g0[:, None, 2, 2] * g0[:, None, 3, 3]
          + g0[:, None, 1, 1] * dg[:, :, 2, 2] * g0[:, None, 3, 3]
          + g0[:, None, 1, 1] * g0[:, None, 2, 2] * dg[:, :, 3, 3])
    div = np.einsum("mb,mab->ma", df, gi) + f[:, None] * np.einsum("mbab->ma", dgi)
    return div[:, 1:]


def _sphere_rule(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre in cos(theta) times the trapezoid rule in phi."""
    u, wu = np.polynomial.legendre.leggauss(n)
    m = 2 * n
    phi = 2.0 * math.pi * np.arange(m) / m
    return u, wu, phi


def surface_mass(spec: MetricSpec, R: float, quad_order: int, t: float = 0.0) -> float:
    """-1/(16 pi) times the sphere integral of the flux with outward normal."""
    u, wu, phi = _sphere_rule(quad_order)
    st = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    n = np.stack([
        (st[:, None] * np.cos(phi)[None]).ravel(),
        (st[:, None] * np.sin(phi)[None]).ravel(),
        np.repeat(u, len(phi)),
    ], axis=1)
    w = np.repeat(wu, len(phi)) * (2.0 * math.pi / len(phi))
    X = np.concatenate([np.full((len(n), 1), t), R * n], axis=1)
    vals = w * R * R * np.einsum("ma,ma->m", _flux(spec, X), n)
    return -math.fsum(vals) / (16.0 * math.pi)


def richardson(radii, values) -> float:
    """Polynomial extrapolation in 1/R to 1/R = 0 through all points."""
    x = 1.0 / np.asarray(radii, dtype=float)
    y = np.asarray(values, dtype=float)
    # Neville's scheme evaluated at zero.
    p = list(y)
    n = len(p)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i])
    return float(p[0])


def _mass_parameter(spec: MetricSpec) -> float:
    return float(spec.params.get("m", 0.0))


def inertial_mass(spec: MetricSpec, radii, quad_order: int = 32) -> MassResult:
    if not spec.quasi_cartesian:
        raise ValueError(f"metric {spec.label!r} is not flagged quasi_cartesian; the surface integral needs Cartesian-like coordinates")
    if quad_order < 4:
        raise ValueError(f"quadrature order {quad_order} below the minimum 4")
    radii = tuple(sorted(float(r) for r in radii))
    if not radii:
        raise ValueError("no radii given")
    m = _mass_parameter(spec)
    if m and radii[0] < 3.0 * m:
        raise ValueError(f"radius {radii[0]} is below 3m = {3.0 * m}")
    est = tuple(surface_mass(spec, R, quad_order) for R in radii)
    limit = richardson(radii, est)
    slope = None
    dev = [abs(e - limit) for e in est]
    if len(radii) >= 2 and dev[0] > 1e-14 and dev[-1] > 1e-14:
        slope = float(np.polyfit(np.log(radii), np.log(dev), 1)[0])
    return MassResult(radii, est, limit, slope, quad_order)


__all__ = [
    "CURRENT_COMMUTATOR",
    "MassResult",
    "SACHS_R_SIGN",
    "StressEnergy",
    "current_closure_residuals",
    "einstein_residual",
    "einstein_tensor",
    "gauge_current",
    "inertial_mass",
    "maxwell_like_F",
    "maxwell_like_divergence",
    "paravectors",
    "perfect_fluid",
    "ricci_vectors",
    "sachs_F",
    "sachs_residual",
    "stress_energy",
    "superpotentials",
    "vacuum",
]
