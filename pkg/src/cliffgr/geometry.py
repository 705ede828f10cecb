"""Tetrad, Levi-Civita connection and curvature at a chart point, via jets.

Index conventions used throughout:

* h[a, mu] = h^a_mu with theta^a = h^a_mu dx^mu; E[a, mu] = e_a^mu.
* Gamma[l, m, n] = Gamma^l_{mn}.
* conn[mu, b, c] = Gamma^c_{mu b}, the frame components of D_{d_mu} e_b.
* omega_mu, omega_a: connection bivectors with D_X e_b = 1/2 [omega_X, e_b].
* R_mn: curvature bivectors with [D_m, D_n] e_b = 1/2 [R_mn, e_b].
* riemann[a, b, c, d]: [D_c, D_d] e_a = riemann[a, b, c, d] e^b, so it equals
  the usual R_{bacd}; ricci is the usual R^c_{acb}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cforms, expr, jet, stal
from ._tables import DIM, ETA, NBLADES
from .metricfile import MetricSpec

# Bit masks of the six bivectors e_b e_c with b < c.
BIVECTOR_PAIRS = [(b, c) for b in range(DIM) for c in range(b + 1, DIM)]

# R_ab = RIEMANN_FACTOR * riemann[a, b, c, d] e^c e^d (fixed by the Kretschmann oracle).
RIEMANN_FACTOR = -0.5


class SingularPoint(ValueError):
    """The chart degenerates at the requested point."""


class SignatureError(ValueError):
    """The metric does not have signature (+, -, -, -) at the point."""


def metric_jets(spec: MetricSpec, x, order: int = jet.DEFAULT_ORDER) -> np.ndarray:
    """g_ij jets, shape (4, 4, N); a batch of points (..., 4) gives (4, 4, ..., N)."""
    x = np.asarray(x, dtype=float)
    env = dict(spec.params)
    for i, name in enumerate(spec.coords):
        env[name] = jet.variable(x[..., i], i, order)
    g = np.zeros((DIM, DIM) + x.shape[:-1] + (jet.NCOEF[order],))
    for (i, j), e in spec.upper.items():
        try:
            v = expr.eval_jet(e, env, order)
        except (expr.EvalDomainError, jet.DomainError) as exc:
            raise SingularPoint(f"g.{i}.{j} at {x.tolist()}: {exc}") from None
        g[i, j] = v
        g[j, i] = v
    return g


def check_point(g0: np.ndarray) -> None:
    diag = np.abs(np.diag(g0))
    if np.any(diag < 1e-8):
        raise SingularPoint(f"vanishing diagonal metric component {diag.min():.3e}")
    det = np.linalg.det(g0)
    if abs(det) < 1e-10:
        raise SingularPoint(f"metric determinant {det:.3e}")
    ev = np.linalg.eigvalsh(g0)
    if not (np.sum(ev > 0) == 1 and np.sum(ev < 0) == 3):
        raise SignatureError(f"eigenvalues {ev} do not have signature (+,-,-,-)")


def _inner(g, u, v):
    """g(u, v) for jet vectors u, v (4, N)."""
    return jet.mul(jet.mul(g, u[:, None, :]), v[None, :, :]).sum(axis=(0, 1))


def tetrad(g: np.ndarray, diagonal: bool) -> tuple[np.ndarray, np.ndarray]:
    """Return (h, E) with g = h^T eta h and E = h^{-1} transposed."""
    order = jet.order_of(g)
    if diagonal:
        h = np.zeros_like(g)
        E = np.zeros_like(g)
        for a in range(DIM):
            gaa = ETA[a] * g[a, a]
            if gaa[0] <= 0:
                raise SignatureError(f"diagonal entry {a} has the wrong sign for its leg")
            h[a, a] = jet.sqrt(gaa)
            E[a, a] = jet.recip(h[a, a])
        return h, E
    # Gram-Schmidt on the coordinate basis, time leg first.
    E = np.zeros_like(g)
    for a in range(DIM):
        u = jet.constant(np.eye(DIM)[a], order)
        for b in range(a):
            proj = _inner(g, u, E[b]) * ETA[b]
            u = u - jet.mul(proj[None, :], E[b])
        nn = ETA[a] * _inner(g, u, u)
        if nn[0] <= 0:
            raise SignatureError(f"coordinate vector {a} has the wrong causal type")
        E[a] = jet.mul(jet.recip(jet.sqrt(nn))[None, :], u)
    h = jet.inverse(np.transpose(E, (1, 0, 2)))
    return h, E


def christoffel(g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    dg = jet.gradient(g)  # dg[s, m, n] = d_s g_mn
    # Gamma_{s m n} = 1/2 (d_m g_sn + d_n g_sm - d_s g_mn)
    low = 0.5 * (np.transpose(dg, (1, 0, 2, 3)) + np.transpose(dg, (1, 2, 0, 3)) - dg)
    k = jet.order_of(low)
    return jet.mul(jet.truncate(ginv, k)[:, :, None, None, :], low[None]).sum(axis=1)


def _bivector(coef: np.ndarray) -> np.ndarray:
    """Bivector jets from antisymmetric coefficients coef[..., b, c, N]."""
    out = np.zeros(coef.shape[:-3] + (NBLADES, coef.shape[-1]))
    for b, c in BIVECTOR_PAIRS:
        out[..., (1 << b) | (1 << c), :] = coef[..., b, c, :]
    return out


def bivector_coeffs(biv: np.ndarray) -> np.ndarray:
    """Antisymmetric B^{bc} with B = 1/2 B^{bc} e_b e_c, from (..., 16, N)."""
    out = np.zeros(biv.shape[:-2] + (DIM, DIM, biv.shape[-1]))
    for b, c in BIVECTOR_PAIRS:
        v = biv[..., (1 << b) | (1 << c), :]
        out[..., b, c, :] = v
        out[..., c, b, :] = -v
    return out


def connection(h, E, Gam):
    """Frame connection coefficients and the coordinate connection bivectors."""
    k = jet.order_of(Gam)
    dE = jet.gradient(E)  # dE[mu, j, nu] = d_mu e_j^nu
    Ek = jet.truncate(E, k)
    # D_{d_mu} e_j = (d_mu e_j^nu + Gamma^nu_{mu l} e_j^l) d_nu
    cov = dE + jet.mul(np.transpose(Gam, (1, 0, 2, 3))[:, None, :, :, :], Ek[None, :, None, :, :]).sum(axis=3)
    hk = jet.truncate(h, k)
    conn = jet.mul(cov[:, :, None, :, :], hk[None, None, :, :, :]).sum(axis=3)  # [mu, j, c]
    # omega^{bc} = -eta^{bb} Gamma^c_{mu b}, antisymmetrised for exactness.
    coef = -ETA[None, :, None, None] * conn
    coef = 0.5 * (coef - np.transpose(coef, (0, 2, 1, 3)))
    return conn, _bivector(coef)


def to_frame_index(Xmu: np.ndarray, E: np.ndarray) -> np.ndarray:
    """X_a = e_a^mu X_mu for jet arrays with leading index mu and trailing (16, N)."""
    k = min(jet.order_of(Xmu), jet.order_of(E))
    return jet.mul(jet.truncate(E, k)[:, :, None, :], jet.truncate(Xmu, k)[None]).sum(axis=1)


def curvature_bivectors(omega_mu: np.ndarray, quad: float) -> np.ndarray:
    """d_m w_n - d_n w_m + quad [w_m, w_n] for all m, n."""
    dw = jet.gradient(omega_mu)  # dw[m, n] = d_m w_n
    k = jet.order_of(dw)
    w = jet.truncate(omega_mu, k)
    br = stal.comm(w[:, None], w[None, :])
    return dw - np.transpose(dw, (1, 0, 2, 3)) + quad * br


@dataclass
class GeometrySnapshot:
    """Geometric data at one point; arrays carry jets on their last axis."""

    spec: MetricSpec
    point: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    h: np.ndarray
    E: np.ndarray
    Gamma: np.ndarray
    conn: np.ndarray
    omega_mu: np.ndarray
    omega_a: np.ndarray
    R_mn: np.ndarray
    R_excd: np.ndarray
    R_ab: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    extras: dict = field(default_factory=dict)

    @property
    def omega_coeffs(self) -> np.ndarray:
        """omega_a^{bc} at the point, shape (4, 4, 4)."""
        return bivector_coeffs(self.omega_a)[..., 0]

    @property
    def frame_conn(self) -> np.ndarray:
        """Gamma^c_{ab} with D_{e_a} e_b = Gamma^c_{ab} e_c, jets (4, 4, 4, N)."""
        return to_frame_index(self.conn.reshape(DIM, DIM * DIM, -1), self.E).reshape(DIM, DIM, DIM, -1)

    def theta(self) -> cforms.CliffordForm:
        """Soldering form e_a (x) theta^a in coordinate components."""
        out = np.zeros((DIM, NBLADES, self.h.shape[-1]))
        for a in range(DIM):
            out[:, 1 << a, :] = self.h[a]
        return cforms.CliffordForm(1, out)

    def omega_form(self) -> cforms.CliffordForm:
        return cforms.connection_form(self.omega_mu)

    def curvature_form(self, literal: bool = False) -> cforms.CliffordForm:
        """Curvature 2-form 1/2 R_mn dx^m ^ dx^n (literal: the excd of omega)."""
        R = self.R_excd if literal else self.R_mn
        comps = np.stack([R[m, n] for m, n in cforms.multi_indices(2)])
        return cforms.CliffordForm(2, comps)


def snapshot(spec: MetricSpec, x, order: int = jet.DEFAULT_ORDER) -> GeometrySnapshot:
    if order < 2:
        raise ValueError("curvature needs jets of order >= 2")
    x = np.asarray(x, dtype=float)
    g = metric_jets(spec, x, order)
    check_point(g[..., 0])
    ginv = jet.inverse(g)
    h, E = tetrad(g, spec.is_diagonal())
    Gam = christoffel(g, ginv)
    conn, omega_mu = connection(h, E, Gam)
    omega_a = to_frame_index(omega_mu, E)
    R_mn = curvature_bivectors(omega_mu, 0.5)
    R_excd = curvature_bivectors(omega_mu, 1.0)
    k = jet.order_of(R_mn)
    Ek = jet.truncate(E, k)
    R_ab = jet.mul(Ek[:, None, :, None, None, :], Ek[None, :, None, :, None, :])
    R_ab = jet.mul(R_ab, R_mn[None, None]).sum(axis=(2, 3))
    # R^{cd}_{ab} coefficients, then lower to riemann[a, b, c, d] = R_{bacd}.
    Rup = bivector_coeffs(R_ab)  # [a, b, c, d] = R^{cd}_{ab}
    std = ETA[None, None, :, None, None] * ETA[None, None, None, :, None] * Rup
    std = np.transpose(std, (2, 3, 0, 1, 4))  # std[c, d, a, b] = R_{cdab}
    riemann = -std
    ricci = np.einsum("c,cacbn->abn", ETA, std)
    scalar = float(np.einsum("a,aa->", ETA, ricci[..., 0]))
    return GeometrySnapshot(spec, x, g, ginv, h, E, Gam, conn, omega_mu, omega_a,
                            R_mn, R_excd, R_ab, riemann, ricci, scalar)


# ------------------------------------------------------------------ checks


def eta_residual(s: GeometrySnapshot) -> float:
    h0, gi = s.h[..., 0], s.ginv[..., 0]
    return float(np.max(np.abs(h0 @ gi @ h0.T - np.diag(ETA))))


def kretschmann(s: GeometrySnapshot) -> float:
    r = s.riemann[..., 0]
    up = r * ETA[:, None, None, None] * ETA[None, :, None, None] * ETA[None, None, :, None] * ETA[None, None, None, :]
    return float(np.sum(r * up))


def riemann_symmetry_residual(s: GeometrySnapshot) -> float:
    r = s.riemann[..., 0]
    return float(max(
        np.max(np.abs(r + np.transpose(r, (1, 0, 2, 3)))),
        np.max(np.abs(r + np.transpose(r, (0, 1, 3, 2)))),
        np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1)))),
    ))


def riemann_reassembly_residual(s: GeometrySnapshot) -> float:
    """R_ab against RIEMANN_FACTOR * riemann[a,b,c,d] e^c e^d."""
    out = 0.0
    r = s.riemann[..., 0]
    for a in range(DIM):
        for b in range(DIM):
            acc = stal.Multivector()
            for c in range(DIM):
                for d in range(DIM):
                    if r[a, b, c, d]:
                        acc = acc + RIEMANN_FACTOR * r[a, b, c, d] * ETA[c] * ETA[d] * stal.E[c] * stal.E[d]
            out = max(out, float(np.max(np.abs(acc.c - s.R_ab[a, b, :, 0]))))
    return out


def antisymmetry_residual(s: GeometrySnapshot) -> float:
    w = bivector_coeffs(s.omega_a)[..., 0]
    return float(max(np.max(np.abs(s.R_mn + np.transpose(s.R_mn, (1, 0, 2, 3)))),
                     np.max(np.abs(w + np.transpose(w, (0, 2, 1))))))


def torsion(s: GeometrySnapshot) -> cforms.CliffordForm:
    """Theta = excd(theta) = d theta + 1/2 [omega, theta]."""
    return cforms.excd(s.theta(), s.omega_form())


def cartan2_residual(s: GeometrySnapshot) -> float:
    """Structure equation d w^a_b + w^a_c ^ w^c_b against the curvature bivectors."""
    conn = s.conn  # conn[mu, b, a] = w^a_b(d_mu)
    dconn = jet.gradient(conn)  # [nu, mu, b, a]
    c0 = conn[..., 0]
    d0 = dconn[..., 0]
    Rup = bivector_coeffs(s.R_mn)[..., 0]  # [m, n, a, c] = R^{ac}_{mn}
    worst = 0.0
    for m in range(DIM):
        for n in range(DIM):
            # (d w^a_b)_{mn} = d_m w^a_b(n) - d_n w^a_b(m)
            dw = d0[m, n] - d0[n, m]  # [b, a]
            ww = np.einsum("ca,bc->ba", c0[m], c0[n]) - np.einsum("ca,bc->ba", c0[n], c0[m])
            struct = (dw + ww).T  # [a, b]
            comp = Rup[m, n] * ETA[None, :]  # R^a_b = R^{ac} eta_cb
            worst = max(worst, float(np.max(np.abs(struct - comp))))
    return worst


def bianchi_cyclic_residual(s: GeometrySnapshot, literal: bool = False) -> float:
    """Cyclic sum of D_r R_mn with D = d + c [omega, .]; c = 1 for literal."""
    R = s.R_excd if literal else s.R_mn
    c = 1.0 if literal else 0.5
    dR = jet.gradient(R)  # [r, m, n]
    w = jet.truncate(s.omega_mu, jet.order_of(dR))
    DR = dR + c * stal.comm(w[:, None, None], jet.truncate(R, jet.order_of(dR))[None])
    worst = 0.0
    for r in range(DIM):
        for m in range(DIM):
            for n in range(DIM):
                cyc = DR[r, m, n] + DR[m, n, r] + DR[n, r, m]
                worst = max(worst, float(np.max(np.abs(cyc[..., 0]))))
    return worst


def bianchi_form_residual(s: GeometrySnapshot, literal: bool = False) -> float:
    """3-form residual of d R + c [omega, R]."""
    R = s.curvature_form(literal)
    c = 1.0 if literal else 0.5
    out = cforms.d_form(R) + c * cforms.comm_form(s.omega_form(), R)
    return out.norm()


def commutator_curvature_residuals(s: GeometrySnapshot) -> dict[str, float]:
    """[D_r, D_l] e_m from Christoffel symbols against the curvature bivectors.

    Returns the residual of [D_r,D_l] e_m = -e_m _| R_rl, of
    1/2 (e_m R - R e_m) = -riemann[m, a, r, l] e^a, and of the printed signs.
    """
    # Coordinate Riemann R^s_{m r l} = d_r G^s_{lm} - d_l G^s_{rm} + G^s_{rk} G^k_{lm} - G^s_{lk} G^k_{rm}
    G = s.Gamma
    dG = jet.gradient(G)[..., 0]  # [r, s, l, m]
    G0 = G[..., 0]
    Rc = (np.einsum("rslm->srlm", dG) - np.einsum("lsrm->srlm", dG)
          + np.einsum("srk,klm->srlm", G0, G0) - np.einsum("slk,krm->srlm", G0, G0))
    # Rc[s, r, l, m] : [D_r, D_l] d_m = Rc[s, r, l, m] d_s
    h0, E0 = s.h[..., 0], s.E[..., 0]
    # frame vector components of [D_r, D_l] e_m in coordinates r, l (tensorial in e_m)
    rot = np.einsum("srlm,cs,am->arlc", Rc, h0, E0)  # [a, r, l, c]: coefficient of e_c
    r_frame = np.einsum("arlc,pr,ql->apqc", rot, E0, E0)  # directions in frame
    worst_a = worst_b = worst_printed = 0.0
    Rab = s.R_ab[..., 0]
    for m in range(DIM):
        em = stal.E[m].c
        for p in range(DIM):
            for q in range(DIM):
                lhs = np.zeros(NBLADES)
                for c in range(DIM):
                    lhs[1 << c] = r_frame[m, p, q, c]
                contr = stal.lcontr(em, Rab[p, q])
                worst_a = max(worst_a, float(np.max(np.abs(lhs + contr))))
                worst_printed = max(worst_printed, float(np.max(np.abs(lhs - contr))))
                half = 0.5 * (stal.gp(em, Rab[p, q]) - stal.gp(Rab[p, q], em))
                rhs = np.zeros(NBLADES)
                for a in range(DIM):
                    rhs[1 << a] = -s.riemann[m, a, p, q, 0] * ETA[a]
                worst_b = max(worst_b, float(np.max(np.abs(half - rhs))))
    return {"commutator": worst_a, "riemann_half_commutator": worst_b, "printed_sign": worst_printed}


def frame_transport_residual(s: GeometrySnapshot) -> float:
    """D_{e_a} e_b from Christoffel symbols against 1/2 [omega_a, e_b] = -e_b _| omega_a."""
    fc = s.frame_conn[..., 0]
    worst = 0.0
    for a in range(DIM):
        for b in range(DIM):
            want = np.zeros(NBLADES)
            for c in range(DIM):
                want[1 << c] = fc[a, b, c]
            got = 0.5 * stal.comm(s.omega_a[a, :, 0], stal.E[b].c)
            alt = -stal.lcontr(stal.E[b].c, s.omega_a[a, :, 0])
            worst = max(worst, float(np.max(np.abs(got - want))), float(np.max(np.abs(alt - want))))
    return worst


__all__ = [
    "GeometrySnapshot",
    "RIEMANN_FACTOR",
    "SignatureError",
    "SingularPoint",
    "bianchi_cyclic_residual",
    "bianchi_form_residual",
    "cartan2_residual",
    "christoffel",
    "commutator_curvature_residuals",
    "kretschmann",
    "metric_jets",
    "riemann_symmetry_residual",
    "snapshot",
    "tetrad",
    "torsion",
]
