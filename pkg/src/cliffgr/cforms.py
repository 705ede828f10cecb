"""Clifford-valued differential forms in four dimensions.

A CliffordForm of degree p stores one multivector per strictly increasing
multi-index, as an array of shape (C(4, p), 16, N). N is a jet length, so a
form with jet components doubles as a field germ on which d can act.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from . import jet, stal
from ._tables import DIM, NBLADES

COORD = "coord"
FRAME = "frame"


class DegreeError(ValueError):
    """The requested form degree exceeds four."""


class FrameMismatch(ValueError):
    """Arithmetic between forms whose indices refer to different co-frames."""


@lru_cache(maxsize=None)
def multi_indices(p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(DIM), p))


@lru_cache(maxsize=None)
def _index_of(p: int) -> dict[tuple[int, ...], int]:
    return {I: k for k, I in enumerate(multi_indices(p))}


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


@lru_cache(maxsize=None)
def _wedge_table(p: int, q: int):
    """(i, j, k, sign) for dx^I ^ dx^J = sign dx^K over disjoint I, J."""
    out = []
    kidx = _index_of(p + q)
    for i, I in enumerate(multi_indices(p)):
        for j, J in enumerate(multi_indices(q)):
            s = _perm_sign(I + J)
            if s:
                out.append((i, j, kidx[tuple(sorted(I + J))], s))
    return tuple(out)


@dataclass(frozen=True)
class CliffordForm:
    degree: int
    comps: np.ndarray  # (C(4,p), 16, N)
    frame: str = COORD

    def __post_init__(self):
        if not 0 <= self.degree <= DIM:
            raise DegreeError(f"degree {self.degree} outside [0, 4]")
        n = len(multi_indices(self.degree))
        if self.comps.shape[:2] != (n, NBLADES):
            raise ValueError(f"degree-{self.degree} form needs shape ({n}, 16, N), got {self.comps.shape}")

    @property
    def order(self) -> int:
        return jet.order_of(self.comps)

    def component(self, *idx: int) -> np.ndarray:
        """Multivector (jet) on dx^idx for any ordering of distinct indices."""
        s = _perm_sign(idx)
        if s == 0:
            return np.zeros(self.comps.shape[1:])
        return s * self.comps[_index_of(self.degree)[tuple(sorted(idx))]]

    def values(self) -> np.ndarray:
        """Point values, shape (C(4,p), 16)."""
        return self.comps[..., 0]

    def norm(self) -> float:
        return float(np.max(np.abs(self.values()))) if self.comps.size else 0.0

    def truncate(self, order: int) -> "CliffordForm":
        return CliffordForm(self.degree, jet.truncate(self.comps, order), self.frame)

    def evaluate(self, *vectors) -> np.ndarray:
        """Value on p vector arguments (component arrays of length 4)."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        out = np.zeros(self.comps.shape[1:])
        for perm in permutations(range(DIM), self.degree) if self.degree else [()]:
            w = 1.0
            for v, mu in zip(vectors, perm):
                w *= v[mu]
            if w:
                out = out + w * self.component(*perm)
        return out

    def _check(self, o: "CliffordForm") -> int:
        if self.frame != o.frame:
            raise FrameMismatch(f"{self.frame} vs {o.frame} indices")
        if self.degree != o.degree:
            raise ValueError("degree mismatch")
        return min(self.order, o.order)

    def __add__(self, o: "CliffordForm") -> "CliffordForm":
        k = self._check(o)
        return CliffordForm(self.degree, jet.truncate(self.comps, k) + jet.truncate(o.comps, k), self.frame)

    def __sub__(self, o: "CliffordForm") -> "CliffordForm":
        return self + (-o)

    def __neg__(self) -> "CliffordForm":
        return CliffordForm(self.degree, -self.comps, self.frame)

    def __mul__(self, s: float) -> "CliffordForm":
        return CliffordForm(self.degree, self.comps * float(s), self.frame)

    __rmul__ = __mul__


def zero(p: int, order: int = 0, frame: str = COORD) -> CliffordForm:
    return CliffordForm(p, np.zeros((len(multi_indices(p)), NBLADES, jet.NCOEF[order])), frame)


def from_multivector(a: np.ndarray, frame: str = COORD) -> CliffordForm:
    """A 0-form from a multivector jet array of shape (16, N)."""
    return CliffordForm(0, np.asarray(a)[None], frame)


def map_values(f, a: CliffordForm) -> CliffordForm:
    """Apply a linear multivector map to every component."""
    return CliffordForm(a.degree, f(a.comps), a.frame)


def _product(a: CliffordForm, b: CliffordForm, op) -> CliffordForm:
    if a.frame != b.frame:
        raise FrameMismatch(f"{a.frame} vs {b.frame} indices")
    p, q = a.degree, b.degree
    if p + q > DIM:
        raise DegreeError(f"degree {p} + {q} exceeds 4")
    table = _wedge_table(p, q)
    n = min(a.order, b.order)
    out = np.zeros((len(multi_indices(p + q)), NBLADES, jet.NCOEF[n]))
    if table:
        ii, jj, kk, ss = (np.array(t) for t in zip(*table))
        prods = op(a.comps[ii], b.comps[jj]) * ss[:, None, None]
        np.add.at(out, kk, prods)
    return CliffordForm(p + q, out, a.frame)


def tensor_wedge(a: CliffordForm, b: CliffordForm) -> CliffordForm:
    """Geometric product of values combined with the wedge of form indices."""
    return _product(a, b, stal.gp)


def comm_form(a: CliffordForm, b: CliffordForm) -> CliffordForm:
    """Graded commutator [A, B] = A (x)^ B - (-1)^(pq) B (x)^ A."""
    sign = (-1) ** (a.degree * b.degree)
    return tensor_wedge(a, b) - sign * tensor_wedge(b, a)


def d_form(f: CliffordForm) -> CliffordForm:
    """Exterior derivative of a coordinate-indexed form with jet components."""
    if f.frame != COORD:
        raise FrameMismatch("d acts on coordinate components")
    p = f.degree
    if p + 1 > DIM:
        raise DegreeError("d of a 4-form")
    grads = jet.gradient(f.comps)  # (4, C, 16, N-1)
    out = np.zeros((len(multi_indices(p + 1)), NBLADES, grads.shape[-1]))
    kidx = _index_of(p + 1)
    for i, I in enumerate(multi_indices(p)):
        for mu in range(DIM):
            if mu in I:
                continue
            s = _perm_sign((mu,) + I)
            out[kidx[tuple(sorted((mu,) + I))]] += s * grads[mu, i]
    return CliffordForm(p + 1, out, COORD)


def connection_form(omega_mu: np.ndarray) -> CliffordForm:
    """Bivector-valued 1-form from the four coordinate bivectors (4, 16, N)."""
    return CliffordForm(1, np.asarray(omega_mu), COORD)


def excd(a: CliffordForm, omega: CliffordForm) -> CliffordForm:
    """Exterior covariant differential d A + (p/2) [omega, A]; p = 0 uses 1/2."""
    p = a.degree
    if p == 0:
        return absolute_diff(a, omega)
    return d_form(a) + (p / 2.0) * comm_form(omega, a)


def absolute_diff(a: CliffordForm, omega: CliffordForm) -> CliffordForm:
    """DA = dA + 1/2 [omega, A] for a multivector-valued 0-form."""
    if a.degree != 0:
        raise ValueError("absolute differential acts on 0-forms")
    return d_form(a) + 0.5 * comm_form(omega, a)


def directional(a: CliffordForm, vec: np.ndarray) -> CliffordForm:
    """Derivative of the coordinate components along a jet vector field (4, N)."""
    grads = jet.gradient(a.comps)
    out = sum(jet.mul(vec[mu][None, None, :], grads[mu]) for mu in range(DIM))
    return CliffordForm(a.degree, out, a.frame)


def ecd(a: CliffordForm, r: int, omega_frame: np.ndarray, e_frame: np.ndarray) -> CliffordForm:
    """Extended covariant derivative along e_r: d_{e_r} A + (p/2)[omega_r, A].

    omega_frame holds the frame connection bivectors (4, 16, N); e_frame holds
    the frame vectors e_a^mu as jets (4, 4, N).
    """
    if not 0 <= r < DIM:
        raise IndexError(f"direction index {r} outside 0..3")
    p = a.degree
    deriv = directional(a, e_frame[r])
    fac = 0.5 if p == 0 else p / 2.0
    om = jet.truncate(omega_frame[r], deriv.order)
    return CliffordForm(p, deriv.comps + fac * stal.comm(om[None], jet.truncate(a.comps, deriv.order)), a.frame)


def reassemble(parts: list[CliffordForm], h: np.ndarray) -> CliffordForm:
    """Sum over r of theta^r (x)^ parts[r], with theta^r = h^r_mu dx^mu."""
    out = None
    for r, part in enumerate(parts):
        th = np.zeros((DIM, NBLADES, h.shape[-1]))
        th[:, 0, :] = h[r]
        term = tensor_wedge(CliffordForm(1, th), part)
        out = term if out is None else out + term
    return out


def cartan_excd(c: CliffordForm, conn: np.ndarray) -> CliffordForm:
    """Cartan's differential of a vector-valued p-form, built from components.

    With c = e_j (x) c^j it returns e_j (x) d c^j + (D e_j) ^ c^j, where
    D e_j = conn[mu, j, k] e_k dx^mu, i.e. conn[mu, j, k] = Gamma^k_{mu j}.
    """
    if stal.grades(c.comps) - {1}:
        raise ValueError("cartan_excd needs a grade-1 multivector part")
    out = d_form(c)
    n = min(out.order, jet.order_of(conn))
    for j in range(DIM):
        dej = np.zeros((DIM, NBLADES, jet.NCOEF[n]))
        for k in range(DIM):
            dej[:, 1 << k, :] = jet.truncate(conn[:, j, k], n)
        cj = np.zeros(c.comps.shape)
        cj[:, 0, :] = c.comps[:, 1 << j, :]
        out = out + tensor_wedge(CliffordForm(1, dej, c.frame), CliffordForm(c.degree, cj, c.frame))
    return out


def to_frame(a: CliffordForm, e_frame: np.ndarray) -> CliffordForm:
    """Re-express coordinate form indices on the orthonormal co-frame.

    A_{a1..ap} = A(e_a1, ..., e_ap) with e_frame[a, mu] = e_a^mu jets.
    """
    if a.frame != COORD:
        raise FrameMismatch("already in frame indices")
    p = a.degree
    if p == 0:
        return CliffordForm(0, a.comps, FRAME)
    n = min(a.order, jet.order_of(e_frame))
    out = np.zeros((len(multi_indices(p)), NBLADES, jet.NCOEF[n]))
    comps = jet.truncate(a.comps, n)
    ef = jet.truncate(e_frame, n)
    for k, A in enumerate(multi_indices(p)):
        for perm in permutations(range(DIM), p):
            w = None
            for ai, mu in zip(A, perm):
                w = ef[ai, mu] if w is None else jet.mul(w, ef[ai, mu])
            s = _perm_sign(perm)
            src = comps[_index_of(p)[tuple(sorted(perm))]]
            out[k] += s * jet.mul(w[None, :], src)
    return CliffordForm(p, out, FRAME)


def _diff(a: CliffordForm, b: CliffordForm) -> float:
    return (a - b).norm()


def graded_jacobi_residual(a: CliffordForm, b: CliffordForm, c: CliffordForm) -> float:
    """(-1)^{pr}[[A,B],C] + (-1)^{qp}[[B,C],A] + (-1)^{rq}[[C,A],B]."""
    p, q, r = a.degree, b.degree, c.degree
    out = ((-1) ** (p * r)) * comm_form(comm_form(a, b), c)
    out = out + ((-1) ** (q * p)) * comm_form(comm_form(b, c), a)
    out = out + ((-1) ** (r * q)) * comm_form(comm_form(c, a), b)
    return out.norm()


def antisymmetry_residual(a: CliffordForm, b: CliffordForm) -> float:
    """[A,B] + (-1)^{pq}[B,A]."""
    return (comm_form(a, b) + ((-1) ** (a.degree * b.degree)) * comm_form(b, a)).norm()


def derivation_residual(a: CliffordForm, b: CliffordForm) -> float:
    """d[A,B] - [dA,B] - (-1)^p [A,dB]."""
    lhs = d_form(comm_form(a, b))
    rhs = comm_form(d_form(a), b) + ((-1) ** a.degree) * comm_form(a, d_form(b))
    return _diff(lhs, rhs)


def bracket_product_residual(omega: CliffordForm, a: CliffordForm, b: CliffordForm) -> float:
    """[w, A (x)^ B] - [w,A] (x)^ B - (-1)^p A (x)^ [w,B]."""
    lhs = comm_form(omega, tensor_wedge(a, b))
    rhs = tensor_wedge(comm_form(omega, a), b) + ((-1) ** a.degree) * tensor_wedge(a, comm_form(omega, b))
    return _diff(lhs, rhs)


def excd_product_residual(a: CliffordForm, b: CliffordForm, omega: CliffordForm, coeff: float = 0.5) -> float:
    """D(A (x)^ B) against DA (x)^ B + (-1)^p A (x)^ DB plus the extra terms.

    The extra terms are coeff * (q [w,A] (x)^ B + (-1)^p p A (x)^ [w,B]); the
    printed product rule has coeff = 1, the (p/2) differential needs 1/2.
    """
    p, q = a.degree, b.degree
    sg = (-1) ** p
    lhs = excd(tensor_wedge(a, b), omega)
    rhs = tensor_wedge(excd(a, omega), b) + sg * tensor_wedge(a, excd(b, omega))
    rhs = rhs + coeff * (q * tensor_wedge(comm_form(omega, a), b) + sg * p * tensor_wedge(a, comm_form(omega, b)))
    return _diff(lhs, rhs)


def omega_square_residual(omega: CliffordForm) -> float:
    """[w,w](d_mu, d_nu) against 2 [w_mu, w_nu] for all pairs."""
    ww = comm_form(omega, omega)
    worst = 0.0
    for k, (m, n) in enumerate(multi_indices(2)):
        want = 2.0 * stal.comm(omega.comps[m], omega.comps[n])
        worst = max(worst, float(np.max(np.abs(ww.comps[k, :, :1] - want[:, :1]))))
    return worst


def excd_square_terms(a: CliffordForm, omega: CliffordForm) -> dict[str, CliffordForm]:
    """D^2 A and the brackets it is compared with (literal curvature D w)."""
    d2 = excd(excd(a, omega), omega)
    curv = excd(omega, omega)  # d w + 1/2 [w, w]
    dw = d_form(omega)
    k = d2.order
    terms = {
        "D2": d2,
        "R": comm_form(curv, a.truncate(curv.order)).truncate(k),
        "dw": comm_form(dw, a.truncate(dw.order)).truncate(k),
    }
    if a.degree >= 1:
        da = d_form(a)
        om = omega.truncate(min(omega.order, da.order))
        terms["w_dA"] = comm_form(om, da.truncate(om.order)).truncate(k)
    return terms


def fit_coefficients(target: CliffordForm, basis: list[CliffordForm], grid) -> tuple[tuple[float, ...], float]:
    """Best coefficient tuple from grid for target = sum c_i basis_i (point values)."""
    best, best_res = None, float("inf")
    for coeffs in grid:
        acc = target.values().copy()
        for c, b in zip(coeffs, basis):
            acc = acc - c * b.values()
        res = float(np.max(np.abs(acc)))
        if res < best_res:
            best, best_res = tuple(coeffs), res
    return best, best_res


def cartan_relation_residual(c: CliffordForm, omega: CliffordForm, conn: np.ndarray) -> float:
    """D C - D^c C - ((p-1)/2)[w, C] for a vector-valued p-form."""
    p = c.degree
    lhs = excd(c, omega)
    rhs = cartan_excd(c, conn) + ((p - 1) / 2.0) * comm_form(omega, c)
    return _diff(lhs, rhs)


def reassembly_residuals(a: CliffordForm, omega_frame: np.ndarray, e_frame: np.ndarray,
                         h: np.ndarray, omega: CliffordForm) -> dict[str, float]:
    """excd against sum_r theta^r (x)^ D_{e_r} A, and against the printed right order."""
    parts = [ecd(a, r, omega_frame, e_frame) for r in range(DIM)]
    left = reassemble(parts, h)
    right = None
    for r, part in enumerate(parts):
        th = np.zeros((DIM, NBLADES, h.shape[-1]))
        th[:, 0, :] = h[r]
        term = tensor_wedge(part, CliffordForm(1, th))
        right = term if right is None else right + term
    full = excd(a, omega)
    return {"left": _diff(full, left), "right_printed": _diff(full, right)}


__all__ = [
    "COORD",
    "antisymmetry_residual",
    "bracket_product_residual",
    "cartan_relation_residual",
    "derivation_residual",
    "excd_product_residual",
    "excd_square_terms",
    "fit_coefficients",
    "graded_jacobi_residual",
    "omega_square_residual",
    "reassembly_residuals",
    "CliffordForm",
    "DegreeError",
    "FRAME",
    "FrameMismatch",
    "absolute_diff",
    "cartan_excd",
    "comm_form",
    "connection_form",
    "d_form",
    "directional",
    "ecd",
    "excd",
    "from_multivector",
    "map_values",
    "multi_indices",
    "reassemble",
    "tensor_wedge",
    "to_frame",
    "zero",
]
