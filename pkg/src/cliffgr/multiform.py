"""Scalar and Clifford-valued multiforms expanded on the co-frame blades.

A multiform array has shape (16, ..., N): axis 0 runs over the sixteen
theta-blades theta^I (bit masks, as for multivectors), the trailing axis
holds jet coefficients and anything in between is carried along (for example
a Clifford value axis of length 16). The co-frame generators theta^a obey the
same Clifford algebra as e_a, so wedge, contraction and the Hodge dual on
axis 0 are the stal products.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from . import cforms, jet, stal
from ._tables import DIM, GRADE, NBLADES, WEDGE_SIGNS


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(DIM) if mask >> i & 1)


@lru_cache(maxsize=None)
def _perm_signs(k: int):
    out = []
    for perm in permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        out.append((perm, -1.0 if inv % 2 else 1.0))
    return tuple(out)


def blade_minors(M: np.ndarray) -> np.ndarray:
    """out[I, J] = det M[rows I, cols J] for equal-grade masks, jets (16, 16, N).

    With dx^mu = M[a, mu] theta^a this is the matrix taking coordinate blade
    coefficients to co-frame blade coefficients.
    """
    n = M.shape[-1]
    out = np.zeros((NBLADES, NBLADES, n))
    out[0, 0, 0] = 1.0
    for I in range(1, NBLADES):
        rows = _bits(I)
        for J in range(1, NBLADES):
            if GRADE[I] != GRADE[J]:
                continue
            cols = _bits(J)
            acc = np.zeros(n)
            for perm, s in _perm_signs(len(rows)):
                term = None
                for r, p in zip(rows, perm):
                    f = M[r, cols[p]]
                    term = f if term is None else jet.mul(term, f)
                acc = acc + s * term
            out[I, J] = acc
    return out


def _apply(mat: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Contract a jet matrix (16, 16, N) with the form axis of a multiform."""
    k = min(jet.order_of(mat), jet.order_of(a))
    m = jet.truncate(mat, k)
    a = jet.truncate(a, k)
    extra = a.ndim - 2
    mm = m.reshape((NBLADES, NBLADES) + (1,) * extra + (m.shape[-1],))
    return jet.mul(mm, a[None]).sum(axis=1)


class CoFrame:
    """Blade change of basis between dx^I and theta^I at one snapshot."""

    def __init__(self, h: np.ndarray, E: np.ndarray):
        self.h = h
        self.E = E
        self.to_frame_matrix = blade_minors(E)
        self.to_coord_matrix = np.transpose(blade_minors(h), (1, 0, 2))

    def to_frame(self, a: np.ndarray) -> np.ndarray:
        return _apply(self.to_frame_matrix, a)

    def to_coord(self, a: np.ndarray) -> np.ndarray:
        return _apply(self.to_coord_matrix, a)

    def d(self, a: np.ndarray) -> np.ndarray:
        """Exterior derivative of a co-frame multiform."""
        return self.to_frame(d_coord(self.to_coord(a)))


def d_coord(a: np.ndarray) -> np.ndarray:
    """Exterior derivative of a multiform on coordinate blades dx^I."""
    grads = jet.gradient(a)
    out = np.zeros(grads.shape[1:])
    for mu in range(DIM):
        m = 1 << mu
        for J in range(NBLADES):
            s = WEDGE_SIGNS[m, J]
            if s:
                out[m | J] += s * grads[mu, J]
    return out


def hodge(a: np.ndarray) -> np.ndarray:
    """Hodge dual on the form axis: reverse times theta^0123."""
    return np.tensordot(stal.HODGE, a, axes=(1, 0))


def hodge_inv(a: np.ndarray) -> np.ndarray:
    return np.tensordot(stal.HODGE_INV, a, axes=(1, 0))


def grade_part(a: np.ndarray, p: int) -> np.ndarray:
    return a * (GRADE == p).astype(float).reshape((NBLADES,) + (1,) * (a.ndim - 1))


def from_cform(f: cforms.CliffordForm) -> np.ndarray:
    """Dense (16, 16, N) multiform from a CliffordForm (form axis first)."""
    out = np.zeros((NBLADES,) + f.comps.shape[1:])
    for k, I in enumerate(cforms.multi_indices(f.degree)):
        out[sum(1 << i for i in I)] = f.comps[k]
    return out


def to_cform(a: np.ndarray, p: int, frame: str = cforms.COORD) -> cforms.CliffordForm:
    comps = np.stack([a[sum(1 << i for i in I)] for I in cforms.multi_indices(p)])
    return cforms.CliffordForm(p, comps, frame)


def scalar_to_cform(a: np.ndarray, p: int, frame: str = cforms.COORD) -> cforms.CliffordForm:
    """Degree-p part of a scalar multiform (16, N) as a scalar-valued CliffordForm."""
    dense = np.zeros((NBLADES, NBLADES, a.shape[-1]))
    dense[:, 0, :] = a
    return to_cform(dense, p, frame)


def basis(a: int, order: int) -> np.ndarray:
    """The co-frame generator theta^a as a constant multiform jet."""
    out = np.zeros((NBLADES, jet.NCOEF[order]))
    out[1 << a, 0] = 1.0
    return out


__all__ = [
    "CoFrame",
    "basis",
    "blade_minors",
    "d_coord",
    "from_cform",
    "grade_part",
    "hodge",
    "hodge_inv",
    "scalar_to_cform",
    "to_cform",
]
