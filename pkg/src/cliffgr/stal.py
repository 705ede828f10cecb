"""Spacetime algebra Cl(1,3) with metric diag(+1, -1, -1, -1).

Every operation accepts a Multivector, a plain coefficient array of shape
(..., 16), or a multivector jet array of shape (..., 16, N) whose last axis
holds Taylor coefficients. Products of jets are truncated to the smaller
order of the two operands.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels
from ._tables import (
    BLADE_NAMES,
    CAYLEY,
    GRADE,
    INVOLUTE_SIGNS,
    LCONTR_SIGNS,
    LOWER_SIGNS,
    NBLADES,
    NCOEF,
    ORDER_OF,
    RCONTR_SIGNS,
    REVERSE_SIGNS,
    SCALAR_SIGNS,
    WEDGE_SIGNS,
)

PSEUDOSCALAR = 0b1111
BLADE_INDEX = {name: i for i, name in enumerate(BLADE_NAMES)}


class Multivector:
    """Sixteen real coefficients on the blade basis, indexed by bit mask."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.c = np.zeros(NBLADES)
        else:
            c = np.asarray(coeffs, dtype=float)
            if c.shape != (NBLADES,):
                raise ValueError(f"expected 16 coefficients, got shape {c.shape}")
            self.c = c.copy()

    @classmethod
    def scalar(cls, x: float) -> "Multivector":
        m = cls()
        m.c[0] = x
        return m

    @classmethod
    def blade(cls, name: str | int, coeff: float = 1.0) -> "Multivector":
        idx = name if isinstance(name, int) else BLADE_INDEX[name]
        m = cls()
        m.c[idx] = coeff
        return m

    @classmethod
    def vector(cls, comps: Iterable[float]) -> "Multivector":
        m = cls()
        for i, x in enumerate(comps):
            m.c[1 << i] = x
        return m

    def grade(self, k: int) -> "Multivector":
        return Multivector(grade(self.c, k))

    def norm(self) -> float:
        return float(np.max(np.abs(self.c)))

    def __add__(self, o):
        if isinstance(o, Multivector):
            return Multivector(self.c + o.c)
        return self + Multivector.scalar(o)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Multivector):
            return Multivector(self.c - o.c)
        return self - Multivector.scalar(o)

    def __rsub__(self, o):
        return Multivector.scalar(o) - self

    def __neg__(self):
        return Multivector(-self.c)

    def __mul__(self, o):
        if isinstance(o, Multivector):
            return gp(self, o)
        return Multivector(self.c * float(o))

    def __rmul__(self, o):
        return Multivector(self.c * float(o))

    def __truediv__(self, o):
        return Multivector(self.c / float(o))

    def __xor__(self, o):
        return wedge(self, o)

    def __lshift__(self, o):
        return lcontr(self, o)

    def __rshift__(self, o):
        return rcontr(self, o)

    def __invert__(self):
        return reverse(self)

    def __eq__(self, o):
        return isinstance(o, Multivector) and bool(np.array_equal(self.c, o.c))

    def __hash__(self):
        return hash(self.c.tobytes())

    def __repr__(self) -> str:
        terms = [
            f"{x:+.6g}" + ("" if i == 0 else "*" + BLADE_NAMES[i])
            for i, x in enumerate(self.c)
            if x != 0.0
        ]
        return "Multivector(" + (" ".join(terms) if terms else "0") + ")"


def basis_vector(i: int) -> Multivector:
    return Multivector.blade(1 << i)


# --------------------------------------------------------------- dispatch


def _unpack(x) -> tuple[np.ndarray, str]:
    """Normalise an operand to jet layout (..., 16, N) and remember its kind."""
    if isinstance(x, Multivector):
        return x.c[:, None], "mv"
    a = np.asarray(x, dtype=float)
    if a.shape[-1] == NBLADES:
        return a[..., None], "plain"
    if a.ndim >= 2 and a.shape[-2] == NBLADES and a.shape[-1] in ORDER_OF:
        return a, "jet"
    raise ValueError(f"not a multivector array: shape {a.shape}")


def _pack(a: np.ndarray, kinds: tuple[str, ...]):
    if "jet" in kinds:
        return a
    if "plain" in kinds:
        return a[..., 0]
    return Multivector(a[..., 0])


def _bilinear(x, y, signs: np.ndarray):
    a, ka = _unpack(x)
    b, kb = _unpack(y)
    order = min(ORDER_OF[a.shape[-1]], ORDER_OF[b.shape[-1]])
    n = NCOEF[order]
    shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    aa = np.broadcast_to(a[..., :n], shape + (NBLADES, n)).reshape(-1, NBLADES, n)
    bb = np.broadcast_to(b[..., :n], shape + (NBLADES, n)).reshape(-1, NBLADES, n)
    out = kernels.blade_bilinear(aa, bb, signs, order).reshape(shape + (NBLADES, n))
    return _pack(out, (ka, kb))


def _diagonal(x, signs: np.ndarray):
    a, k = _unpack(x)
    return _pack(a * signs[:, None], (k,))


def _linear(x, matrix: np.ndarray):
    a, k = _unpack(x)
    return _pack(np.einsum("kj,...jn->...kn", matrix, a), (k,))


# ----------------------------------------------------------------- products


def gp(x, y):
    """Geometric product."""
    return _bilinear(x, y, CAYLEY)


def wedge(x, y):
    """Outer product: blade pairs with no common generator."""
    return _bilinear(x, y, WEDGE_SIGNS)


def lcontr(x, y):
    """Left contraction x _| y; nonzero only when x's blade is inside y's."""
    return _bilinear(x, y, LCONTR_SIGNS)


def rcontr(x, y):
    """Right contraction x |_ y; nonzero only when y's blade is inside x's."""
    return _bilinear(x, y, RCONTR_SIGNS)


def scalar_prod(x, y):
    """<reverse(x) y>_0, returned as a scalar (or scalar jet)."""
    out = _bilinear(x, y, SCALAR_SIGNS)
    if isinstance(out, Multivector):
        return float(out.c[0])
    return out[..., 0, :] if _unpack(x)[1] == "jet" or _unpack(y)[1] == "jet" else out[..., 0]


def comm(x, y):
    """Commutator xy - yx (no factor one half)."""
    return _bilinear(x, y, CAYLEY - CAYLEY.T)


def anticomm(x, y):
    return _bilinear(x, y, CAYLEY + CAYLEY.T)


def reverse(x):
    return _diagonal(x, REVERSE_SIGNS)


def involute(x):
    return _diagonal(x, INVOLUTE_SIGNS)


def lower(x):
    """Lower (or raise) every index of every blade with the metric."""
    return _diagonal(x, LOWER_SIGNS)


def grade(x, k: int):
    return _diagonal(x, (GRADE == k).astype(float))


def grades(x) -> set[int]:
    """Grades carrying a nonzero coefficient (any Taylor coefficient for jets)."""
    a, _ = _unpack(x)
    nz = np.any(a != 0.0, axis=tuple(i for i in range(a.ndim) if i != a.ndim - 2))
    return {int(GRADE[i]) for i in np.nonzero(nz)[0]}


def _hodge_matrix() -> np.ndarray:
    m = np.zeros((NBLADES, NBLADES))
    for j in range(NBLADES):
        k = j ^ PSEUDOSCALAR
        m[k, j] = REVERSE_SIGNS[j] * CAYLEY[j, PSEUDOSCALAR]
    return m


HODGE = _hodge_matrix()
HODGE_INV_SIGNS = np.array(
    [(-1.0) ** (p * (4 - p) + 1) for p in GRADE], dtype=float
)
# Applying the sign to the input grade p of the forward map.
HODGE_INV = HODGE * HODGE_INV_SIGNS[None, :]


def hodge(x):
    """Hodge dual: reverse(x) times the pseudoscalar e0123."""
    return _linear(x, HODGE)


def hodge_inv(x):
    """Inverse dual: (-1)^(p(4-p)+1) times the dual on each grade p."""
    return _linear(x, HODGE_INV)


def norm(x) -> float:
    a, _ = _unpack(x)
    return float(np.max(np.abs(a))) if a.size else 0.0


def as_array(x) -> np.ndarray:
    """Coefficient array of a Multivector or passthrough for arrays."""
    return x.c if isinstance(x, Multivector) else np.asarray(x, dtype=float)


I4 = Multivector.blade(PSEUDOSCALAR)
E = [basis_vector(i) for i in range(4)]

__all__ = [
    "BLADE_NAMES",
    "E",
    "I4",
    "Multivector",
    "anticomm",
    "as_array",
    "basis_vector",
    "comm",
    "gp",
    "grade",
    "grades",
    "hodge",
    "hodge_inv",
    "involute",
    "lcontr",
    "lower",
    "norm",
    "rcontr",
    "reverse",
    "scalar_prod",
    "wedge",
]
