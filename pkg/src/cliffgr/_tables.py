"""Precomputed index tables shared by the algebra and the jet kernels.

Blades of Cl(1,3) are indexed by a 4-bit mask, bit i standing for the
generator e_i. Jets are truncated Taylor polynomials in four variables
whose monomials are ordered by total degree.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb

import numpy as np

DIM = 4
NBLADES = 16
MAX_ORDER = 4

# Metric signature (+,-,-,-).
ETA = np.array([1.0, -1.0, -1.0, -1.0])


def popcount(x: int) -> int:
    return bin(x).count("1")


GRADE = np.array([popcount(i) for i in range(NBLADES)], dtype=np.int64)

# Debug names; bit order within a name is ascending.
BLADE_NAMES = [
    "1" if i == 0 else "e" + "".join(str(b) for b in range(DIM) if i >> b & 1)
    for i in range(NBLADES)
]


def _blade_sign(a: int, b: int) -> float:
    """Sign of e_A e_B relative to e_{A xor B}, including metric factors."""
    # Count transpositions needed to move each generator of b past those of a.
    swaps = 0
    x = a >> 1
    while x:
        swaps += popcount(x & b)
        x >>= 1
    sign = -1.0 if swaps & 1 else 1.0
    common = a & b
    for i in range(DIM):
        if common >> i & 1:
            sign *= ETA[i]
    return sign


CAYLEY = np.array(
    [[_blade_sign(a, b) for b in range(NBLADES)] for a in range(NBLADES)]
)
PRODUCT_INDEX = np.array(
    [[a ^ b for b in range(NBLADES)] for a in range(NBLADES)], dtype=np.int64
)

_A = np.arange(NBLADES)[:, None]
_B = np.arange(NBLADES)[None, :]
WEDGE_SIGNS = np.where((_A & _B) == 0, CAYLEY, 0.0)
LCONTR_SIGNS = np.where((_A & _B) == _A, CAYLEY, 0.0)
RCONTR_SIGNS = np.where((_A & _B) == _B, CAYLEY, 0.0)

REVERSE_SIGNS = np.array(
    [(-1.0) ** (k * (k - 1) // 2) for k in GRADE], dtype=float
)
INVOLUTE_SIGNS = np.array([(-1.0) ** k for k in GRADE], dtype=float)
# Scalar product <reverse(A) B>_0 only pairs a blade with itself.
SCALAR_SIGNS = np.diag(REVERSE_SIGNS * np.diag(CAYLEY))

# Product of eta over the bits of a blade, used to raise or lower all indices.
LOWER_SIGNS = np.array(
    [np.prod([ETA[i] for i in range(DIM) if m >> i & 1]) for m in range(NBLADES)]
)


def sign_tensor(signs: np.ndarray) -> np.ndarray:
    """Dense (16, 16, 16) tensor T with out_k = sum_ij T_ijk a_i b_j."""
    t = np.zeros((NBLADES, NBLADES, NBLADES))
    for a in range(NBLADES):
        for b in range(NBLADES):
            t[a, b, a ^ b] = signs[a, b]
    return t


# ---------------------------------------------------------------- jets


def ncoef(order: int) -> int:
    return comb(order + DIM, DIM)


NCOEF = [ncoef(k) for k in range(MAX_ORDER + 1)]
ORDER_OF = {n: k for k, n in enumerate(NCOEF)}

MONOMIALS: list[tuple[int, int, int, int]] = sorted(
    (a for a in product(range(MAX_ORDER + 1), repeat=DIM) if sum(a) <= MAX_ORDER),
    key=lambda a: (sum(a), tuple(-x for x in a)),
)
MONO_INDEX = {a: i for i, a in enumerate(MONOMIALS)}
MONO_DEGREE = np.array([sum(a) for a in MONOMIALS], dtype=np.int64)
def _factorial_weight(a: tuple[int, ...]) -> float:
    out = 1.0
    for x in a:
        for k in range(2, x + 1):
            out *= k
    return out


MONO_FACTORIAL = np.array([_factorial_weight(a) for a in MONOMIALS])


def _build_pairs():
    pairs = []
    for i, a in enumerate(MONOMIALS):
        for j, b in enumerate(MONOMIALS):
            s = tuple(x + y for x, y in zip(a, b))
            if sum(s) <= MAX_ORDER:
                pairs.append((sum(s), i, j, MONO_INDEX[s]))
    pairs.sort()
    deg = np.array([p[0] for p in pairs], dtype=np.int64)
    left = np.array([p[1] for p in pairs], dtype=np.int64)
    right = np.array([p[2] for p in pairs], dtype=np.int64)
    res = np.array([p[3] for p in pairs], dtype=np.int64)
    counts = [int(np.sum(deg <= k)) for k in range(MAX_ORDER + 1)]
    return left, right, res, counts


PAIR_LEFT, PAIR_RIGHT, PAIR_RESULT, NPAIRS = _build_pairs()


@lru_cache(maxsize=None)
def pair_matrix(order: int) -> np.ndarray:
    """0/1 matrix scattering pair products onto result coefficients."""
    p = NPAIRS[order]
    s = np.zeros((p, NCOEF[order]))
    s[np.arange(p), PAIR_RESULT[:p]] = 1.0
    return s


@lru_cache(maxsize=None)
def derivative_map(order: int, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Source indices and factors for d/dx_axis of an order-`order` jet."""
    n = NCOEF[order - 1]
    src = np.empty(n, dtype=np.int64)
    fac = np.empty(n)
    for k in range(n):
        beta = list(MONOMIALS[k])
        fac[k] = beta[axis] + 1
        beta[axis] += 1
        src[k] = MONO_INDEX[tuple(beta)]
    return src, fac
