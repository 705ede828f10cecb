"""Random-input suites for the algebra, the commutator laws and the Hodge dual.

Each suite draws its inputs from the generator it is given and returns the
largest residual it saw, so callers can compare against one tolerance.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from . import cforms, stal
from ._tables import DIM, ETA, GRADE, NBLADES

GRADE_MASKS = [(GRADE == k).astype(float) for k in range(DIM + 1)]


def random_homogeneous(rng: np.random.Generator, k: int, count: int) -> np.ndarray:
    """count random grade-k multivectors, shape (count, 16)."""
    return rng.standard_normal((count, NBLADES)) * GRADE_MASKS[k]


def _max(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def reorder_product(a: int, b: int) -> tuple[float, int]:
    """Product of two basis blades by bubble-sorting the generator word."""
    word = [i for i in range(DIM) if a >> i & 1] + [i for i in range(DIM) if b >> i & 1]
    sign = 1.0
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
    out = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
            sign *= ETA[g]
        else:
            out.append(g)
    return sign, sum(1 << g for g in out)


def blade_table_mismatches() -> int:
    """Blade pairs whose geometric product differs from the reordering route."""
    bad = 0
    eye = np.eye(NBLADES)
    for a in range(NBLADES):
        prod = stal.gp(eye[a], eye)
        for b in range(NBLADES):
            sign, mask = reorder_product(a, b)
            want = np.zeros(NBLADES)
            want[mask] = sign
            bad += int(not np.array_equal(prod[b], want))
    return bad


def vector_split_residual(rng, count: int, fault: bool = False) -> float:
    """a _| B = (aB - (-1)^s Ba)/2 and a ^ B = (aB + (-1)^s Ba)/2."""
    worst = 0.0
    a = random_homogeneous(rng, 1, count)
    for s in range(DIM + 1):
        B = random_homogeneous(rng, s, count)
        aB, Ba = stal.gp(a, B), stal.gp(B, a)
        sg = (-1.0) ** s
        lc = stal.lcontr(a, B)
        if fault:
            lc = -lc
        worst = max(worst, _max(lc - 0.5 * (aB - sg * Ba)))
        worst = max(worst, _max(stal.wedge(a, B) - 0.5 * (aB + sg * Ba)))
    return worst


def grade_expansion_residual(rng, count: int) -> float:
    """A_r B_s lives in grades |r-s|, |r-s|+2, ..., r+s."""
    worst = 0.0
    for r in range(DIM + 1):
        for s in range(DIM + 1):
            A, B = random_homogeneous(rng, r, count), random_homogeneous(rng, s, count)
            prod = stal.gp(A, B)
            allowed = sum(GRADE_MASKS[k] for k in range(abs(r - s), min(r + s, DIM) + 1, 2))
            worst = max(worst, _max(prod * (1.0 - allowed)))
    return worst


def equal_grade_contraction_residual(rng, count: int) -> float:
    """A_r _| B_r = A_r |_ B_r = rev(A_r) . B_r."""
    worst = 0.0
    for r in range(DIM + 1):
        A, B = random_homogeneous(rng, r, count), random_homogeneous(rng, r, count)
        sp = stal.scalar_prod(stal.reverse(A), B)
        lc, rc = stal.lcontr(A, B), stal.rcontr(A, B)
        worst = max(worst, _max(lc[:, 0] - sp), _max(rc[:, 0] - sp), _max(lc[:, 1:]), _max(rc[:, 1:]))
    return worst


def contraction_order_residual(rng, count: int) -> float:
    """A_r _| B_s = (-1)^{r(s-1)} B_s |_ A_r, and zero for r > s."""
    worst = 0.0
    for r in range(DIM + 1):
        for s in range(DIM + 1):
            A, B = random_homogeneous(rng, r, count), random_homogeneous(rng, s, count)
            lc = stal.lcontr(A, B)
            if r > s:
                worst = max(worst, _max(lc))
            else:
                worst = max(worst, _max(lc - (-1.0) ** (r * (s - 1)) * stal.rcontr(B, A)))
    return worst


def hodge_identity_residual(rng, count: int) -> float:
    """A_r ^ *B_s = (-1)^{r(s-1)} *(rev A_r _| B_s) and A_r _| *B_s = (-1)^{rs} *(rev A_r ^ B_s)."""
    worst = 0.0
    for r in range(DIM + 1):
        for s in range(DIM + 1):
            A, B = random_homogeneous(rng, r, count), random_homogeneous(rng, s, count)
            At = stal.reverse(A)
            if r <= s:
                lhs = stal.wedge(A, stal.hodge(B))
                rhs = (-1.0) ** (r * (s - 1)) * stal.hodge(stal.lcontr(At, B))
                worst = max(worst, _max(lhs - rhs))
            if r + s <= DIM:
                lhs = stal.lcontr(A, stal.hodge(B))
                rhs = (-1.0) ** (r * s) * stal.hodge(stal.wedge(At, B))
                worst = max(worst, _max(lhs - rhs))
    return worst


def hodge_inverse_residual(rng, count: int) -> float:
    A = rng.standard_normal((count, NBLADES))
    return max(_max(stal.hodge_inv(stal.hodge(A)) - A), _max(stal.hodge(stal.hodge_inv(A)) - A))


def bivector_grade_residual(rng, count: int) -> float:
    """[B, A_r] keeps grade r for a bivector B."""
    worst = 0.0
    biv = random_homogeneous(rng, 2, count)
    for r in range(DIM + 1):
        A = random_homogeneous(rng, r, count)
        worst = max(worst, _max(stal.comm(biv, A) * (1.0 - GRADE_MASKS[r])))
    return worst


def orthogonal_bivector_residual() -> float:
    """e_a e_b = e_a ^ e_b for a != b on the orthonormal frame."""
    eye = np.eye(NBLADES)
    worst = 0.0
    for a, b in combinations(range(DIM), 2):
        ea, eb = eye[1 << a], eye[1 << b]
        worst = max(worst, _max(stal.gp(ea, eb) - stal.wedge(ea, eb)))
    return worst


def _random_form(rng, p: int) -> cforms.CliffordForm:
    n = len(cforms.multi_indices(p))
    return cforms.CliffordForm(p, rng.standard_normal((n, NBLADES, 1)))


def graded_commutator_residuals(rng, count: int) -> dict[str, float]:
    """Graded antisymmetry and Jacobi on random constant Clifford-valued forms."""
    anti = jac = 0.0
    for _ in range(count):
        p = int(rng.integers(0, DIM + 1))
        q = int(rng.integers(0, DIM - p + 1))
        r = int(rng.integers(0, DIM - p - q + 1))
        a, b, c = _random_form(rng, p), _random_form(rng, q), _random_form(rng, r)
        anti = max(anti, cforms.antisymmetry_residual(a, b))
        jac = max(jac, cforms.graded_jacobi_residual(a, b, c))
    return {"graded_antisymmetry": anti, "graded_jacobi": jac}


def run_suite(rng: np.random.Generator, count: int, fault: bool = False) -> dict[str, float]:
    """All algebra residuals keyed by check name (blade mismatches as a count)."""
    out = {
        "blade_table_mismatches": float(blade_table_mismatches()),
        "vector_split": vector_split_residual(rng, count, fault),
        "grade_expansion": grade_expansion_residual(rng, count),
        "equal_grade_contraction": equal_grade_contraction_residual(rng, count),
        "contraction_order": contraction_order_residual(rng, count),
        "hodge_identities": hodge_identity_residual(rng, count),
        "hodge_inverse": hodge_inverse_residual(rng, count),
        "bivector_commutator_grade": bivector_grade_residual(rng, count),
        "orthogonal_bivector": orthogonal_bivector_residual(),
    }
    out.update(graded_commutator_residuals(rng, max(1, count // 5)))
    return out


__all__ = [
    "blade_table_mismatches",
    "bivector_grade_residual",
    "contraction_order_residual",
    "equal_grade_contraction_residual",
    "grade_expansion_residual",
    "graded_commutator_residuals",
    "hodge_identity_residual",
    "hodge_inverse_residual",
    "orthogonal_bivector_residual",
    "random_homogeneous",
    "reorder_product",
    "run_suite",
    "vector_split_residual",
]
