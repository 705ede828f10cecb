"""Seeded random polynomial test fields evaluated as jets at a point."""
from __future__ import annotations

import numpy as np

from . import cforms, jet
from ._tables import DIM, GRADE, MONO_DEGREE, NBLADES


def polynomial(rng: np.random.Generator, x0, order: int, degree: int = 3, scale: float = 1.0) -> np.ndarray:
    """Jet at x0 of a random polynomial of the given degree in x - x0.

    The jet of a centred polynomial is its own coefficient list, so the
    coefficients are drawn directly; x0 only fixes where the field lives.
    """
    del x0
    return rng.normal(size=jet.NCOEF[order]) * scale * (MONO_DEGREE[: jet.NCOEF[order]] <= degree)


def multivector_field(rng, x0, order: int, grades=None) -> np.ndarray:
    """Random multivector jet (16, N) restricted to the given grades."""
    out = np.zeros((NBLADES, jet.NCOEF[order]))
    for i in range(NBLADES):
        if grades is None or GRADE[i] in grades:
            out[i] = polynomial(rng, x0, order, degree=2)
    return out


def clifford_form(rng, p: int, x0, order: int, grades=None) -> cforms.CliffordForm:
    """Random coordinate-indexed Clifford-valued p-form field."""
    n = len(cforms.multi_indices(p))
    comps = np.stack([multivector_field(rng, x0, order, grades) for _ in range(n)])
    return cforms.CliffordForm(p, comps)


def random_multivector(rng, grades=None) -> np.ndarray:
    """Plain coefficients (16,) with normal entries on the chosen grades."""
    out = rng.normal(size=NBLADES)
    if grades is not None:
        out = out * np.isin(GRADE, list(grades))
    return out
