"""Numpy implementations of the hot kernels, used when the compiled core is absent."""
from __future__ import annotations

import numpy as np

from ._tables import NPAIRS, PAIR_LEFT, PAIR_RIGHT, pair_matrix


def jet_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Batched truncated product of jets; a and b have shape (M, >=N)."""
    p = NPAIRS[order]
    return (a[:, PAIR_LEFT[:p]] * b[:, PAIR_RIGHT[:p]]) @ pair_matrix(order)


_XOR = np.arange(16)[:, None] ^ np.arange(16)[None, :]  # [i, k] -> j with i ^ j == k


def blade_bilinear(
    a: np.ndarray, b: np.ndarray, signs: np.ndarray, order: int
) -> np.ndarray:
    """Batched signed blade product of multivector jets of shape (M, 16, >=N).

    out[k] = sum over (i, j) with i ^ j == k of signs[i, j] * a[i] * b[j].
    Blade sums run per jet-coefficient pair before the pairs are folded
    into the truncated product.
    """
    p = NPAIRS[order]
    A = a[:, :, PAIR_LEFT[:p]]  # (M, 16, P)
    B = b[:, :, PAIR_RIGHT[:p]]
    sg = signs[np.arange(16)[:, None], _XOR]  # [i, k] = signs[i, i ^ k]
    prods = np.einsum("mip,ik,mikp->mkp", A, sg, B[:, _XOR, :], optimize=True)
    return prods @ pair_matrix(order)
