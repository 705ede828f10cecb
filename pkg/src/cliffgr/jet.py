"""Truncated multivariate Taylor jets in the four coordinates.

A jet array has its coefficients on the last axis. Coefficients are the
normalised Taylor coefficients c_a = (d^a f)(x0) / a!, ordered by total
degree, so an order-k jet is the slice [..., :ncoef(k)] of any higher one.
The order is read off the length of the last axis.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from . import kernels
from ._tables import (
    DIM,
    MAX_ORDER,
    MONO_FACTORIAL,
    MONO_INDEX,
    NCOEF,
    ORDER_OF,
    derivative_map,
)

DEFAULT_ORDER = 3


class DomainError(ValueError):
    """A function was evaluated outside its real domain."""


def order_of(a: np.ndarray) -> int:
    try:
        return ORDER_OF[a.shape[-1]]
    except KeyError:
        raise ValueError(f"not a jet array: last axis {a.shape[-1]}") from None


def constant(x, order: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (NCOEF[order],))
    out[..., 0] = x
    return out


def variable(value: float, axis: int, order: int) -> np.ndarray:
    """Jet of the coordinate function x_axis expanded about `value`."""
    out = constant(value, order)
    if order >= 1:
        e = [0] * DIM
        e[axis] = 1
        out[..., MONO_INDEX[tuple(e)]] = 1.0
    return out


def truncate(a: np.ndarray, order: int) -> np.ndarray:
    return a[..., : NCOEF[order]]


def pad(a: np.ndarray, order: int) -> np.ndarray:
    """Extend with zero coefficients; only meaningful for exact constants."""
    n = a.shape[-1]
    if n >= NCOEF[order]:
        return truncate(a, order)
    out = np.zeros(a.shape[:-1] + (NCOEF[order],))
    out[..., :n] = a
    return out


def value(a: np.ndarray) -> np.ndarray:
    return a[..., 0]


def mul(a, b) -> np.ndarray:
    """Truncated product with broadcasting over leading axes."""
    if np.ndim(a) == 0:
        return a * np.asarray(b, dtype=float)
    if np.ndim(b) == 0:
        return np.asarray(a, dtype=float) * b
    order = min(order_of(a), order_of(b))
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    n = NCOEF[order]
    aa = np.broadcast_to(a[..., :n], shape + (n,)).reshape(-1, n)
    bb = np.broadcast_to(b[..., :n], shape + (n,)).reshape(-1, n)
    return kernels.jet_mul(aa, bb, order).reshape(shape + (n,))


def add(a, b) -> np.ndarray:
    if np.ndim(a) == 0 or np.ndim(b) == 0:
        if np.ndim(a) == 0:
            a, b = b, a
        out = np.array(a, dtype=float)
        out[..., 0] += b
        return out
    order = min(order_of(a), order_of(b))
    return truncate(a, order) + truncate(b, order)


def sub(a, b) -> np.ndarray:
    return add(a, -b if np.ndim(b) else -float(b))


def _powers(h: np.ndarray, order: int) -> list[np.ndarray]:
    """h**0 .. h**order for a jet h with zero constant term."""
    out = [constant(np.ones(h.shape[:-1]), order), h]
    for _ in range(2, order + 1):
        out.append(mul(out[-1], h))
    return out[: order + 1]


def compose(a: np.ndarray, derivs: Sequence[np.ndarray]) -> np.ndarray:
    """f(a) given the derivatives f^(k)(a0) for k = 0..order."""
    order = order_of(a)
    h = a.copy()
    h[..., 0] = 0.0
    pw = _powers(h, order)
    out = np.zeros_like(a)
    for k in range(order + 1):
        out = out + (np.asarray(derivs[k])[..., None] / math.factorial(k)) * pw[k]
    return out


def _derivs(a: np.ndarray, fn: Callable[[np.ndarray, int], np.ndarray]):
    x0 = value(a)
    return [fn(x0, k) for k in range(order_of(a) + 1)]


def recip(a: np.ndarray) -> np.ndarray:
    x0 = value(a)
    if np.any(x0 == 0.0):
        raise ZeroDivisionError("division by a jet with zero value")
    return compose(a, _derivs(a, lambda x, k: (-1.0) ** k * math.factorial(k) / x ** (k + 1)))


def div(a, b) -> np.ndarray:
    if np.ndim(b) == 0:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return np.asarray(a, dtype=float) / b
    return mul(a, recip(b))


def _falling(p: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= p - i
    return out


def power_real(a: np.ndarray, p: float) -> np.ndarray:
    """a**p for a positive base and real p."""
    x0 = value(a)
    if np.any(x0 <= 0.0):
        raise DomainError("real power of a non-positive base")
    return compose(a, _derivs(a, lambda x, k: _falling(p, k) * x ** (p - k)))


def sqrt(a: np.ndarray) -> np.ndarray:
    if np.any(value(a) < 0.0):
        raise DomainError("sqrt of a negative value")
    if np.any(value(a) == 0.0) and order_of(a) > 0:
        raise DomainError("sqrt is not differentiable at zero")
    if order_of(a) == 0:
        return np.sqrt(a)
    return power_real(a, 0.5)


def powi(a: np.ndarray, n: int) -> np.ndarray:
    """Integer power by repeated multiplication."""
    if n < 0:
        return recip(powi(a, -n))
    out = constant(np.ones(a.shape[:-1]), order_of(a))
    base = a
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def exp(a: np.ndarray) -> np.ndarray:
    return compose(a, _derivs(a, lambda x, k: np.exp(x)))


def log(a: np.ndarray) -> np.ndarray:
    if np.any(value(a) <= 0.0):
        raise DomainError("log of a non-positive value")

    def f(x, k):
        if k == 0:
            return np.log(x)
        return (-1.0) ** (k - 1) * math.factorial(k - 1) / x**k

    return compose(a, _derivs(a, f))


def sin(a: np.ndarray) -> np.ndarray:
    cyc = (np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))
    return compose(a, _derivs(a, lambda x, k: cyc[k % 4](x)))


def cos(a: np.ndarray) -> np.ndarray:
    cyc = (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)
    return compose(a, _derivs(a, lambda x, k: cyc[k % 4](x)))


def sinh(a: np.ndarray) -> np.ndarray:
    return compose(a, _derivs(a, lambda x, k: np.sinh(x) if k % 2 == 0 else np.cosh(x)))


def cosh(a: np.ndarray) -> np.ndarray:
    return compose(a, _derivs(a, lambda x, k: np.cosh(x) if k % 2 == 0 else np.sinh(x)))


def tan(a: np.ndarray) -> np.ndarray:
    c = cos(a)
    if np.any(np.abs(value(c)) < 1e-300):
        raise DomainError("tan at a pole")
    return div(sin(a), c)


def absolute(a: np.ndarray) -> np.ndarray:
    x0 = value(a)
    if order_of(a) > 0 and np.any(x0 == 0.0):
        raise DomainError("abs is not differentiable at zero")
    return np.sign(x0)[..., None] * a


def deriv(a: np.ndarray, axis: int) -> np.ndarray:
    """Partial derivative along coordinate `axis`; the order drops by one."""
    order = order_of(a)
    if order == 0:
        raise ValueError("cannot differentiate an order-0 jet")
    src, fac = derivative_map(order, axis)
    return a[..., src] * fac


def gradient(a: np.ndarray) -> np.ndarray:
    """All four partials stacked on a new leading axis."""
    return np.stack([deriv(a, i) for i in range(DIM)])


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of jet matrices of shape (n, k, N) and (k, m, N)."""
    return mul(a[:, :, None, :], b[None, :, :, :]).sum(axis=1)


def inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a jet matrix by the Neumann series about its value."""
    order = order_of(m)
    m0inv = np.linalg.inv(value(m))
    nil = m.copy()
    nil[..., 0] = 0.0
    step = -np.einsum("ij,jkn->ikn", m0inv, nil)
    base = pad(m0inv[..., None], order)
    out = base.copy()
    term = base
    for _ in range(order):
        term = matmul(step, term)
        out = out + term
    return out


def derivative_tensor(a: np.ndarray, multi_index: Sequence[int]) -> np.ndarray:
    """Plain partial derivative d^alpha f at the expansion point."""
    alpha = [0] * DIM
    for i in multi_index:
        alpha[i] += 1
    k = MONO_INDEX[tuple(alpha)]
    return a[..., k] * MONO_FACTORIAL[k]


class Jet:
    """Scalar jet with arithmetic operators, used by expression evaluation."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def const(cls, x: float, order: int = DEFAULT_ORDER) -> "Jet":
        return cls(constant(x, order))

    @classmethod
    def var(cls, x: float, axis: int, order: int = DEFAULT_ORDER) -> "Jet":
        return cls(variable(x, axis, order))

    @property
    def order(self) -> int:
        return order_of(self.c)

    @property
    def value(self) -> float:
        return float(self.c[0])

    @property
    def grad(self) -> np.ndarray:
        return np.array([derivative_tensor(self.c, (i,)) for i in range(DIM)])

    @property
    def hess(self) -> np.ndarray:
        return np.array(
            [[derivative_tensor(self.c, (i, j)) for j in range(DIM)] for i in range(DIM)]
        )

    @property
    def third(self) -> np.ndarray:
        out = np.empty((DIM,) * 3)
        for i in range(DIM):
            for j in range(DIM):
                for k in range(DIM):
                    out[i, j, k] = derivative_tensor(self.c, (i, j, k))
        return out

    def _wrap(self, other):
        return other.c if isinstance(other, Jet) else float(other)

    def __add__(self, o):
        return Jet(add(self.c, self._wrap(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Jet(sub(self.c, self._wrap(o)))

    def __rsub__(self, o):
        return Jet(sub(self._wrap(o), self.c)) if isinstance(o, Jet) else Jet(add(-self.c, float(o)))

    def __mul__(self, o):
        return Jet(mul(self.c, self._wrap(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Jet(div(self.c, self._wrap(o)))

    def __rtruediv__(self, o):
        return Jet(float(o) * recip(self.c))

    def __neg__(self):
        return Jet(-self.c)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, value={self.value!r})"


__all__ = [
    "DEFAULT_ORDER",
    "MAX_ORDER",
    "DomainError",
    "Jet",
    "absolute",
    "add",
    "compose",
    "constant",
    "cos",
    "cosh",
    "deriv",
    "derivative_tensor",
    "div",
    "exp",
    "gradient",
    "inverse",
    "log",
    "matmul",
    "mul",
    "order_of",
    "pad",
    "power_real",
    "powi",
    "recip",
    "sin",
    "sinh",
    "sqrt",
    "sub",
    "tan",
    "truncate",
    "value",
    "variable",
]
