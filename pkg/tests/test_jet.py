import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cliffgr import _purepy, jet, kernels
from cliffgr._tables import CAYLEY, NCOEF, WEDGE_SIGNS

ORDER = 3
N = NCOEF[ORDER]
jets = arrays(np.float64, N, elements=st.floats(-2, 2, allow_nan=False))


def positive(a):
    out = a.copy()
    out[0] = 1.0 + abs(out[0])
    return out


class TestLayout:
    """Coefficient counts and seed jets."""

    def test_counts(self):
        assert NCOEF == [1, 5, 15, 35, 70]

    def test_variable(self):
        v = jet.variable(2.5, 2, ORDER)
        assert v[0] == 2.5
        np.testing.assert_array_equal(jet.gradient(v)[..., 0], [0, 0, 1, 0])
        assert not np.any(jet.gradient(jet.gradient(v)))

    def test_order_of_rejects(self):
        with pytest.raises(ValueError):
            jet.order_of(np.zeros(7))


class TestArithmetic:
    """Field laws of truncated Taylor arithmetic."""

    @given(jets, jets, jets)
    def test_mul_associative_commutative(self, a, b, c):
        np.testing.assert_allclose(jet.mul(a, b), jet.mul(b, a), atol=1e-12)
        np.testing.assert_allclose(jet.mul(jet.mul(a, b), c), jet.mul(a, jet.mul(b, c)), atol=1e-10)

    @given(jets)
    def test_recip(self, a):
        a = positive(a)
        np.testing.assert_allclose(jet.mul(a, jet.recip(a)), jet.constant(1.0, ORDER), atol=1e-9)

    @given(jets)
    def test_exp_log(self, a):
        a = positive(a)
        np.testing.assert_allclose(jet.exp(jet.log(a)), a, atol=1e-9)

    @given(jets)
    def test_sqrt(self, a):
        a = positive(a)
        s = jet.sqrt(a)
        np.testing.assert_allclose(jet.mul(s, s), a, atol=1e-9)

    @given(jets, st.integers(0, 5))
    def test_powi(self, a, n):
        want = jet.constant(1.0, ORDER)
        for _ in range(n):
            want = jet.mul(want, a)
        np.testing.assert_allclose(jet.powi(a, n), want, atol=1e-8 * (1 + np.abs(want).max()))

    @given(jets)
    def test_derivative_commutes(self, a):
        np.testing.assert_allclose(jet.deriv(jet.deriv(a, 0), 1), jet.deriv(jet.deriv(a, 1), 0), atol=1e-12)

    @settings(max_examples=30)
    @given(arrays(np.float64, (3, 3, N), elements=st.floats(-1, 1, allow_nan=False)))
    def test_inverse(self, m):
        m = m.copy()
        m[..., 0] += 4.0 * np.eye(3)
        ident = jet.matmul(m, jet.inverse(m))
        want = np.zeros_like(m)
        want[..., 0] = np.eye(3)
        np.testing.assert_allclose(ident, want, atol=1e-10)


class TestKernels:
    """Compiled kernels and the numpy fallback give the same numbers."""

    def test_backend_name(self):
        assert kernels.BACKEND in ("compiled", "python")

    @pytest.mark.parametrize("order", [0, 1, 2, 3, 4])
    def test_jet_mul(self, order):
        rng = np.random.default_rng(order)
        n = NCOEF[order]
        a, b = rng.normal(size=(7, n)), rng.normal(size=(7, n))
        np.testing.assert_allclose(kernels.jet_mul(a, b, order), _purepy.jet_mul(a, b, order), atol=1e-13)

    @pytest.mark.parametrize("signs", [CAYLEY, WEDGE_SIGNS, CAYLEY - CAYLEY.T])
    @pytest.mark.parametrize("order", [0, 2, 3])
    def test_blade_bilinear(self, signs, order):
        rng = np.random.default_rng(11)
        n = NCOEF[order]
        a, b = rng.normal(size=(5, 16, n)), rng.normal(size=(5, 16, n))
        np.testing.assert_allclose(
            kernels.blade_bilinear(a, b, signs, order), _purepy.blade_bilinear(a, b, signs, order), atol=1e-12
        )

    def test_fallback_value_is_plain_product(self):
        rng = np.random.default_rng(2)
        a, b = rng.normal(size=(3, 16, 1)), rng.normal(size=(3, 16, 1))
        out = _purepy.blade_bilinear(a, b, CAYLEY, 0)[..., 0]
        want = np.zeros((3, 16))
        for i in range(16):
            for j in range(16):
                want[:, i ^ j] += CAYLEY[i, j] * a[:, i, 0] * b[:, j, 0]
        np.testing.assert_allclose(out, want, atol=1e-12)
