import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cliffgr import stal
from cliffgr._tables import GRADE

from . import oracles
from .oracles import blade

coeff = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
mv = arrays(np.float64, 16, elements=coeff)


def homogeneous(k):
    return mv.map(lambda a: a * (GRADE == k))


I = blade(0, 1, 2, 3)


class TestBladeTable:
    """Geometric product of basis blades against the transposition oracle."""

    def test_all_pairs(self):
        eye = np.eye(16)
        mismatches = 0
        for a in range(16):
            for b in range(16):
                s, m = oracles.blade_product(a, b)
                want = np.zeros(16)
                want[m] = s
                mismatches += not np.array_equal(stal.gp(eye[a], eye[b]), want)
        assert mismatches == 0

    def test_generator_squares(self):
        assert stal.gp(blade(0), blade(0))[0] == 1.0
        assert stal.gp(blade(1), blade(1))[0] == -1.0

    def test_pseudoscalar_square(self):
        np.testing.assert_array_equal(stal.gp(I, I), -blade())

    def test_multivector_class(self):
        e0, e1 = stal.E[0], stal.E[1]
        assert isinstance(e0 * e1, stal.Multivector)
        np.testing.assert_array_equal((e0 * e1).c, blade(0, 1))


class TestProducts:
    """Worked examples for wedge, contraction and scalar product."""

    def test_wedge(self):
        np.testing.assert_array_equal(stal.wedge(blade(0), blade(1)), blade(0, 1))
        np.testing.assert_array_equal(stal.wedge(blade(0), blade(0)), np.zeros(16))
        np.testing.assert_array_equal(stal.wedge(blade(0, 1), blade(2, 3)), I)

    def test_scalar_prod(self):
        assert stal.scalar_prod(blade(0), blade(0)) == 1.0
        assert stal.scalar_prod(blade(0, 1), blade(0, 1)) == -1.0
        assert stal.scalar_prod(blade(0), blade(1, 2)) == 0.0

    def test_scalar_prod_gram(self):
        rng = np.random.default_rng(5)
        u = [rng.normal(size=4) for _ in range(2)]
        v = [rng.normal(size=4) for _ in range(2)]

        def vec(c):
            out = np.zeros(16)
            for i in range(4):
                out[1 << i] = c[i]
            return out

        U = stal.wedge(vec(u[0]), vec(u[1]))
        V = stal.wedge(vec(v[0]), vec(v[1]))
        assert stal.scalar_prod(U, V) == pytest.approx(oracles.gram_scalar(u, v), abs=1e-12)

    def test_lcontr(self):
        np.testing.assert_array_equal(stal.lcontr(blade(0), blade(0, 1)), blade(1))
        np.testing.assert_array_equal(stal.lcontr(blade(0, 1), blade(0)), np.zeros(16))
        B = np.arange(16.0)
        np.testing.assert_array_equal(stal.lcontr(blade(), B), B)

    def test_reverse(self):
        np.testing.assert_array_equal(stal.reverse(blade(0, 1)), -blade(0, 1))
        np.testing.assert_array_equal(stal.reverse(blade(0)), blade(0))
        np.testing.assert_array_equal(stal.reverse(I), I)

    def test_grade(self):
        A = blade() + blade(0) + blade(0, 1)
        np.testing.assert_array_equal(stal.grade(A, 1), blade(0))
        np.testing.assert_array_equal(stal.grade(stal.gp(blade(0), blade(1)), 2), blade(0, 1))

    def test_hodge_examples(self):
        np.testing.assert_array_equal(stal.hodge(blade()), I)
        np.testing.assert_array_equal(stal.hodge(I), -blade())
        np.testing.assert_array_equal(stal.hodge(blade(0)), blade(1, 2, 3))

    def test_comm_examples(self):
        c = stal.comm(blade(0, 1), blade(1, 2))
        assert stal.grades(c) == {2}
        assert np.count_nonzero(c) == 1 and c[0b0101] != 0
        A = np.arange(16.0)
        np.testing.assert_array_equal(stal.comm(A, A), np.zeros(16))
        np.testing.assert_array_equal(stal.comm(blade(), A), np.zeros(16))


class TestAlgebraProperties:
    """Random-input laws of the algebra."""

    @given(mv, mv, mv)
    def test_associative(self, a, b, c):
        lhs = stal.gp(stal.gp(a, b), c)
        rhs = stal.gp(a, stal.gp(b, c))
        assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(lhs).max()))

    @given(mv, mv)
    def test_matches_oracle(self, a, b):
        assert np.allclose(stal.gp(a, b), oracles.gp(a, b), atol=1e-10)

    @given(st.integers(0, 4), st.data())
    def test_vector_split(self, s, data):
        a = data.draw(homogeneous(1))
        B = data.draw(homogeneous(s))
        aB, Ba = stal.gp(a, B), stal.gp(B, a)
        sg = (-1.0) ** s
        assert np.allclose(stal.lcontr(a, B), 0.5 * (aB - sg * Ba), atol=1e-10)
        assert np.allclose(stal.wedge(a, B), 0.5 * (aB + sg * Ba), atol=1e-10)

    @given(st.integers(0, 4), st.integers(0, 4), st.data())
    def test_grade_expansion(self, r, s, data):
        A, B = data.draw(homogeneous(r)), data.draw(homogeneous(s))
        prod = stal.gp(A, B)
        allowed = sum(oracles.grade(prod, k) for k in range(abs(r - s), min(r + s, 4) + 1, 2))
        assert np.allclose(prod, allowed, atol=1e-10)

    @given(st.integers(0, 4), st.integers(0, 4), st.data())
    def test_contraction_order(self, r, s, data):
        A, B = data.draw(homogeneous(r)), data.draw(homogeneous(s))
        lc = stal.lcontr(A, B)
        if r > s:
            assert not np.any(lc)
        else:
            assert np.allclose(lc, (-1.0) ** (r * (s - 1)) * stal.rcontr(B, A), atol=1e-10)

    @given(st.integers(0, 4), st.data())
    def test_equal_grade_contraction(self, r, data):
        A, B = data.draw(homogeneous(r)), data.draw(homogeneous(r))
        sp = stal.scalar_prod(stal.reverse(A), B)
        assert stal.lcontr(A, B)[0] == pytest.approx(sp, abs=1e-9)
        assert stal.rcontr(A, B)[0] == pytest.approx(sp, abs=1e-9)

    @given(st.integers(0, 4), st.integers(0, 4), st.data())
    def test_hodge_identities(self, r, s, data):
        A, B = data.draw(homogeneous(r)), data.draw(homogeneous(s))
        At = stal.reverse(A)
        if r <= s:
            lhs = stal.wedge(A, stal.hodge(B))
            rhs = (-1.0) ** (r * (s - 1)) * stal.hodge(stal.lcontr(At, B))
            assert np.allclose(lhs, rhs, atol=1e-9)
        if r + s <= 4:
            lhs = stal.lcontr(A, stal.hodge(B))
            rhs = (-1.0) ** (r * s) * stal.hodge(stal.wedge(At, B))
            assert np.allclose(lhs, rhs, atol=1e-9)

    @given(mv)
    def test_hodge_inverse(self, a):
        assert np.allclose(stal.hodge_inv(stal.hodge(a)), a, atol=1e-12)

    @given(mv)
    def test_grade_completeness(self, a):
        np.testing.assert_allclose(sum(stal.grade(a, k) for k in range(5)), a)

    @given(st.integers(0, 4), st.data())
    def test_bivector_commutator_keeps_grade(self, r, data):
        B, A = data.draw(homogeneous(2)), data.draw(homogeneous(r))
        assert stal.grades(stal.comm(B, A)) <= {r}

    @given(mv, mv)
    @settings(max_examples=50)
    def test_reverse_antiautomorphism(self, a, b):
        assert np.allclose(stal.reverse(stal.gp(a, b)), stal.gp(stal.reverse(b), stal.reverse(a)), atol=1e-9)


class TestJetLayout:
    """Products on multivector jets act coefficientwise on the value."""

    def test_value_slice(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(16, 15))
        b = rng.normal(size=(16, 15))
        np.testing.assert_allclose(stal.gp(a, b)[:, 0], stal.gp(a[:, 0], b[:, 0]), atol=1e-12)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            stal.gp(np.zeros(5), np.zeros(16))
