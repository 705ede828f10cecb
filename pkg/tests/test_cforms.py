import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffgr import cforms, fields, jet, stal
from cliffgr.cforms import CliffordForm

GRID = [c for c in itertools.product((0.0, 0.25, 0.5, 1.0), repeat=2)]


def const_form(rng, p):
    n = len(cforms.multi_indices(p))
    return CliffordForm(p, rng.normal(size=(n, 16, 1)))


@pytest.fixture(scope="module")
def fx(schw10):
    rng = np.random.default_rng(17)
    x = schw10.point
    return {
        "w": schw10.omega_form(),
        "a0": fields.clifford_form(rng, 0, x, 3),
        "a1": fields.clifford_form(rng, 1, x, 3),
        "a2": fields.clifford_form(rng, 2, x, 3),
        "b1": fields.clifford_form(rng, 1, x, 3),
        "v1": fields.clifford_form(rng, 1, x, 3, {1}),
        "v2": fields.clifford_form(rng, 2, x, 3, {1}),
    }


class TestFormAlgebra:
    """Graded commutator and exterior derivative laws."""

    @settings(max_examples=60)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.integers(0, 4))
    def test_graded_antisymmetry(self, seed, p, q):
        if p + q > 4:
            return
        rng = np.random.default_rng(seed)
        assert cforms.antisymmetry_residual(const_form(rng, p), const_form(rng, q)) == 0.0

    def test_graded_jacobi(self):
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(200):
            p = int(rng.integers(0, 5))
            q = int(rng.integers(0, 5 - p))
            r = int(rng.integers(0, 5 - p - q))
            worst = max(worst, cforms.graded_jacobi_residual(const_form(rng, p), const_form(rng, q), const_form(rng, r)))
        assert worst < 1e-11

    def test_bivector_form_bracket_keeps_grade(self):
        rng = np.random.default_rng(4)
        grade = np.array([bin(i).count("1") for i in range(16)])
        biv = CliffordForm(1, rng.normal(size=(4, 16, 1)) * (grade == 2)[None, :, None])
        for r in range(5):
            A = CliffordForm(2, rng.normal(size=(6, 16, 1)) * (grade == r)[None, :, None])
            out = cforms.comm_form(biv, A).values()
            assert np.abs(out[:, grade != r]).max() < 1e-12

    def test_derivation(self, fx):
        assert cforms.derivation_residual(fx["a1"], fx["a2"]) < 1e-12
        assert cforms.derivation_residual(fx["a0"], fx["b1"]) < 1e-12

    def test_dd_zero(self, fx):
        assert cforms.d_form(cforms.d_form(fx["a1"])).norm() < 1e-13

    def test_wedge_associative(self, fx):
        a, b, c = fx["a0"], fx["a1"], fx["b1"]
        lhs = cforms.tensor_wedge(cforms.tensor_wedge(a, b), c)
        rhs = cforms.tensor_wedge(a, cforms.tensor_wedge(b, c))
        assert (lhs - rhs).norm() < 1e-11

    def test_bracket_product(self, fx):
        assert cforms.bracket_product_residual(fx["w"], fx["a1"], fx["a2"]) < 1e-12

    def test_degree_error(self, fx):
        with pytest.raises(cforms.DegreeError):
            cforms.tensor_wedge(fx["a2"], CliffordForm(3, np.zeros((4, 16, 1))))

    def test_frame_mismatch(self, fx):
        f = CliffordForm(1, fx["a1"].comps, cforms.FRAME)
        with pytest.raises(cforms.FrameMismatch):
            fx["a1"] + f

    def test_evaluate_antisymmetric(self, fx):
        u, v = np.array([1.0, 2.0, 0.0, -1.0]), np.array([0.5, 0.0, 1.0, 3.0])
        a = fx["a2"]
        np.testing.assert_allclose(a.evaluate(u, v), -a.evaluate(v, u), atol=1e-12)


class TestExteriorCovariantDifferential:
    """Exterior covariant differential on the Schwarzschild connection at r = 10."""

    def test_omega_square(self, fx):
        assert cforms.omega_square_residual(fx["w"]) < 1e-14

    def test_square_on_zero_forms(self, fx):
        t = cforms.excd_square_terms(fx["a0"], fx["w"])
        coeffs, res = cforms.fit_coefficients(t["D2"], [t["R"], t["dw"]], GRID)
        assert coeffs == (0.25, 0.25) and res < 1e-8
        assert t["D2"].norm() > 1e-3

    def test_square_on_one_forms(self, fx):
        t = cforms.excd_square_terms(fx["a1"], fx["w"])
        coeffs, res = cforms.fit_coefficients(t["D2"], [t["R"], t["w_dA"]], GRID)
        assert coeffs == (0.5, 0.5) and res < 1e-8
        printed = (t["D2"] - 0.25 * t["R"] - 0.25 * t["w_dA"]).norm()
        assert printed > 1e-3

    def test_product_rule_half(self, fx):
        assert cforms.excd_product_residual(fx["a1"], fx["a2"], fx["w"], 0.5) < 1e-12
        assert cforms.excd_product_residual(fx["a1"], fx["b1"], fx["w"], 0.5) < 1e-12

    def test_product_rule_printed_coefficient_fails(self, fx):
        assert cforms.excd_product_residual(fx["a1"], fx["a2"], fx["w"], 1.0) > 1e-3

    def test_product_display(self, fx):
        """(p+q)[w, A B] splits as (p+q)([w,A] B + (-1)^p A [w,B])."""
        a, b, w = fx["a1"], fx["b1"], fx["w"]
        lhs = 2.0 * cforms.comm_form(w, cforms.tensor_wedge(a, b))
        rhs = 2.0 * (cforms.tensor_wedge(cforms.comm_form(w, a), b) - cforms.tensor_wedge(a, cforms.comm_form(w, b)))
        assert (lhs - rhs).norm() < 1e-12

    @pytest.mark.parametrize("key", ["v1", "v2"])
    def test_cartan_relation(self, fx, schw10, key):
        assert cforms.cartan_relation_residual(fx[key], fx["w"], schw10.conn) < 1e-10

    def test_cartan_equal_for_one_forms(self, fx, schw10):
        d1 = cforms.excd(fx["v1"], fx["w"])
        d2 = cforms.cartan_excd(fx["v1"], schw10.conn)
        assert (d1 - d2).norm() < 1e-10

    def test_cartan_differs_for_two_forms(self, fx, schw10):
        d1 = cforms.excd(fx["v2"], fx["w"])
        d2 = cforms.cartan_excd(fx["v2"], schw10.conn)
        assert (d1 - d2).norm() > 1e-4

    @pytest.mark.parametrize("key, right_ok", [("a0", True), ("a1", False), ("a2", True)])
    def test_reassembly(self, fx, schw10, key, right_ok):
        r = cforms.reassembly_residuals(fx[key], schw10.omega_a, schw10.E, schw10.h, fx["w"])
        assert r["left"] < 1e-12
        assert (r["right_printed"] < 1e-12) == right_ok

    def test_torsion_free_soldering(self, schw10):
        assert cforms.excd(schw10.theta(), schw10.omega_form()).norm() < 1e-12

    def test_metric_compatibility(self, fx):
        """d <rev(A) B> = <rev(DA) B> + <rev(A) DB> for multivector 0-forms."""
        rng = np.random.default_rng(8)
        A = fx["a0"]
        B = fields.clifford_form(rng, 0, None, 3)
        w = fx["w"]
        dA, dB = cforms.absolute_diff(A, w), cforms.absolute_diff(B, w)
        s = stal.scalar_prod(A.comps[0], B.comps[0])  # (N,)
        lhs = jet.gradient(s)[..., 0]
        rhs = np.array([
            stal.scalar_prod(dA.comps[mu, :, :1], B.comps[0, :, :1])[0]
            + stal.scalar_prod(A.comps[0, :, :1], dB.comps[mu, :, :1])[0]
            for mu in range(4)
        ])
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)
        # the connection term alone is nonzero, so the cancellation is not trivial
        conn = 0.5 * cforms.comm_form(w, A)
        assert conn.norm() > 1e-4

    def test_frame_components(self, fx, schw10):
        f = cforms.to_frame(fx["a1"], schw10.E)
        E0 = schw10.E[..., 0]
        for a in range(4):
            np.testing.assert_allclose(f.values()[a], fx["a1"].evaluate(E0[a])[..., 0], atol=1e-12)
