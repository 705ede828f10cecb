import numpy as np
import pytest

from cliffgr import cforms, geometry, metricfile, stal
from cliffgr._tables import ETA

from . import symbolic


class TestTetrad:
    """Orthonormal co-frame and its inverse."""

    def test_eta(self, schwarzschild_snapshots):
        assert max(geometry.eta_residual(s) for s in schwarzschild_snapshots) < 1e-12

    def test_inverse_pair(self, schw10):
        h, E = schw10.h[..., 0], schw10.E[..., 0]
        np.testing.assert_allclose(h @ E.T, np.eye(4), atol=1e-14)

    def test_off_diagonal_chart(self):
        s = geometry.snapshot(metricfile.builtin("schwarzschild_qc"), [0.0, 6.0, -3.0, 4.0], 3)
        assert geometry.eta_residual(s) < 1e-12
        assert geometry.torsion(s).norm() < 1e-9

    def test_singular_point(self):
        spec = metricfile.builtin("schwarzschild")
        with pytest.raises(geometry.SingularPoint):
            geometry.snapshot(spec, [0.0, 2.0, 1.0, 0.0], 3)
        with pytest.raises(geometry.SingularPoint):
            geometry.snapshot(spec, [0.0, 5.0, 0.0, 0.0], 3)

    def test_signature(self):
        spec = metricfile.builtin("schwarzschild")
        with pytest.raises(geometry.SignatureError):
            geometry.snapshot(spec, [0.0, 1.5, 1.0, 0.0], 3)


class TestCurvature:
    """Schwarzschild curvature at 20 seeded points against closed forms and the symbolic oracle."""

    def test_torsion_free(self, schwarzschild_snapshots):
        assert max(geometry.torsion(s).norm() for s in schwarzschild_snapshots) < 1e-9

    def test_riemann_symmetries(self, schwarzschild_snapshots):
        assert max(geometry.riemann_symmetry_residual(s) for s in schwarzschild_snapshots) < 1e-10

    def test_cartan_structure(self, schwarzschild_snapshots):
        assert max(geometry.cartan2_residual(s) for s in schwarzschild_snapshots) < 1e-9

    def test_vacuum(self, schwarzschild_snapshots):
        assert max(np.abs(s.ricci[..., 0]).max() for s in schwarzschild_snapshots) < 1e-9
        assert max(abs(s.scalar) for s in schwarzschild_snapshots) < 1e-9

    def test_kretschmann_closed_form(self, schwarzschild_snapshots):
        K = symbolic.kretschmann_fn("schwarzschild")
        for s in schwarzschild_snapshots:
            want = K(*s.point)
            assert want == pytest.approx(48.0 / s.point[1] ** 6, rel=1e-14)
            assert geometry.kretschmann(s) == pytest.approx(want, rel=1e-8)

    def test_frw_ricci(self, frw):
        want = np.array(symbolic.ricci_fn("frw")(*frw.point), dtype=float)
        h = frw.h[..., 0]
        got = np.einsum("am,bn,ab->mn", h, h, frw.ricci[..., 0])
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_reassembly(self, schw10):
        assert geometry.riemann_reassembly_residual(schw10) < 1e-12

    def test_antisymmetry(self, schw10):
        assert geometry.antisymmetry_residual(schw10) < 1e-14

    def test_minkowski_zero(self, minkowski):
        assert not np.any(minkowski.omega_mu)
        assert not np.any(minkowski.R_mn)
        assert geometry.torsion(minkowski).norm() == 0.0


class TestBianchi:
    """Second Bianchi identity in form and cyclic bivector versions."""

    def test_form(self, schwarzschild_snapshots):
        assert max(geometry.bianchi_form_residual(s) for s in schwarzschild_snapshots) < 1e-8

    def test_cyclic(self, schwarzschild_snapshots):
        assert max(geometry.bianchi_cyclic_residual(s) for s in schwarzschild_snapshots) < 1e-8

    def test_literal_curvature_with_full_bracket(self, schw10):
        assert geometry.bianchi_form_residual(schw10, literal=True) < 1e-8
        assert geometry.bianchi_cyclic_residual(schw10, literal=True) < 1e-8


class TestConnection:
    """Connection bivector against Christoffel transport."""

    def test_frame_transport(self, schw10):
        assert geometry.frame_transport_residual(schw10) < 1e-12

    def test_commutator_of_derivatives(self, schw10):
        r = geometry.commutator_curvature_residuals(schw10)
        assert r["commutator"] < 1e-12
        assert r["riemann_half_commutator"] < 1e-12
        assert r["printed_sign"] > 1e-4

    def test_curvature_two_paths(self, schw10):
        w = schw10.omega_form()
        lit = schw10.curvature_form(literal=True)
        assert (cforms.excd(w, w) - lit.truncate(2)).norm() < 1e-9
        half = cforms.d_form(w) + 0.5 * cforms.comm_form(w, w)
        assert (half - lit.truncate(2)).norm() < 1e-9

    def test_curvature_bivector_grade(self, schw10):
        assert stal.grades(schw10.R_mn) <= {2}

    def test_lowering_signs(self):
        np.testing.assert_array_equal(stal.lower(stal.E[1].c), ETA[1] * stal.E[1].c)
