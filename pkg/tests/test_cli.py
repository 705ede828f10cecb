import json
import subprocess
import sys

import pytest

from cliffgr import report
from cliffgr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    """The per-point battery command."""

    def test_minkowski_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--metric", "minkowski", "--points", "2", "--no-timestamp")
        assert code == 0
        d = report.loads(out)
        assert d["summary"]["failed"] == 0
        assert d["metadata"]["backend"] in ("compiled", "python")
        assert d["tables"]["gauge_current"]["selected_coefficient"] is None

    def test_coefficient_selected(self, capsys):
        _, out, _ = run(capsys, "check", "--metric", "schwarzschild", "--points", "1", "--no-timestamp")
        assert json.loads(out)["tables"]["gauge_current"]["selected_coefficient"] == 1.0

    def test_deterministic(self, capsys):
        args = ("check", "--metric", "schwarzschild", "--points", "2", "--seed", "9", "--no-timestamp")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b

    def test_frw_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--metric", "frw", "--points", "1", "--no-timestamp")
        d = json.loads(out)
        assert code == 0, [c for c in d["checks"] if not c["pass"]]
        assert not any(c["name"] == "vacuum_identity" for c in d["checks"])

    def test_tolerance_override_fails(self, capsys, tmp_path):
        dest = tmp_path / "r.json"
        code, out, _ = run(capsys, "check", "--metric", "schwarzschild", "--points", "1",
                           "--tol", "second=0", "--json", str(dest))
        assert code == 1
        assert "FAIL" in out
        assert report.loads(dest.read_text())["summary"]["failed"] > 0


class TestIdentities:
    """Algebra suite with and without an injected fault."""

    def test_clean(self, capsys):
        code, out, _ = run(capsys, "identities", "--points", "100", "--no-timestamp")
        assert code == 0
        assert len(json.loads(out)["checks"]) == 11

    def test_fault(self, capsys):
        code, out, _ = run(capsys, "identities", "--points", "50", "--inject-fault")
        assert code == 1
        failed = [c["name"] for c in json.loads(out)["checks"] if not c["pass"]]
        assert failed == ["vector_split"]


class TestEnergy:
    """Inertial mass command."""

    def test_schwarzschild(self, capsys):
        code, out, _ = run(capsys, "energy", "--metric", "schwarzschild_qc")
        d = json.loads(out)
        assert code == 0
        assert abs(d["tables"]["mass"]["richardson_limit"] - 1.0) < 1e-2
        assert d["checks"][0]["name"] == "mass_limit"

    def test_minkowski(self, capsys):
        code, out, _ = run(capsys, "energy", "--metric", "minkowski_qc")
        assert code == 0 and json.loads(out)["checks"][0]["name"] == "mass_flat"

    def test_not_reference(self, capsys):
        code, out, _ = run(capsys, "energy", "--metric", "isotropic_qc")
        d = json.loads(out)
        assert code == 0 and d["checks"] == [] and d["summary"]["notes"]

    def test_refuses_non_cartesian(self, capsys):
        code, _, err = run(capsys, "energy", "--metric", "schwarzschild")
        assert code == 2 and "quasi_cartesian" in err

    def test_bad_radii(self, capsys):
        code, _, _ = run(capsys, "energy", "--metric", "schwarzschild_qc", "--radii", "10,x")
        assert code == 2


class TestClaims:
    """Claims command verdicts and notes."""

    def test_schwarzschild(self, capsys):
        code, out, _ = run(capsys, "claims", "--metric", "schwarzschild", "--points", "2")
        t = json.loads(out)["tables"]["claims"]
        assert code == 0
        assert t["evans_verdict"] == "boxed wave equation refuted"

    def test_flat(self, capsys):
        code, out, _ = run(capsys, "claims", "--metric", "minkowski", "--points", "2")
        d = json.loads(out)
        assert code == 0
        assert d["tables"]["claims"]["evans_verdict"] == "witness inconclusive on flat space"
        assert "witness inconclusive on flat space" in d["summary"]["notes"]

    def test_matter_skips_vacuum(self, capsys):
        code, out, _ = run(capsys, "claims", "--metric", "frw", "--points", "1")
        d = json.loads(out)
        assert code == 0
        assert d["tables"]["claims"]["vacuum_F_residual"] is None
        assert not any(c["name"] == "claim_vacuum_F" for c in d["checks"])


class TestInputErrors:
    """Bad input exits with status 2."""

    def test_malformed_metric(self, capsys, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text('[coordinates]\nnames = ["t","x","y","z"]\n[metric]\n"g.0.0" = "1 +"\n')
        code, _, err = run(capsys, "check", "--metric", str(p))
        assert code == 2 and "g.0.0" in err

    def test_missing_file(self, capsys):
        assert run(capsys, "check", "--metric", "/nonexistent.toml")[0] == 2

    def test_bad_tol(self, capsys):
        assert run(capsys, "identities", "--tol", "oops")[0] == 2

    def test_bad_points(self, capsys):
        assert run(capsys, "identities", "--points", "0")[0] == 2

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_module_entry(self):
        r = subprocess.run([sys.executable, "-m", "cliffgr", "--version"], capture_output=True, text=True)
        assert r.returncode == 0 and "cliffgr" in r.stdout
