import json

import pytest
from hypothesis import given, strategies as st

from cliffgr import report
from cliffgr.report import CheckReport, ReportSchemaError


def sample() -> CheckReport:
    rep = CheckReport({"tool": "cliffgr", "seed": 3})
    rep.add("a", 1e-12, 1e-11, [0.0, 1.5, 2.0, 3.0])
    rep.add("a", 0.25, 1e-11, [0.1, 1.5, 2.0, 3.0])
    rep.add("b", 0.1 + 0.2, 1.0)
    rep.tables["t"] = {"xs": [1.0, 2.5], "flag": True, "none": None}
    rep.notes.append("note")
    return rep


class TestReport:
    """Report structure, summary and byte-stable JSON."""

    def test_summary(self):
        s = sample().summary()
        assert (s["total"], s["passed"], s["failed"]) == (3, 2, 1)
        assert s["notes"] == ["note"]

    def test_keys(self):
        d = json.loads(sample().to_json())
        assert list(d) == ["metadata", "checks", "tables", "summary"]
        assert list(d["checks"][0]) == ["name", "point", "residual", "tolerance", "pass"]

    def test_round_trip(self):
        text = sample().to_json()
        assert report.dumps(report.loads(text)) == text

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_exact(self, x):
        assert json.loads(report.dumps({"x": x}))["x"] == x

    def test_integral_float_stays_float(self):
        assert report.dumps({"x": 1.0, "n": 1}) == '{\n  "x": 1.0,\n  "n": 1\n}\n'
        assert isinstance(json.loads(report.dumps({"x": -3.0}))["x"], float)

    def test_nonfinite_fails(self):
        rep = CheckReport({})
        c = rep.add("n", float("nan"), 1.0)
        assert not c.passed
        assert json.loads(rep.to_json())["checks"][0]["residual"] == "nan"


class TestValidate:
    """Schema violations are rejected."""

    def test_duplicate(self):
        d = json.loads(sample().to_json())
        d["checks"].append(dict(d["checks"][0]))
        with pytest.raises(ReportSchemaError, match="duplicate"):
            report.validate(d)

    def test_inconsistent_pass(self):
        d = json.loads(sample().to_json())
        d["checks"][1]["pass"] = True
        with pytest.raises(ReportSchemaError, match="pass flag"):
            report.validate(d)

    def test_extra_key(self):
        d = json.loads(sample().to_json())
        d["extra"] = 1
        with pytest.raises(ReportSchemaError):
            report.validate(d)
