import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffgr import expr, jet
from cliffgr.expr import BinOp, Call, Num, Var

COORDS = ("t", "r", "theta", "phi")


def env_at(x, order=3, **params):
    env = {name: jet.variable(float(x[i]), i, order) for i, name in enumerate(COORDS)}
    env.update(params)
    return env


def deriv(a, *idx):
    return float(jet.derivative_tensor(a, idx))


def same_tree(a, b) -> bool:
    return a == b  # spans are excluded from node equality


class TestParse:
    """Precedence, associativity and error reporting."""

    def test_precedence(self):
        e = expr.parse("1 - 2*m/r").root
        assert isinstance(e, BinOp) and e.op == "-"
        assert e.left == Num((0, 0), 1.0)
        div = e.right
        assert div.op == "/" and div.left.op == "*" and div.right == Var((0, 0), "r")

    def test_power_of_call(self):
        e = expr.parse("r^2 * sin(theta)^2").root
        assert e.op == "*"
        assert e.left.op == "^" and e.right.op == "^"
        assert isinstance(e.right.left, Call) and e.right.left.func == "sin"

    def test_power_right_associative(self):
        e = expr.parse("2^3^2").root
        assert e.op == "^" and e.right.op == "^"
        assert expr.evaluate(expr.parse("2^3^2"), {}) == 512.0

    def test_unary_minus_below_power(self):
        assert expr.evaluate(expr.parse("-2^2"), {}) == -4.0

    def test_left_associative(self):
        assert expr.evaluate(expr.parse("8 - 3 - 2"), {}) == 3.0
        assert expr.evaluate(expr.parse("8 / 4 / 2"), {}) == 1.0

    def test_whitespace(self):
        assert same_tree(expr.parse(" 1-2 * m / r ").root, expr.parse("1-2*m/r").root)

    def test_error_offset(self):
        with pytest.raises(expr.ParseError) as info:
            expr.parse("2*(")
        assert info.value.offset == 3
        assert info.value.expected

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(expr.ParseError):
            expr.parse("2m")

    def test_unknown_function(self):
        with pytest.raises(expr.ParseError):
            expr.parse("foo(r)")

    @pytest.mark.parametrize("src", [
        "1 - 2*m/r", "-r^2*sin(theta)^2", "(a - b)/(c*d)", "exp(-t/2)^0.5",
        "a^b^c", "-(x + y)", "abs(cos(x) - 1)", "2 - (3 - 4)", "a/(b/c)",
    ])
    def test_print_round_trip(self, src):
        e = expr.parse(src)
        assert same_tree(expr.parse(str(e)).root, e.root)


class TestEvalJet:
    """Exact derivatives of worked examples."""

    def test_square(self):
        a = expr.eval_jet(expr.parse("r^2"), env_at([0, 3, 0, 0]), 3)
        assert (a[0], deriv(a, 1), deriv(a, 1, 1), deriv(a, 1, 1, 1)) == (9.0, 6.0, 2.0, 0.0)

    def test_sine(self):
        a = expr.eval_jet(expr.parse("sin(theta)"), env_at([0, 0, math.pi / 2, 0]), 3)
        assert a[0] == pytest.approx(1.0)
        assert deriv(a, 2) == pytest.approx(0.0, abs=1e-15)
        assert deriv(a, 2, 2) == pytest.approx(-1.0)
        assert deriv(a, 2, 2, 2) == pytest.approx(0.0, abs=1e-15)

    def test_schwarzschild_lapse(self):
        a = expr.eval_jet(expr.parse("1 - 2*m/r"), env_at([0, 10, 0, 0], m=1.0), 3)
        assert a[0] == pytest.approx(0.8, abs=1e-15)
        assert deriv(a, 1) == pytest.approx(0.02, abs=1e-15)
        assert deriv(a, 1, 1) == pytest.approx(-0.004, abs=1e-15)
        assert deriv(a, 1, 1, 1) == pytest.approx(0.0012, abs=1e-15)

    def test_parameters_are_constant(self):
        a = expr.eval_jet(expr.parse("m"), env_at([0, 1, 0, 0], m=2.0), 3)
        assert a[0] == 2.0 and not np.any(a[1:])

    def test_jet_class_views(self):
        j = jet.Jet.var(2.0, 1) * jet.Jet.var(2.0, 1)
        assert j.value == 4.0
        np.testing.assert_allclose(j.grad, [0, 4, 0, 0])
        np.testing.assert_allclose(j.hess, j.hess.T)
        assert j.hess[1, 1] == 2.0

    @pytest.mark.parametrize("src, x", [
        ("log(r)", [0, -1, 0, 0]), ("sqrt(r)", [0, 0, 0, 0]), ("1/r", [0, 0, 0, 0]),
        ("r^0.5", [0, -2, 0, 0]),
    ])
    def test_domain_errors(self, src, x):
        with pytest.raises((expr.EvalDomainError, jet.DomainError)):
            expr.eval_jet(expr.parse(src), env_at(x), 3)


FUNCS = ["sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "abs"]
MP = {"sin": mpmath.sin, "cos": mpmath.cos, "tan": mpmath.tan, "exp": mpmath.exp, "log": mpmath.log,
      "sqrt": mpmath.sqrt, "sinh": mpmath.sinh, "cosh": mpmath.cosh, "abs": abs}


class TestDerivativesAgainstMpmath:
    """Jet derivatives of each function against high-precision numerical differentiation."""

    @pytest.mark.parametrize("fn", FUNCS)
    @settings(max_examples=15, deadline=None)
    @given(u=st.floats(0.2, 1.3))
    def test_function(self, fn, u):
        # argument r*theta + t keeps a mixed dependence on several coordinates
        src = f"{fn}(r*theta + t)"
        x = [0.1, u, 0.9, 0.0]
        a = expr.eval_jet(expr.parse(src), env_at(x), 3)
        mpmath.mp.dps = 30
        f = lambda t, r, th: MP[fn](r * th + t)  # noqa: E731
        p = (mpmath.mpf(x[0]), mpmath.mpf(x[1]), mpmath.mpf(x[2]))
        for orders, idx, rel in (((0, 1, 0), (1,), 1e-7), ((0, 1, 1), (1, 2), 1e-5), ((1, 2, 0), (0, 1, 1), 1e-3)):
            want = float(mpmath.diff(f, p, orders))
            got = deriv(a, *idx)
            assert got == pytest.approx(want, rel=rel, abs=1e-10)

    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_pythagoras(self, t, r):
        a = expr.eval_jet(expr.parse("sin(t*r)^2 + cos(t*r)^2"), env_at([t, r, 0, 0]), 3)
        np.testing.assert_allclose(a, jet.constant(1.0, 3), atol=1e-12)

    @given(st.floats(0.5, 3), st.floats(0.5, 3))
    def test_product_rule(self, t, r):
        env = env_at([t, r, 0, 0])
        f = expr.eval_jet(expr.parse("exp(t)*r"), env, 3)
        g = expr.eval_jet(expr.parse("log(r) + t^3"), env, 3)
        fg = expr.eval_jet(expr.parse("(exp(t)*r)*(log(r) + t^3)"), env, 3)
        np.testing.assert_allclose(fg, jet.mul(f, g), atol=1e-10)

    def test_negative_base_integer_power(self):
        a = expr.eval_jet(expr.parse("r^3"), env_at([0, -2, 0, 0]), 3)
        assert (a[0], deriv(a, 1), deriv(a, 1, 1), deriv(a, 1, 1, 1)) == (-8.0, 12.0, -12.0, 6.0)
