"""Exact operator algebra: Leibniz composition, ring laws, numeric consistency."""
import cmath
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hyperwave.opalg import D, ONE, CoeffPoly, DiffOperator, GaussQ, I, OperatorMatrix, compose, const, ez, sym
from hyperwave.opalg.operators import right_remainder


def to_sympy_action(op: DiffOperator, f, z):
    """Apply ``op`` to a sympy expression f(z), independently of compose()."""
    syms = {n: sp.Symbol(n) for n in ("sigma", "E", "M", "a", "b", "gamma")}
    out = 0
    for n, c in op.terms.items():
        coeff = 0
        for mono, g in c.terms.items():
            t = sp.Rational(g.re.numerator, g.re.denominator) + sp.I * sp.Rational(g.im.numerator, g.im.denominator)
            for name, e in zip(("sigma", "E", "M", "a", "b", "gamma"), mono):
                t *= syms[name] ** e
            t *= sp.exp(mono[-1] * z)
            coeff += t
        out += coeff * sp.diff(f, z, n)
    return sp.expand(out)


def test_compose_first_derivatives():
    assert compose(D, D) == DiffOperator.d(2)


def test_compose_leibniz_exponential():
    assert compose(D, DiffOperator.mul(ez(1))) == DiffOperator.mul(ez(1)) * (D + 1)


def test_compose_by_hand_expansion():
    # (D - 3) o e^{2z}(D - 1) = e^{2z}[(D + 2)(D - 1) - 3(D - 1)] = e^{2z}(D^2 - 2D + 1)
    got = compose(D - 3, DiffOperator.mul(ez(2)) * (D - 1))
    want = DiffOperator({2: ez(2), 1: -2 * ez(2), 0: ez(2)})
    assert got == want


def test_compose_against_sympy_action():
    z = sp.Symbol("z")
    f = sp.Function("f")(z)
    A = D * D - DiffOperator.mul(sym("a") * ez(1)) * D + 3
    B = DiffOperator.mul(ez(-2)) * D + DiffOperator.mul(I * sym("sigma"))
    lhs = to_sympy_action(compose(A, B), f, z)
    rhs = to_sympy_action(A, to_sympy_action(B, f, z), z)
    assert sp.simplify(lhs - rhs) == 0


def test_identity_is_neutral():
    A = DiffOperator.mul(sym("E") * ez(3)) * D * D + 5
    assert compose(A, ONE) == A
    assert compose(ONE, A) == A


def test_canonical_form_drops_zero_terms():
    p = sym("a") - sym("a")
    assert p.is_zero() and p.terms == {}
    assert (D - D).terms == {}


def test_a_plus_ib_times_a_minus_ib():
    a, b = sym("a"), sym("b")
    assert (a + I * b) * (a - I * b) == a * a + b * b


def test_gaussian_rational_division():
    x = GaussQ(3, 4)
    assert x / x == GaussQ(1)
    assert complex(GaussQ(1) / GaussQ(0, 2)) == -0.5j
    with pytest.raises(ZeroDivisionError):
        GaussQ(1) / GaussQ(0)


def test_conjugate_by_exp_removes_first_derivative():
    L = D * D - 4 * D + 3
    assert L.conjugate_by_exp(2) == D * D - 1


def test_right_remainder():
    L = D * D - 2 * D + 5
    A = compose(D + 7, L) + (3 * D + 1)
    assert right_remainder(A, L) == 3 * D + 1


def test_operator_matrix_product_is_noncommutative():
    A = OperatorMatrix([[D]])
    B = OperatorMatrix([[DiffOperator.mul(ez(1))]])
    assert (A @ B) != (B @ A)


# -- properties -------------------------------------------------------------

coeffs = st.builds(
    lambda c, k, e: CoeffPoly.const(GaussQ(c, 0)) * ez(k) * sym("a") ** e,
    st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2),
)
operators = st.lists(st.tuples(st.integers(0, 3), coeffs), max_size=3).map(
    lambda ts: sum((DiffOperator({n: c}) for n, c in ts), DiffOperator())
)


@settings(max_examples=60, deadline=None)
@given(operators, operators, operators)
def test_compose_associative(A, B, C):
    assert compose(A, compose(B, C)) == compose(compose(A, B), C)


@settings(max_examples=60, deadline=None)
@given(operators, operators, operators)
def test_compose_distributes(A, B, C):
    assert compose(A, B + C) == compose(A, B) + compose(A, C)
    assert compose(A + B, C) == compose(A, C) + compose(B, C)


@settings(max_examples=60, deadline=None)
@given(operators, st.sampled_from([-1.5, 0.0, 0.5, 2.0]), st.integers(0, 2), st.floats(-1, 1))
def test_symbolic_then_numeric_matches_direct(A, lam, m, z0):
    """A applied to e^{lam z} z^m: symbolic derivatives vs an independent sympy evaluation."""
    z = sp.Symbol("z")
    f = sp.exp(sp.Rational(str(lam)) * z) * z ** m
    direct = complex(to_sympy_action(A, f, z).subs({z: z0, sp.Symbol("a"): sp.Rational(3, 7)}).evalf(30))
    derivs = [complex(sp.diff(f, z, n).subs(z, z0).evalf(30)) for n in range(A.order + 1)] if A.terms else [0j]
    values = {"sigma": 0, "E": 0, "M": 1, "a": 3 / 7, "b": 0, "gamma": 1}
    got = A.apply(values, z0, derivs) if A.terms else 0j
    assert abs(got - direct) <= 1e-12 * max(1.0, abs(direct))
