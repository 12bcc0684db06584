from fractions import Fraction

import pytest
from conftest import nonzero_rationals, rationals, scalars
from hypothesis import given
from hypothesis import strategies as st

from tsvkit.scalars import A, B, LAM, ONE, ZERO, ExponentOverflow, ParamScalar, ZeroLambda, as_rational


@given(scalars(), scalars(), scalars())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x * ONE == x


@given(scalars(), scalars(), nonzero_rationals, rationals, rationals)
def test_specialization_is_a_ring_map(x, y, l0, a0, b0):
    ev = lambda p: p.specialize(l0, a0, b0)  # noqa: E731
    assert ev(x + y) == ev(x) + ev(y)
    assert ev(x * y) == ev(x) * ev(y)


@given(nonzero_rationals, st.integers(-4, 4))
def test_units_invert(c, e):
    u = LAM**e * c
    assert u.is_unit()
    assert u * u.inverse() == ONE


def test_non_units_do_not_invert():
    for x in (A, LAM + 1, ZERO):
        with pytest.raises(ZeroDivisionError):
            x.inverse()


def test_lambda_zero_rejected():
    with pytest.raises(ZeroLambda):
        LAM.specialize(0, 1, 1)


def test_partial_substitution():
    x = LAM**2 * A + B
    assert x.substitute(a=3) == LAM**2 * 3 + B
    assert x.substitute(lam=LAM**-1) == LAM**-2 * A + B


def test_exponent_overflow_is_reported():
    big = ParamScalar({(0, 2**29, 0): 1})
    with pytest.raises(ExponentOverflow):
        big * big * big


def test_as_rational_inputs():
    assert as_rational("-3/4") == Fraction(-3, 4)
    assert as_rational(Fraction(1, 3)) * 3 == 1
    with pytest.raises(TypeError):
        as_rational(True)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_rendering_order():
    assert str(LAM**2 * A - A * B + 3) == "lam^2 * a - a * b + 3"
    assert str(-(LAM**-1)) == "-lam^-1"
    assert str(ZERO) == "0"
