"""Tests for the numeric substrate: PrecReal, CPoly, gamma, ladders."""

from __future__ import annotations

from decimal import ROUND_DOWN, Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadrec.errors import DomainError, PrecisionError, RefusalError
from quadrec.numerics import (
    CPoly,
    PrecReal,
    confirmed_value,
    euler_gamma,
    parse_rational,
)

# ---------------------------------------------------------------------------
# parse_rational
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [
        ("2/5", Fraction(2, 5)),
        ("0.4", Fraction(2, 5)),
        ("3", Fraction(3)),
        ("-1/4", Fraction(-1, 4)),
        (" 7/8 ", Fraction(7, 8)),
    ],
)
def test_parse_rational_accepts_fractions_and_decimals(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1/0", "2//3", "0x10", "1e3e4"])
def test_parse_rational_rejects_garbage(text):
    with pytest.raises(DomainError):
        parse_rational(text)


# ---------------------------------------------------------------------------
# PrecReal
# ---------------------------------------------------------------------------


def test_precreal_carries_explicit_precision():
    x = PrecReal(Fraction(1, 3), 30)
    assert x.precision == 30
    assert str(x.value).startswith("0.33333333333333333333333333333")


def test_precreal_binary_ops_take_min_precision():
    a = PrecReal(1, 40)
    b = PrecReal(3, 25)
    assert (a / b).precision == 25
    assert (a + b).precision == 25
    assert (a * b).precision == 25


def test_precreal_arithmetic_matches_decimal():
    third = PrecReal(1, 30) / PrecReal(3, 30)
    # 1/3 + 1/3 + 1/3 rounds back to 1 within one ulp at 30 digits
    total = third + third + third
    assert abs(total.value - 1) < Decimal("1e-28")


def test_precreal_ln_exp_roundtrip():
    x = PrecReal(Fraction(7, 2), 40)
    y = x.ln().exp()
    assert abs(y.value - x.value) < Decimal("1e-37")


def test_precreal_ln_rejects_nonpositive():
    with pytest.raises(DomainError):
        PrecReal(0, 20).ln()
    with pytest.raises(DomainError):
        PrecReal(-3, 20).ln()


def test_precreal_integer_powers_only():
    x = PrecReal(2, 30)
    assert abs((x**10).value - 1024) < Decimal("1e-25")
    with pytest.raises(TypeError):
        x**0.5


def test_precreal_comparisons():
    a = PrecReal(Fraction(1, 3), 30)
    b = PrecReal(Fraction(1, 2), 30)
    assert a < b
    assert b > a
    assert a <= a
    assert a == PrecReal(Fraction(1, 3), 30)


def test_digit_string_rounds_half_even_by_default():
    x = PrecReal(Fraction(1, 8), 30)  # 0.125 -> ties-to-even at 2 digits
    assert x.digit_string(2) == "0.12"
    y = PrecReal(Fraction(3, 8), 30)  # 0.375 -> 0.38
    assert y.digit_string(2) == "0.38"


def test_digit_string_truncation_mode():
    x = PrecReal(Fraction(2, 3), 30)
    assert x.digit_string(5, rounding=ROUND_DOWN) == "0.66666"
    assert x.digit_string(5) == "0.66667"


def test_digit_string_pads_zeros():
    assert PrecReal(Fraction(1, 2), 20).digit_string(6) == "0.500000"
    assert PrecReal(0, 20).digit_string(4) == "0.0000"


def test_digit_string_rejects_nonpositive_digits():
    with pytest.raises(DomainError):
        PrecReal(1, 20).digit_string(0)


# ---------------------------------------------------------------------------
# euler_gamma
# ---------------------------------------------------------------------------


def test_euler_gamma_prefix():
    g = euler_gamma(30)
    assert g.digit_string(30) == "0.577215664901532860606512090082"


def test_euler_gamma_precision_cap():
    euler_gamma(105)  # the stored literal supports this
    with pytest.raises(RefusalError):
        euler_gamma(106)


# ---------------------------------------------------------------------------
# confirmed_value
# ---------------------------------------------------------------------------


def test_confirmed_value_returns_higher_precision_run():
    calls = []

    def compute(precision):
        calls.append(precision)
        return PrecReal(1, precision) / PrecReal(3, precision)

    out = confirmed_value(compute, digits=15, precision=35)
    assert calls == [35, 55]
    assert out.precision == 55


def test_confirmed_value_detects_precision_drift():
    def unstable(precision):
        # pretends to converge to different values at different precisions
        return PrecReal(1, precision) if precision < 50 else PrecReal(2, precision)

    with pytest.raises(PrecisionError):
        confirmed_value(unstable, digits=10, precision=30)


# ---------------------------------------------------------------------------
# CPoly: exact polynomials in the free constant
# ---------------------------------------------------------------------------


def test_cpoly_constructors_and_normalization():
    c = CPoly.variable()
    zero = CPoly.constant(0)
    assert c.coeffs == (Fraction(0), Fraction(1))
    assert zero.coeffs == ()
    # trailing zeros are trimmed
    assert (c - c).coeffs == ()


def test_cpoly_is_immutable():
    c = CPoly.variable()
    with pytest.raises(AttributeError):
        c.coeffs = (Fraction(1),)


def test_cpoly_ring_ops():
    c = CPoly.variable()
    p = 3 * c - 5
    q = c * c
    assert (p + q)(Fraction(2)) == Fraction(5)
    assert (p * q)(Fraction(2)) == Fraction(4)
    assert (q / 2)(Fraction(3)) == Fraction(9, 2)


def test_cpoly_derivative():
    c = CPoly.variable()
    p = c * c * c / 4 - c * c * Fraction(5, 4) + c * Fraction(5, 2) - Fraction(5, 3)
    dp = p.derivative()
    assert dp(Fraction(2)) == Fraction(3, 4) * 4 - Fraction(5, 2) * 2 + Fraction(5, 2)


@pytest.mark.parametrize(
    "build, text",
    [
        (lambda c: CPoly.constant(0), "0"),
        (lambda c: CPoly.constant(-2), "-2"),
        (lambda c: c, "C"),
        (lambda c: 3 * c - 5, "3*C - 5"),
        (lambda c: Fraction(3, 2) * c * c - 5 * c + 5, "3/2*C^2 - 5*C + 5"),
        (lambda c: -c * c / 2 + c - 1, "-1/2*C^2 + C - 1"),
    ],
)
def test_cpoly_format_str(build, text):
    assert build(CPoly.variable()).format_str() == text


def test_cpoly_coeff_strings_ascending():
    c = CPoly.variable()
    assert (3 * c * c - c / 2 + 7).coeff_strings() == ["7", "-1/2", "3"]


def test_cpoly_evaluates_with_precreal():
    c = CPoly.variable()
    p = c * c - 2 * c + 1
    x = PrecReal(Fraction(3, 2), 30)
    got = p(x)
    assert isinstance(got, PrecReal)
    assert abs(got.value - Decimal("0.25")) < Decimal("1e-27")


small_rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=8
)
small_polys = st.lists(small_rationals, max_size=4).map(CPoly)


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys, small_rationals)
def test_cpoly_evaluation_is_a_ring_morphism(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - q)(x) == p(x) - q(x)


@settings(max_examples=40, deadline=None)
@given(small_polys, small_rationals)
def test_cpoly_derivative_is_linear_in_shifts(p, x):
    # (p + C)' == p' + 1 where C is the variable
    c = CPoly.variable()
    assert (p + c).derivative()(x) == p.derivative()(x) + 1
