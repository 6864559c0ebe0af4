import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from utils.angles import Angle, format_pi, parse_angle, tangent_of_pi
from utils.config_utils import Settings
from utils.errors import AngleError, PrecisionCeilingError

rational_pi = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))


def test_format_pi():
    assert format_pi(Fraction(7, 33)) == "7π/33"
    assert format_pi(Fraction(1)) == "π"
    assert format_pi(Fraction(-2)) == "-2π"
    assert format_pi(Fraction(1, 3)) == "π/3"
    assert format_pi(Fraction(0)) == "0"


@pytest.mark.parametrize("text, multiple", [
    ("7/33 pi", Fraction(7, 33)),
    ("pi/3", Fraction(1, 3)),
    ("-2pi", Fraction(-2)),
    ("π", Fraction(1)),
    ("5/3*pi", Fraction(5, 3)),
    ("0", Fraction(0)),
])
def test_parse_angle(text, multiple):
    assert parse_angle(text).total_pi() == multiple


@pytest.mark.parametrize("text", ["abc", "1/0 pi", "pi/0", "3"])
def test_parse_angle_rejects(text):
    with pytest.raises(AngleError):
        parse_angle(text)


def test_winding_and_position():
    angle = Angle.from_pi(Fraction(-1, 3))
    assert angle.winding == -1
    assert angle.position() == Angle.from_pi(Fraction(5, 3))
    assert Angle.from_pi(-2).is_zero_mod_2pi()
    assert Angle.from_pi(4).shifted(-2) == Angle.zero()


def test_tangent_of_pi():
    assert tangent_of_pi(Fraction(1, 3)).to_float() == pytest.approx(math.tan(math.pi / 6))
    assert tangent_of_pi(Fraction(5, 3)).to_float() == pytest.approx(math.tan(5 * math.pi / 6))


def test_rational_tangent_of_a_root_of_unity_is_recognised():
    assert Angle.from_tangent(1) == Angle.from_pi(Fraction(1, 2))
    assert Angle.from_tangent(1).is_rational_pi()
    assert Angle.from_tangent(-1).total_pi() == Fraction(3, 2)
    assert not Angle.from_tangent(Fraction(1, 3)).is_rational_pi()


def test_mixed_order():
    algebraic = Angle.from_tangent(Fraction(1, 3))
    assert algebraic < Angle.from_pi(Fraction(1, 3))
    assert Angle.from_pi(Fraction(1, 6)) < algebraic
    assert algebraic < Angle.from_pi(1)
    assert Angle.from_tangent(Fraction(-1, 3)) > Angle.from_pi(1)
    assert algebraic.to_float() == pytest.approx(2 * math.atan(1 / 3))


def test_negation():
    assert -Angle.from_pi(Fraction(1, 3)) == Angle.from_pi(Fraction(-1, 3))
    algebraic = Angle.from_tangent(Fraction(1, 3))
    assert (-algebraic).to_float() == pytest.approx(-2 * math.atan(1 / 3))
    assert (-algebraic).position() == Angle.from_tangent(Fraction(-1, 3))


@given(rational_pi, st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9)))
def test_rational_scaling_is_exact(multiple, factor):
    assert Angle.from_pi(multiple).scaled(factor).total_pi() == multiple * factor


@given(rational_pi, rational_pi)
def test_order_matches_floats(a, b):
    first, second = Angle.from_pi(a), Angle.from_pi(b)
    assert (first < second) == (a < b)
    assert (first == second) == (a == b)


def test_algebraic_scaling():
    theta = Angle.from_tangent(Fraction(1, 3))
    doubled = theta.scaled(2)
    assert doubled == Angle.from_tangent(Fraction(3, 4))
    assert doubled.to_float() == pytest.approx(2 * theta.to_float())
    assert Angle.from_tangent(Fraction(3, 4)).scaled(Fraction(1, 2)) == theta


def test_algebraic_scaling_past_pi():
    theta = Angle.from_tangent(Fraction(3))
    tripled = theta.scaled(3)
    assert tripled.to_float() == pytest.approx(3 * theta.to_float())
    assert tripled.winding == 1


def test_scaling_keeps_the_global_mpmath_precision():
    before = mpmath.mp.prec
    theta = Angle.from_tangent(Fraction(2, 7))
    tripled = theta.scaled(3, Settings(precision_start_bits=256, precision_ceiling_bits=1024))
    assert tripled.to_float() == pytest.approx(3 * theta.to_float())
    assert mpmath.mp.prec == before


def test_scaling_close_to_a_quarter_turn_needs_precision():
    theta = Angle.from_tangent(Fraction(2 ** 40 + 1, 2 ** 40))
    with pytest.raises(PrecisionCeilingError):
        theta.scaled(2, Settings(precision_start_bits=16, precision_ceiling_bits=32))
    doubled = theta.scaled(2)
    assert doubled.to_float() == pytest.approx(2 * theta.to_float())
    assert not doubled.is_rational_pi()


def test_render():
    assert Angle.from_pi(Fraction(7, 33)).render() == "7π/33"
    assert Angle.from_tangent(Fraction(1, 3)).render().startswith("2·atan(")
