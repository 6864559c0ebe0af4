import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import Poly

from utils.constants import Comparison
from utils.errors import IndeterminateRootSetError, InputError, NotRealOnCircleError
from utils.exact_arith import (
    I, ONE, U, GaussianRational, LaurentPolynomial, RealAlgebraic, alg_compare, cauchy_bound,
    circle_point, circle_to_tangent, count_roots_closed, format_rational, horner, interval_context,
    iv_rational, parse_rational, poly_coefficients, rational_between, simplest_between, sturm_isolate,
)

gaussian_ints = st.builds(GaussianRational, st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def bar_symmetric(draw):
    f = LaurentPolynomial.from_dict({e: draw(gaussian_ints) for e in range(0, 3)})
    p = f + f.bar()
    assume(not p.is_zero())
    return p


def test_parse_rational():
    assert parse_rational("3") == Fraction(3)
    assert parse_rational(" -7/33 ") == Fraction(-7, 33)
    assert parse_rational("4/6") == Fraction(2, 3)
    with pytest.raises(InputError, match="zero denominator"):
        parse_rational("1/0")
    with pytest.raises(InputError):
        parse_rational("abc")


def test_format_rational():
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-1, 4)) == "-1/4"


def test_gaussian_arithmetic():
    z = GaussianRational(1, 2)
    assert z * z.conj() == GaussianRational(5)
    assert z / z == ONE
    assert I ** 2 == GaussianRational(-1)
    assert z ** -1 == z.inverse()
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


@given(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9)))
def test_circle_point_on_unit_circle(u):
    assert circle_point(u).abs2() == 1


def test_laurent_bar_and_render():
    p = LaurentPolynomial.from_dict({1: 1, 0: -1, -1: 1})
    assert p.is_bar_symmetric()
    assert p.render() == "t - 1 + t^-1"
    q = LaurentPolynomial.from_dict({1: I})
    assert q.bar() == LaurentPolynomial.from_dict({-1: -I})
    assert LaurentPolynomial().render() == "0"


def test_substitute_power_collects_terms():
    p = LaurentPolynomial.from_dict({1: 1, -1: 1})
    assert p.substitute_power(0) == LaurentPolynomial.monomial(0, 2)
    assert p.substitute_power(-2) == LaurentPolynomial.from_dict({2: 1, -2: 1})


@given(bar_symmetric(), bar_symmetric())
@settings(max_examples=30)
def test_bar_is_multiplicative_involution(p, q):
    assert (p * q).bar() == p.bar() * q.bar()
    assert p.bar().bar() == p


def test_circle_to_tangent_examples():
    cos_like = LaurentPolynomial.from_dict({1: 1, -1: 1})
    assert circle_to_tangent(cos_like) == Poly(2 - 2 * U ** 2, U, domain="ZZ")
    sin_like = LaurentPolynomial.from_dict({1: -I, -1: I})
    assert circle_to_tangent(sin_like) == Poly(4 * U, U, domain="ZZ")
    assert circle_to_tangent(LaurentPolynomial.monomial(0, 1)) == Poly(1, U, domain="ZZ")


def test_circle_to_tangent_rejects_non_real():
    with pytest.raises(NotRealOnCircleError):
        circle_to_tangent(LaurentPolynomial.from_dict({1: 1}))


@given(bar_symmetric(), st.builds(Fraction, st.integers(-12, 12), st.integers(1, 5)))
@settings(max_examples=40)
def test_circle_to_tangent_identity(p, u):
    q = circle_to_tangent(p)
    m = p.max_exponent()
    expected = p.evaluate(circle_point(u)) * (1 + u * u) ** m
    assert expected.im == 0
    assert horner(poly_coefficients(q), u) == expected.re


@given(bar_symmetric())
@settings(max_examples=25, deadline=None)
def test_tangent_roots_against_dense_sampling(p):
    q = circle_to_tangent(p)
    assume(q.degree() > 0)
    bound = cauchy_bound(q)
    roots = sturm_isolate(q, -bound, bound)
    thetas = np.linspace(-math.pi + 0.01, math.pi - 0.01, 4001)
    coefficients = {e: complex(float(c.re), float(c.im)) for e, c in p.terms}
    values = np.real(sum(c * np.exp(1j * e * thetas) for e, c in coefficients.items()))
    signs = [np.sign(v) for v in values if abs(v) > 1e-9]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    assert len(roots) >= changes
    for root in roots:
        theta = 2 * math.atan(root.to_float())
        value = sum(c * np.exp(1j * e * theta) for e, c in coefficients.items())
        assert abs(value) < 1e-6


def test_sturm_isolates_sqrt_two():
    roots = sturm_isolate(Poly(U ** 2 - 2, U), -3, 3)
    assert len(roots) == 2
    assert roots[1].to_float() == pytest.approx(math.sqrt(2))
    assert roots[0].compare_rational(Fraction(-1)) is Comparison.LESS


def test_sturm_counts_and_endpoint_roots():
    assert len(sturm_isolate(Poly(3 * U ** 2 - 1, U), -1, 1)) == 2
    roots = sturm_isolate(Poly(U ** 2 - 1, U), -1, 1)
    assert [r.rational_value() for r in roots] == [Fraction(-1), Fraction(1)]
    assert count_roots_closed(Poly((U - 1) ** 2 * (U + 2), U), Fraction(0), Fraction(2)) == 1


def test_zero_polynomial_has_indeterminate_roots():
    with pytest.raises(IndeterminateRootSetError):
        sturm_isolate(Poly(0, U), -1, 1)


def test_alg_compare_equal_roots_of_different_polynomials():
    a = sturm_isolate(Poly(U ** 2 - 2, U), 0, 2)[0]
    b = sturm_isolate(Poly((U ** 2 - 2) * (U - 5), U), 0, 2)[0]
    assert alg_compare(a, b) is Comparison.EQUAL
    c = RealAlgebraic.from_rational(Fraction(3, 2))
    assert alg_compare(a, c) is Comparison.LESS
    assert alg_compare(c, a) is Comparison.GREATER


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5), st.lists(st.integers(-4, 4), min_size=2, max_size=5))
@settings(max_examples=30, deadline=None)
def test_alg_compare_agrees_with_floats(first, second):
    p, q = Poly(first, U), Poly(second, U)
    assume(p.degree() > 0 and q.degree() > 0)
    roots = sturm_isolate(p, -cauchy_bound(p), cauchy_bound(p)) + sturm_isolate(q, -cauchy_bound(q), cauchy_bound(q))
    for a in roots:
        for b in roots:
            fa, fb = a.to_float(), b.to_float()
            result = alg_compare(a, b)
            if fa < fb - 1e-9:
                assert result is Comparison.LESS
            elif fa > fb + 1e-9:
                assert result is Comparison.GREATER


def test_simplest_between():
    assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
    assert simplest_between(Fraction(-1, 2), Fraction(3)) == 0
    assert simplest_between(Fraction(2), Fraction(3)) == Fraction(5, 2)
    assert simplest_between(Fraction(-5, 2), Fraction(-2)) == Fraction(-7, 3)


def test_rational_between_roots():
    a, b = sturm_isolate(Poly(U ** 2 - 2, U), -3, 3)
    x = rational_between(a, b)
    assert a.compare_rational(x) is Comparison.LESS
    assert b.compare_rational(x) is Comparison.GREATER


def test_interval_contexts_do_not_touch_the_global_precision():
    before = mpmath.iv.prec
    coarse, fine = interval_context(20), interval_context(200)
    assert (coarse.prec, fine.prec) == (20, 200)
    assert mpmath.iv.prec == before
    third = iv_rational(fine, Fraction(1, 3))
    assert third.ctx is fine
