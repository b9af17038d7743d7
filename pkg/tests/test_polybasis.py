from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveinterp.exactnum import Ival, sqrt_ival
from curveinterp.polybasis import (Monomial, Poly, Support, dy_square_sum, even_support,
                                   graded_support, mono_vector, normalize_integer, parse_poly,
                                   poly_eval, render_poly)

from conftest import POLY88, rationals

M = Monomial


def test_graded_support_order():
    assert graded_support(2) == (M(0, 0), M(1, 0), M(0, 1), M(2, 0), M(1, 1), M(0, 2))
    assert graded_support(0) == (M(0, 0),)
    assert len(graded_support(5)) == 21 and len(graded_support(6)) == 28


@pytest.mark.parametrize("d", range(13))
def test_graded_support_size(d):
    assert len(graded_support(d)) == (d + 1) * (d + 2) // 2


def test_even_support():
    assert even_support(2) == (M(0, 0), M(2, 0), M(0, 2), M(4, 0), M(2, 2), M(0, 4))
    assert even_support(3)[6:] == (M(6, 0), M(4, 2), M(2, 4), M(0, 6))
    assert even_support(0) == (M(0, 0),)
    with pytest.raises(ValueError):
        even_support(-1)


def test_support_validation():
    with pytest.raises(ValueError):
        Support([M(0, 1), M(1, 0)])
    with pytest.raises(ValueError):
        Support([M(1, 0), M(1, 0)])
    assert Support.of([M(0, 2), M(3, 0), M(0, 2)]) == (M(0, 2), M(3, 0))


def test_mono_vector():
    s = graded_support(2)
    assert mono_vector(s, 0, 0) == [1, 0, 0, 0, 0, 0]
    assert mono_vector(s, 1, 1) == [1] * 6
    assert mono_vector(s, 2, 3) == [1, 2, 3, 4, 6, 9]


def test_poly_eval_examples():
    f = parse_poly(POLY88)
    # b = 1, L^2 = 27 lies on the curve
    enc = poly_eval(f, Ival.point(1), sqrt_ival(27, 200))
    assert enc.contains(0) and enc.width < Fraction(1, 10**40)
    # the quartic of the 22-point example passes through (0, 1)
    q = parse_poly("y^2 - 3*x^2*y - 2*y^3 + 2*x^4 + y^4")
    assert poly_eval(q, 0, 1) == 0
    assert poly_eval(Poly(Support(), ()), 5, 7) == 0


@given(st.integers(0, 4).flatmap(lambda d: st.tuples(
    st.just(d), st.lists(rationals(), min_size=(d + 1) * (d + 2) // 2,
                         max_size=(d + 1) * (d + 2) // 2), rationals(), rationals())))
def test_mono_vector_dot_equals_eval(args):
    d, coeffs, x, y = args
    s = graded_support(d)
    f = Poly(s, tuple(coeffs))
    assert sum(c * v for c, v in zip(coeffs, mono_vector(s, x, y))) == poly_eval(f, x, y)


@given(st.integers(0, 3), rationals(), rationals(), rationals(), rationals())
def test_poly_eval_interval_encloses(d, x, y, dx, dy):
    f = Poly(graded_support(d), tuple(Fraction(i - 3) for i in range(len(graded_support(d)))))
    xi, yi = Ival(min(x, dx), max(x, dx)), Ival(min(y, dy), max(y, dy))
    enc = poly_eval(f, xi, yi)
    assert enc.contains(poly_eval(f, xi.mid, yi.lo))


def test_dy_square_sum():
    assert dy_square_sum(Support([M(0, 1)])).terms() == {M(0, 0): 1}
    assert dy_square_sum(Support([M(0, 0), M(2, 0)])).is_zero()
    h = dy_square_sum(even_support(2))
    # 4 y^2 (1 + x^4 + 4 y^4)
    assert h.terms() == {M(0, 2): 4, M(4, 2): 4, M(0, 6): 16}


@given(st.integers(0, 4), rationals(), rationals())
def test_dy_square_sum_nonnegative(d, x, y):
    s = graded_support(d)
    h = dy_square_sum(s)
    v = poly_eval(h, x, y)
    assert v >= 0
    # it is the sum of squares of the y-derivatives
    direct = sum((m.ky * (x ** m.kx) * y ** (m.ky - 1)) ** 2 for m in s if m.ky)
    assert v == direct


@pytest.mark.parametrize("coeffs, out", [
    ([Fraction(1, 2), Fraction(-3, 2), 1], [1, -3, 2]),
    ([Fraction(5, 2), Fraction(-51, 4), Fraction(77, 4), Fraction(-45, 4), Fraction(9, 4)],
     [10, -51, 77, -45, 9]),
    ([-1, 3], [1, -3]),
])
def test_normalize_integer(coeffs, out):
    s = graded_support(4)[:len(coeffs)]
    assert list(normalize_integer(coeffs, s).coefficients) == out


@given(st.lists(rationals(), min_size=1, max_size=8).filter(any),
       rationals().filter(lambda q: q != 0))
def test_normalize_integer_idempotent_and_scale_invariant(coeffs, q):
    s = graded_support(3)[:len(coeffs)]
    f = normalize_integer(coeffs, s)
    assert normalize_integer(f.coefficients, s) == f
    assert normalize_integer([q * c for c in coeffs], s) == f


def test_render_and_parse_round_trip():
    f = parse_poly(POLY88)
    text = render_poly(f)
    assert text == "16*y^2 + 432*x^4 - 24*x^2*y^2 - y^4 - 24*x^4*y^2 + 2*x^2*y^4 + 16*x^6*y^2 - x^4*y^4"
    assert parse_poly(text) == f
    assert f.render("b", "L").startswith("16*L^2 + 432*b^4")


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), rationals()), max_size=6))
def test_parse_render_round_trip_random(terms):
    acc = {}
    for kx, ky, c in terms:
        acc[(kx, ky)] = acc.get((kx, ky), 0) + c
    f = Poly.from_terms(acc)
    if f.is_zero():
        return
    assert parse_poly(f.render()) == f


def test_parse_aliases():
    assert parse_poly("p^2 - r^3") == parse_poly("y^2 - x^3")
    assert parse_poly("432*b^4 + 16*L^2") == parse_poly("432*x^4 + 16*y^2")
    assert parse_poly("3/4*x*y - 0.5") == Poly.from_terms({(1, 1): Fraction(3, 4), (0, 0): Fraction(-1, 2)})
    with pytest.raises(ValueError):
        parse_poly("x + p")
    with pytest.raises(ValueError):
        parse_poly("x + z")
    with pytest.raises(ValueError):
        parse_poly("")


def test_restrictions():
    f = parse_poly("x^2 + y^2 - 1")
    assert f.in_y(0)(1) == 0
    assert f.in_x(0)(-1) == 0
    assert f.degree == 2
