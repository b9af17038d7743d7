from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveinterp.boxcert import Box
from curveinterp.exactnum import Ival
from curveinterp.polybasis import Monomial, Poly, Support, even_support, graded_support, parse_poly
from curveinterp.segrecon import (NO, UNKNOWN, YES, ReconstructionError, Segment,
                                  approximate_observations, coefficient_radius, curve_meets_box,
                                  infeasibility_certificate, passes_all, reconstruct_integer,
                                  residual_bound, segment_crossing, uniqueness_radius)

from conftest import POLY88, rationals

F88 = parse_poly(POLY88)
# printed upper bounds of the residual estimates for the even bases d = 2, 3, 4
PRINTED_BOUNDS = {2: 1.2740e-21, 3: 2.2799e-18, 4: 3.2326e-15}
RADIUS_1_27 = 89898659


@pytest.fixture(scope="module")
def segments(fixture):
    return fixture("ellipse16").entries


@pytest.fixture(scope="module")
def observations(fixture):
    ds = fixture("approx_poly")
    monos, windows = ds.observations()
    s = Support.of(monos)
    pos = {m: i for i, m in enumerate(monos)}
    return s, [windows[pos[m]] for m in s]


# ---------------------------------------------------------------- residual bounds


@pytest.mark.parametrize("d", [2, 3, 4])
def test_residual_bound_below_printed(segments, d):
    b = residual_bound(segments, even_support(d))
    assert 0 < float(b) <= PRINTED_BOUNDS[d]


def test_residual_bound_single_segment():
    seg = Segment(2, 3, Fraction(1, 10))
    # no y-dependence: the bound vanishes
    assert residual_bound([seg], Support([Monomial(1, 0)])) == 0
    # f = y: h = 1, bound = q * delta^2
    assert residual_bound([seg], Support([Monomial(0, 1)])) == Fraction(1, 100)


def test_residual_bound_needs_positive_segments():
    with pytest.raises(ValueError):
        residual_bound([Segment(0, 1, Fraction(1, 10))], even_support(1))
    with pytest.raises(ValueError):
        Segment(1, 1, 0)


@given(rationals(1, 8).filter(lambda v: v > 0), rationals(1, 8).filter(lambda v: v > 0),
       rationals(1, 8), st.integers(1, 10), st.integers(-100, 100))
def test_residual_bound_dominates_crossing_curves(x0, y0, c1, k, t):
    """A max-norm-one curve through a segment has center residual at most the bound."""
    c0 = -(c1 * x0 * x0 + y0 * y0)
    if abs(c0) > 1:
        return
    f = Poly(even_support(1), (c0, c1, Fraction(1)))
    delta = Fraction(k, 20)
    center = y0 + delta * Fraction(t, 100)
    if center - delta <= 0:
        return
    seg = Segment(x0, center, delta)
    assert segment_crossing(f, seg)
    assert f.in_y(x0)(center) ** 2 <= residual_bound([seg], f.support)


# ---------------------------------------------------------------- infeasibility


@pytest.mark.slow
@pytest.mark.parametrize("d, q, infeasible", [(2, 6, True), (4, 7, True), (4, 8, False)])
def test_infeasibility(segments, d, q, infeasible):
    cert = infeasibility_certificate(segments, even_support(d), q)
    assert cert.infeasible is infeasible
    assert cert.scaled_bound == cert.bound * q / len(even_support(d))
    assert (cert.margin.lo > 0) is infeasible


def test_infeasibility_d3_full_basis(segments):
    cert = infeasibility_certificate(segments, even_support(3), 10)
    assert cert.infeasible and cert.r.lo > cert.bound


# ---------------------------------------------------------------- crossings


def test_segment_crossing_examples():
    line = parse_poly("y - 1")
    assert segment_crossing(line, Segment(1, 1, Fraction(1, 10)))
    assert segment_crossing(line, Segment(5, Fraction(11, 10), Fraction(1, 10)))
    assert not segment_crossing(line, Segment(1, 2, Fraction(1, 10)))
    # identically zero on the vertical line
    assert segment_crossing(parse_poly("x - 3"), Segment(3, 7, Fraction(1, 2)))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4), rationals(7, 4),
       st.integers(1, 30))
def test_crossing_matches_root_membership(roots, center, k):
    f = Poly.from_terms({(0, 0): 1})
    for r in roots:
        f = f * Poly.from_terms({(0, 1): 1, (0, 0): -r})
    seg = Segment(1, center, Fraction(k, 10))
    expect = any(seg.y_lo <= r <= seg.y_hi for r in roots)
    assert segment_crossing(f, seg) == expect


@given(rationals(), rationals(), rationals(9, 3).filter(lambda v: v > 0))
def test_crossing_when_endpoint_signs_differ(a, c, w):
    f = Poly.from_terms({(0, 3): 1, (0, 1): -a, (0, 0): -c})
    seg = Segment(1, 0, w)
    lo, hi = f.in_y(1)(seg.y_lo), f.in_y(1)(seg.y_hi)
    if lo * hi <= 0:
        assert segment_crossing(f, seg)


@pytest.mark.xfail(strict=True, reason="printed L_i behave as upper endpoints; 6 of 16 centered segments contain the root")
def test_reconstructed_curve_passes_all_segments(segments):
    assert passes_all(F88, segments)


def test_reconstructed_curve_upper_endpoint_reading(segments):
    """Diagnostic: the windows [L_i - 1e-14, L_i] contain every root."""
    hits = sum(segment_crossing(F88, s) for s in segments)
    assert hits == 6
    shifted = [Segment(s.x, s.y_center - s.half_width, s.half_width) for s in segments]
    assert passes_all(F88, shifted)


# ---------------------------------------------------------------- box meeting


def test_curve_meets_box_examples():
    unit = Box(0, 1, 0, 1)
    assert curve_meets_box(parse_poly("x^2 + y^2 + 1"), unit) == NO
    assert curve_meets_box(parse_poly("x - y"), unit) == YES
    # an isolated touching point inside the box: x^2 + y^2 = 0 at the origin
    assert curve_meets_box(parse_poly("x^2 + y^2"), Box(-1, 1, -1, 1)) in (YES, UNKNOWN)
    # a small closed loop strictly inside the box
    assert curve_meets_box(parse_poly("x^2 + y^2 - 1/100"), Box(-1, 1, -1, 1)) == YES


@given(st.integers(1, 40), st.integers(1, 20))
def test_curve_meets_box_around_curve_points(t, w):
    # boxes around points of p^2 = r^3 parametrized as (s^2, s^3)
    s = Fraction(t, 10)
    f = parse_poly("y^2 - x^3")
    b = Box.around(s * s, s ** 3, Fraction(w, 1000))
    assert curve_meets_box(f, b) == YES


def test_kepler_exception_sets_regression(fixture):
    ds = fixture("kepler38")
    boxes = ds.boxes()
    out = {}
    for name, text in [("k1", "p^2 - r^3"), ("k2", "p^2 - 3155/3156*r^3"),
                       ("k3", "p^2 - 3156/3157*r^3")]:
        f = parse_poly(text)
        out[name] = [i + 1 for i, b in enumerate(boxes) if curve_meets_box(f, b) != YES]
    assert out["k1"] == [6, 7, 8, 9, 36]
    assert out["k2"] == out["k3"] == [6, 7, 8, 9, 35, 36, 37, 38]


# ---------------------------------------------------------------- reconstruction


def test_reconstruct_polynomial88(observations):
    s, windows = observations
    rep = reconstruct_integer(windows, s)
    assert rep.accepted.terms() == {m: c for m, c in F88.terms().items() if c}


def test_reconstruct_fixed_point():
    s = graded_support(1)
    rep = reconstruct_integer([Ival.point(1), Ival.point(-3), Ival.point(2)], s)
    assert list(rep.accepted.coefficients) == [1, -3, 2]


def test_reconstruct_errors():
    s = graded_support(1)
    with pytest.raises(ReconstructionError):
        reconstruct_integer([Ival(0, 10)] * 3, s)
    with pytest.raises(ValueError):
        reconstruct_integer([Ival(1, 2)], s)
    # the window holds -1, 0 and 1, so no candidate is isolated
    with pytest.raises(ReconstructionError):
        reconstruct_integer([Ival.point(1), Ival(-1, 1), Ival.point(1)], s)


@given(st.lists(st.integers(-500, 500).filter(lambda v: v != 0), min_size=2, max_size=6),
       st.integers(8, 14))
def test_reconstruct_round_trip(cs, digits):
    from math import gcd
    g = 0
    for c in cs:
        g = gcd(g, c)
    cs = [c // g for c in cs]
    s = graded_support(2)[:len(cs)]
    scale = Fraction(7, 3)
    windows = approximate_observations([c * scale for c in cs], Fraction(1, 10 ** digits))
    rep = reconstruct_integer(windows, s)
    sign = 1 if next(c for c in cs if c) > 0 else -1
    assert list(rep.accepted.coefficients) == [sign * c for c in cs]


def test_coefficient_radius_window():
    window = Ival(Fraction(1, 27), Fraction(1, 27) + Fraction(1, 2427263793))
    assert coefficient_radius(window, Fraction(1, 27)) == RADIUS_1_27
    assert coefficient_radius(Ival.point(Fraction(1, 2)), Fraction(1, 2)) is None


@given(st.integers(1, RADIUS_1_27 - 1), st.integers(-2, 2))
def test_radius_excludes_small_denominators(n, shift):
    window = Ival(Fraction(1, 27), Fraction(1, 27) + Fraction(1, 2427263793))
    a = (n + 13) // 27 + shift
    cand = Fraction(a, n)
    if cand != Fraction(1, 27):
        assert not window.contains(cand)


def test_uniqueness_radius_unbounded():
    s = graded_support(1)
    f = Poly(s, (2, 1, -1))
    rep = uniqueness_radius([Ival.point(2), Ival.point(1), Ival.point(-1)], f)
    assert rep.unbounded and rep.uniqueness_radius is None
    assert rep.to_json()["uniqueness_radius"] == "unbounded"


def test_uniqueness_radius_approx_poly(observations):
    s, windows = observations
    rep = uniqueness_radius(windows, reconstruct_integer(windows, s).accepted)
    assert rep.uniqueness_radius is not None and rep.uniqueness_radius > 0
    finite = [r for r in rep.per_coefficient_radius if r is not None]
    assert rep.uniqueness_radius == max(finite)
