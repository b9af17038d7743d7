from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveinterp.exactnum import Ival, det_exact, rank
from curveinterp.gram import (PROVED_NO, PROVED_YES, UNKNOWN, approximate_kernel, build_gram,
                              collinear_bezout_bound, collinear_subset, curves_through,
                              degree_degenerate, existence_degree, min_degree_curve,
                              unit_sphere_min)
from curveinterp.polybasis import Monomial, Poly, graded_support, parse_poly, poly_eval

from conftest import points, rationals

ALPHA = Fraction(33910002280102731124343238312183, 2000000000000000)
BETA = Fraction(42374075982683010624551482072423759, 125 * 10**16)
GAMMA = Fraction(4236065336850550592183712032020535827017, 25 * 10**22)
KEPLER_RATIO = Fraction(42374075982683010624551482072423759, 42387502850128413905429047890228750)


def test_build_gram_single_point():
    g = build_gram([(0, 0)], 1)
    assert g.aggregate.to_rows() == [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    g = build_gram([(Fraction(2, 3), 5)], 2)
    assert rank(g.aggregate) == 1


def test_degree_degenerate_circle(fixture):
    pts = fixture("circle6").entries
    v = degree_degenerate(pts, 2)
    assert v.det == 0 and v.degenerate == PROVED_YES
    assert degree_degenerate(pts, 1).degenerate == PROVED_NO


def test_degree_degenerate_example1_intervals(fixture):
    pts = fixture("example1").entries[:10]
    v = degree_degenerate(pts, 3)
    assert v.degenerate == PROVED_NO
    # high-precision reference value of the exact determinant
    ref = Fraction("1.67707205138243351195832462960417154565")
    assert abs(v.det.mid - ref) < Fraction(1, 10**30)
    assert v.det.width < Fraction(1, 10**30)


def test_interval_singular_is_unknown(fixture):
    pts = fixture("example1").entries
    assert degree_degenerate(pts, 4).degenerate == UNKNOWN


def test_curves_through_circle(fixture):
    (f,) = curves_through(fixture("circle6").entries, 2)
    assert f.render() == "1 - x^2 - y^2"


def test_curves_through_parabola():
    pts = [(Fraction(t), Fraction(t * t)) for t in range(-2, 4)]
    curves = curves_through(pts, 2)
    assert len(curves) == 1
    assert {m: c for m, c in curves[0].terms().items() if c} == {Monomial(0, 1): 1, Monomial(2, 0): -1}


def test_curves_through_rejects_intervals(fixture):
    with pytest.raises(ValueError):
        curves_through(fixture("example1").entries, 2)


def test_min_degree_examples(fixture):
    r = min_degree_curve(fixture("circle6").entries)
    assert r.d_star == 2 and r.curves[0].render() == "1 - x^2 - y^2"
    r = min_degree_curve([(0, 0), (1, 1), (2, 2)])
    assert r.d_star == 1 and [f.render() for f in r.curves] == ["x - y"]
    assert min_degree_curve([(0, 0), (3, 7)]).d_star == 1


def test_existence_degree():
    # smallest d with (d+1)(d+2)/2 > N
    assert existence_degree(22) == 6
    assert existence_degree(21) == 6
    assert existence_degree(20) == 5
    assert existence_degree(6) == 3
    assert existence_degree(1) == 1


def test_bezout_bound(fixture):
    assert collinear_bezout_bound(fixture("example1").entries) == 3
    q, line = collinear_subset(fixture("example1").entries)
    assert q == 3
    # the line y = 1 through P1, P7, P8
    assert collinear_subset(fixture("example1").entries[:8]) == (3, (0, 6, 7))
    assert collinear_bezout_bound([(0, 0), (1, 1), (2, 2), (3, 3), (0, 1)]) == 4
    assert collinear_bezout_bound([(0, 0), (1, 0), (0, 1), (1, 2)]) == 1
    # all points on one line: the line itself interpolates
    assert collinear_bezout_bound([(0, 0), (1, 1), (2, 2)]) == 1


def test_unit_sphere_kepler(fixture):
    pts = fixture("kepler38").entries
    s = [Monomial(0, 2), Monomial(3, 0)]
    r = unit_sphere_min(pts, s)
    assert r.quadratic_form == (ALPHA, BETA, GAMMA)
    assert r.pinned_ratio == KEPLER_RATIO
    c_y2, c_x3 = r.coeffs.coefficients
    assert r.lambda_min.width < Fraction(1, 10**20)
    assert not r.exact_direction
    # the direction approximates the eigenvector: ratio close to the pinned ratio
    assert abs(-c_y2 / c_x3 - KEPLER_RATIO) < Fraction(1, 10**3)


def test_unit_sphere_exact_cases():
    r = unit_sphere_min([(1, 1)], [Monomial(1, 0), Monomial(0, 1)])
    assert r.lambda_min == Ival(0, 0) and r.exact_direction
    assert list(r.coeffs.coefficients) == [1, -1]
    pts = [(Fraction(t), Fraction(t * t)) for t in range(-2, 3)]
    r = unit_sphere_min(pts, [Monomial(2, 0), Monomial(0, 1)])
    assert r.lambda_min == Ival(0, 0)
    assert all(poly_eval(r.coeffs, x, y) == 0 for x, y in pts)


def test_approximate_kernel_recovers_quartic(fixture):
    # the 22-point quartic from interval data: ratios match the integer curve
    pts = fixture("example1").entries[:14]
    s = graded_support(4)
    obs = approximate_kernel(pts, s, digits=80)
    target = parse_poly("y^2 - 3*x^2*y - 2*y^3 + 2*x^4 + y^4")
    scale = obs[s.index(Monomial(0, 4))].mid
    for m, o in zip(s, obs):
        want = target.terms().get(m, 0)
        assert abs(o.mid / scale - want) < Fraction(1, 10**15)


# ---------------------------------------------------------------- properties


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.just(d), points(1, 12))))
def test_aggregate_is_basis_times_transpose(args):
    d, pts = args
    g = build_gram(pts, d)
    assert g.aggregate == g.basis_matrix @ g.basis_matrix.transpose()


@given(st.integers(1, 3).flatmap(
    lambda d: st.tuples(st.just(d), points((d + 1) * (d + 2) // 2, (d + 1) * (d + 2) // 2))))
def test_square_case_det_is_square(args):
    d, pts = args
    g = build_gram(pts, d)
    assert det_exact(g.aggregate) == det_exact(g.basis_matrix) ** 2


@given(st.integers(1, 4).flatmap(
    lambda d: st.tuples(st.just(d), points(1, (d + 1) * (d + 2) // 2 - 1))))
def test_too_few_points_force_singularity(args):
    d, pts = args
    assert degree_degenerate(pts, d).degenerate == PROVED_YES


@given(st.integers(1, 3).flatmap(
    lambda d: st.tuples(st.just(d), points((d + 1) * (d + 2) // 2, 12, max_num=4, max_den=2))))
def test_singularity_matches_rank_oracle(args):
    d, pts = args
    g = build_gram(pts, d)
    singular = det_exact(g.aggregate) == 0
    assert singular == (rank(g.basis_matrix) < g.p)


@given(points(1, 10), st.lists(rationals(), min_size=6, max_size=6))
def test_aggregate_is_psd(pts, c):
    a = build_gram(pts, 2).aggregate
    quad = sum(c[i] * a[i, j] * c[j] for i in range(6) for j in range(6))
    assert quad >= 0


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.just(d), points(1, 9, max_num=5, max_den=3))))
def test_curves_through_vanish_exactly(args):
    d, pts = args
    for f in curves_through(pts, d):
        assert all(poly_eval(f, x, y) == 0 for x, y in pts)


@given(points(3, 8, max_num=6, max_den=3), st.lists(rationals(9, 4), min_size=3, max_size=3))
def test_unit_sphere_lower_bounds_random_directions(pts, c):
    s = graded_support(1)
    r = unit_sphere_min(pts, s)
    norm2 = sum(v * v for v in c)
    if norm2 == 0:
        return
    f = Poly(s, tuple(c))
    residual = sum(poly_eval(f, x, y) ** 2 for x, y in pts) / norm2
    assert r.lambda_min.lo <= residual
