"""Basis matrices, the aggregate matrix A = M M^T, minimal interpolation degree
and unit-sphere least squares.

For points P_1..P_N and a support v = (m_1..m_p) the basis matrix M has
column i equal to v(P_i); a curve c^T v = 0 passes through every point iff
M^T c = 0, and A = M M^T is singular exactly when such a c exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath

from .exactnum import (Ival, Matrix, as_ival, char_poly, det_exact, det_interval,
                       isolate_real_roots, normalize_int_vector, nullspace_integer,
                       rank, refine_root, simplest_between, solve_exact, to_rat)
from .polybasis import Poly, Support, graded_support, mono_vector, poly_eval

PROVED_YES = "proved_yes"
PROVED_NO = "proved_no"
UNKNOWN = "unknown"

INTERVAL_BITS = 256


def _coerce_point(pt):
    x, y = pt
    if isinstance(x, Ival) or isinstance(y, Ival):
        return as_ival(x), as_ival(y)
    return to_rat(x), to_rat(y)


def coerce_points(points) -> list[tuple]:
    pts = [_coerce_point(p) for p in points]
    return pts


def is_exact(points) -> bool:
    return all(not isinstance(v, Ival) for p in points for v in p)


def _support(support_or_degree) -> Support:
    if isinstance(support_or_degree, int):
        return graded_support(support_or_degree)
    if isinstance(support_or_degree, Support):
        return support_or_degree
    return Support.of(support_or_degree)


def existence_degree(n: int) -> int:
    """u(N): at this degree a curve through any N points is guaranteed."""
    return (math.isqrt(8 * n + 1) - 1) // 2


@dataclass(frozen=True)
class GramSystem:
    points: tuple
    support: Support
    basis_matrix: Matrix
    aggregate: Matrix

    @property
    def p(self) -> int:
        return len(self.support)

    @property
    def n(self) -> int:
        return len(self.points)


def build_gram(points, support) -> GramSystem:
    """Basis matrix (p x N) and aggregate matrix (p x p) for points and support."""
    pts = coerce_points(points)
    if not pts:
        raise ValueError("need at least one point")
    s = _support(support)
    exact = is_exact(pts)
    if not exact:
        pts = [(as_ival(x), as_ival(y)) for x, y in pts]
    cols = []
    for x, y in pts:
        v = mono_vector(s, x, y)
        cols.append(v if exact else [e.rounded(INTERVAL_BITS) for e in v])
    p = len(s)
    rows = [[cols[i][j] for i in range(len(pts))] for j in range(p)]
    agg = [[None] * p for _ in range(p)]
    for i in range(p):
        for j in range(i, p):
            acc = Fraction(0) if exact else Ival(0, 0)
            for a, b in zip(rows[i], rows[j]):
                acc = acc + a * b
            if not exact:
                acc = acc.rounded(INTERVAL_BITS)
            agg[i][j] = agg[j][i] = acc
    return GramSystem(tuple(pts), s, Matrix.from_rows(rows), Matrix.from_rows(agg))


@dataclass(frozen=True)
class DegeneracyVerdict:
    det: object  # Fraction or Ival
    degenerate: str


def degree_degenerate(points, d, support=None) -> DegeneracyVerdict:
    """Decide whether a curve of degree <= d (or over ``support``) passes through the points."""
    g = build_gram(points, support if support is not None else d)
    if is_exact(g.points):
        det = det_exact(g.aggregate)
        return DegeneracyVerdict(det, PROVED_YES if det == 0 else PROVED_NO)
    det = det_interval(g.aggregate)
    return DegeneracyVerdict(det, PROVED_NO if det.excludes_zero() else UNKNOWN)


def evaluation_matrix(points, support) -> list[list]:
    """N x p matrix with row i = v(P_i); the transpose of the basis matrix."""
    s = _support(support)
    return [mono_vector(s, x, y) for x, y in coerce_points(points)]


def _curve_key(f: Poly):
    nz = sum(1 for c in f.coefficients if c != 0)
    return (nz, [abs(c) for c in f.coefficients], list(f.coefficients))


def curves_through(points, d, support=None) -> list[Poly]:
    """Integer-normalized basis of the curves over the support through all points.

    The nullspace is taken of the N x p evaluation matrix, which has the
    same kernel as the aggregate matrix and much smaller entries.
    """
    pts = coerce_points(points)
    if not is_exact(pts):
        raise ValueError("curves_through needs exact rational points")
    s = _support(support if support is not None else d)
    out = []
    for vec in nullspace_integer(evaluation_matrix(pts, s)):
        f = Poly(s, tuple(vec))
        if any(poly_eval(f, x, y) != 0 for x, y in pts):
            raise AssertionError("nullspace vector does not vanish on the data")
        out.append(f)
    return sorted(out, key=_curve_key)


@dataclass(frozen=True)
class MinDegreeResult:
    d_star: int | None
    curves: list
    dets: dict = field(default_factory=dict)


def min_degree_curve(points, d_max: int | None = None) -> MinDegreeResult:
    pts = coerce_points(points)
    if not is_exact(pts):
        raise ValueError("min_degree_curve needs exact rational points")
    if d_max is None:
        d_max = existence_degree(len(pts)) + 1
    dets = {}
    for d in range(1, d_max + 1):
        verdict = degree_degenerate(pts, d)
        dets[d] = verdict.det
        if verdict.degenerate == PROVED_YES:
            return MinDegreeResult(d, curves_through(pts, d), dets)
    return MinDegreeResult(None, [], dets)


# ---------------------------------------------------------------- Bezout line bound


def _direction(p, q) -> tuple[int, int]:
    dx, dy = q[0] - p[0], q[1] - p[1]
    den = math.lcm(dx.denominator, dy.denominator)
    a, b = int(dx * den), int(dy * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def _largest_line_exact(pts) -> tuple[int, tuple]:
    best, best_line = 1, ()
    for i in range(len(pts)):
        groups: dict = {}
        for j in range(i + 1, len(pts)):
            if pts[j] == pts[i]:
                continue
            groups.setdefault(_direction(pts[i], pts[j]), []).append(j)
        for members in groups.values():
            if len(members) + 1 > best:
                best, best_line = len(members) + 1, (i, *members)
    return best, best_line


def _cross(p, q, r):
    return (as_ival(q[0]) - p[0]) * (as_ival(r[1]) - p[1]) - (as_ival(q[1]) - p[1]) * (as_ival(r[0]) - p[0])


def _largest_line_interval(pts) -> tuple[int, tuple]:
    # only provably collinear triples count (cross product is exactly zero)
    best, best_line = 1, ()
    for i, j in combinations(range(len(pts)), 2):
        line = [i, j]
        off = False
        for k in range(len(pts)):
            if k in (i, j):
                continue
            c = _cross(pts[i], pts[j], pts[k])
            if c.lo == c.hi == 0:
                line.append(k)
            elif c.excludes_zero():
                off = True
        if off and len(line) > best:
            best, best_line = len(line), tuple(sorted(line))
    return best, best_line


def collinear_bezout_bound(points) -> int:
    """Degree lower bound from the largest collinear subset (line case of Bezout).

    Returns max(2, q) for the largest line holding q >= 3 of the N points
    with q < N, and 1 otherwise.  The argument bounds curves that do not
    contain that line as a component: a curve meeting the line in q points
    without containing it has degree at least q.
    """
    pts = coerce_points(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    q, _ = collinear_subset(pts)
    if q < 3 or q >= len(pts):
        return 1
    return max(2, q)


def collinear_subset(points) -> tuple[int, tuple]:
    pts = coerce_points(points)
    if is_exact(pts):
        return _largest_line_exact(pts)
    return _largest_line_interval(pts)


# ---------------------------------------------------------------- unit sphere


@dataclass(frozen=True)
class UnitSphereResult:
    lambda_min: Ival
    coeffs: Poly
    residual: Ival
    exact_direction: bool
    quadratic_form: tuple | None = None
    pinned_ratio: Fraction | None = None


def smallest_eigenvalue(a: Matrix, rel_width=Fraction(1, 2**128)) -> tuple[Ival, object]:
    """Enclosure of the smallest eigenvalue of a symmetric PSD rational matrix."""
    cp = char_poly(a)
    if cp(0) == 0:
        return Ival(0, 0), cp
    trace = sum(a[i, i] for i in range(a.rows))
    roots = isolate_real_roots(cp, Ival(0, trace), max_width=trace + 1)
    lam = refine_root(cp, roots[0], rel_width=rel_width)
    if not lam.is_point():
        cand = simplest_between(lam.lo, lam.hi)
        if cp(cand) == 0:
            lam = Ival(cand, cand)
    return lam, cp


def unit_sphere_min(points, support) -> UnitSphereResult:
    """min sum f(P_i)^2 over coefficient vectors with |c| = 1.

    The minimum is the smallest eigenvalue of the aggregate matrix, found
    from its exact characteristic polynomial.  For an irrational eigenvalue
    the direction is one step of inverse iteration at a rational shift
    inside the enclosure, scaled to max |c| = 1.
    """
    pts = coerce_points(points)
    if not is_exact(pts):
        raise ValueError("unit_sphere_min needs exact rational points")
    g = build_gram(pts, support)
    a = g.aggregate
    lam, _ = smallest_eigenvalue(a)
    p = g.p
    if lam.is_point():
        shifted = [[a[i, j] - (lam.lo if i == j else 0) for j in range(p)] for i in range(p)]
        vec = nullspace_integer(shifted)[0]
        coeffs = Poly(g.support, tuple(vec))
        exact_dir = True
    else:
        mu = lam.mid
        shifted = [[a[i, j] - (mu if i == j else 0) for j in range(p)] for i in range(p)]
        raw = solve_exact(shifted, [Fraction(1)] * p)
        top = max(raw, key=abs)
        coeffs = Poly(g.support, tuple(c / top for c in raw))
        exact_dir = False
    qf = ratio = None
    if p == 2:
        alpha, beta, gamma = a[0, 0], 2 * a[0, 1], a[1, 1]
        qf = (alpha, beta, gamma)
        if alpha != 0:
            ratio = beta / (2 * alpha)
    return UnitSphereResult(lam, coeffs, lam, exact_dir, qf, ratio)


# ---------------------------------------------------------------- interval data


def approximate_kernel(points, support, digits: int = 80) -> list[Ival]:
    """Approximate kernel direction of the evaluation matrix for interval data.

    Works at ``digits`` decimal digits on the interval midpoints, takes the
    eigenvector of M M^T for its smallest eigenvalue, scales it so the
    largest entry is 1 and widens each entry to radius 10**(-digits/4).
    This is an observation for reconstruction, not a certificate.
    """
    s = _support(support)
    pts = coerce_points(points)
    with mpmath.workdps(digits):
        rows = []
        for x, y in pts:
            xm, ym = _mpf(as_ival(x).mid), _mpf(as_ival(y).mid)
            rows.append([xm ** m.kx * ym ** m.ky for m in s])
        m = mpmath.matrix(rows)
        evals, evecs = mpmath.eigsy(m.T * m)
        k = min(range(len(s)), key=lambda i: evals[i])
        vec = [evecs[j, k] for j in range(len(s))]
        top = max(vec, key=abs)
        radius = Fraction(1, 10 ** (digits // 4))
        return [Ival.around(_to_fraction(c / top), radius) for c in vec]


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _to_fraction(v) -> Fraction:
    # exact binary value; man_exp drops the sign, _mpf_ keeps it
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    q = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -q if sign else q


def basis_rank(points, support) -> int:
    return rank(evaluation_matrix(points, support))
