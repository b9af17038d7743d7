"""Curves through vertical segments: residual bounds, infeasibility
certificates, exact crossing tests, integer reconstruction by continued
fractions and the uniqueness radius of the reconstructed curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .boxcert import Box
from .exactnum import (Ival, as_ival, continued_fraction, count_roots, fmt_rat,
                       normalize_int_vector, to_rat)
from .gram import _support
from .polybasis import Poly, Support, dy_square_sum, poly_eval
from .sparse import min_residual_table

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class Segment:
    x: Fraction
    y_center: Fraction
    half_width: Fraction

    def __post_init__(self):
        for name in ("x", "y_center", "half_width"):
            object.__setattr__(self, name, to_rat(getattr(self, name)))
        if self.half_width <= 0:
            raise ValueError("segment half-width must be positive")

    @property
    def y_lo(self) -> Fraction:
        return self.y_center - self.half_width

    @property
    def y_hi(self) -> Fraction:
        return self.y_center + self.half_width

    def check_positive(self):
        if self.x <= 0 or self.y_lo <= 0:
            raise ValueError(f"segment at x={self.x} needs x > 0 and y - delta > 0")


def residual_bound(segments: Sequence[Segment], support) -> Fraction:
    """delta^2 * q * sum_i h(x_i, y_i + delta), h = sum (d m / d y)^2.

    Any curve over ``support`` with all |c_j| <= 1 that meets every
    segment has sum f(x_i, y_i)^2 at most this value.  Segments may carry
    different half-widths; each term uses its own delta.
    """
    s = _support(support)
    h = dy_square_sum(s)
    q = len(s)
    total = Fraction(0)
    for seg in segments:
        seg.check_positive()
        total += seg.half_width ** 2 * poly_eval(h, seg.x, seg.y_hi)
    return q * total


@dataclass(frozen=True)
class InfeasibilityCertificate:
    infeasible: bool
    margin: Ival
    r: Ival
    bound: Fraction
    scaled_bound: Fraction
    q: int
    best_support: Support

    def to_json(self) -> dict:
        return {"infeasible": self.infeasible, "q": self.q,
                "r": self.r.to_json(), "r_float": float(self.r.mid),
                "bound": fmt_rat(self.bound), "bound_float": float(self.bound),
                "scaled_bound": fmt_rat(self.scaled_bound),
                "scaled_bound_float": float(self.scaled_bound),
                "margin": self.margin.to_json(),
                "best_support": [m.render() for m in self.best_support]}


def infeasibility_certificate(segments: Sequence[Segment], basis, q: int,
                              table=None, **kw) -> InfeasibilityCertificate:
    """No curve with q terms from ``basis`` and max |c| = 1 meets every segment
    when r(q) exceeds the residual bound for a q-term support.

    r(q) is the minimal residual at the segment centers over q-subsets of
    ``basis``; the bound is residual_bound of the full basis scaled by
    q / |basis|, which dominates the bound of every q-subset.
    """
    s = _support(basis)
    centers = [(seg.x, seg.y_center) for seg in segments]
    if table is None or q not in table:
        table = min_residual_table(centers, s, [q], **kw)
    entry = table[q]
    full = residual_bound(segments, s)
    scaled = full * q / len(s)
    margin = entry.r - scaled
    return InfeasibilityCertificate(entry.r.lo > scaled, margin, entry.r, full, scaled, q,
                                    entry.best_support)


def segment_crossing(f: Poly, s: Segment) -> bool:
    """True iff f(s.x, y) has a root with y in [y - delta, y + delta]."""
    u = f.in_y(s.x)
    if u.is_zero():
        return True
    return count_roots(u, s.y_lo, s.y_hi) >= 1


def passes_all(f: Poly, segments: Sequence[Segment]) -> bool:
    return all(segment_crossing(f, s) for s in segments)


def _edge_hits(f: Poly, b: Box) -> bool:
    for x0 in {b.x_lo, b.x_hi}:
        u = f.in_y(x0)
        if u.is_zero() or count_roots(u, b.y_lo, b.y_hi):
            return True
    for y0 in {b.y_lo, b.y_hi}:
        u = f.in_x(y0)
        if u.is_zero() or count_roots(u, b.x_lo, b.x_hi):
            return True
    return False


def _grid_sign_change(f: Poly, b: Box, n: int = 5) -> bool:
    signs = set()
    for i in range(n):
        for j in range(n):
            x = b.x_lo + (b.x_hi - b.x_lo) * Fraction(2 * i + 1, 2 * n)
            y = b.y_lo + (b.y_hi - b.y_lo) * Fraction(2 * j + 1, 2 * n)
            v = poly_eval(f, x, y)
            if v == 0:
                return True
            signs.add(v > 0)
    return len(signs) > 1


def curve_meets_box(f: Poly, b: Box, max_depth: int = 8) -> str:
    """Semi-decision: ``yes`` / ``no`` / ``unknown`` for f = 0 meeting the closed box."""
    if _edge_hits(f, b):
        return YES
    stack = [(b, 0)]
    undecided = False
    while stack:
        box, depth = stack.pop()
        if poly_eval(f, box.xi, box.yi).excludes_zero():
            continue
        if _grid_sign_change(f, box) or _edge_hits(f, box):
            return YES
        if depth >= max_depth:
            undecided = True
            continue
        xm, ym = box.center
        for xs in ((box.x_lo, xm), (xm, box.x_hi)):
            for ys in ((box.y_lo, ym), (ym, box.y_hi)):
                stack.append((Box(xs[0], xs[1], ys[0], ys[1]), depth + 1))
    return UNKNOWN if undecided else NO


# ---------------------------------------------------------------- reconstruction


class ReconstructionError(ValueError):
    pass


@dataclass
class ReconstructionReport:
    observed: list
    accepted: Poly | None
    per_coefficient_radius: list = field(default_factory=list)
    uniqueness_radius: Fraction | None = None
    unbounded: bool = False
    scaled: list = field(default_factory=list)
    pivot: int | None = None

    def to_json(self) -> dict:
        def rad(r):
            return None if r is None else fmt_rat(r)
        out = {
            "observed": [as_ival(o).to_json() for o in self.observed],
            "accepted": None if self.accepted is None else {
                "support": [m.render() for m in self.accepted.support],
                "coefficients": [str(c) for c in self.accepted.coefficients],
                "text": self.accepted.render()},
        }
        if self.per_coefficient_radius:
            out["per_coefficient_radius"] = [rad(r) for r in self.per_coefficient_radius]
            out["per_coefficient_radius_float"] = [
                None if r is None else float(r) for r in self.per_coefficient_radius]
            out["uniqueness_radius"] = "unbounded" if self.unbounded else rad(self.uniqueness_radius)
            if self.uniqueness_radius is not None:
                out["uniqueness_radius_float"] = float(self.uniqueness_radius)
        return out


def _isolated(conv: Fraction, iv: Ival) -> bool:
    """No other rational with denominator <= conv.denominator lies in iv.

    The nearest such rationals are the Farey neighbours of conv of order
    den, found from the modular inverse of the numerator.
    """
    p, q = conv.numerator, conv.denominator
    if q == 1:
        return not (iv.contains(p - 1) or iv.contains(p + 1))
    # right neighbour a/b: a*q - b*p = 1 with the largest b <= q
    b = pow(-p, -1, q) % q or q
    a = (1 + b * p) // q
    right = Fraction(a, b)
    b2 = (q - b) % q or q
    a2 = (b2 * p - 1) // q
    left = Fraction(a2, b2)
    return not (iv.contains(left) or iv.contains(right))


def reconstruct_integer(observed: Sequence, support, max_terms: int = 64) -> ReconstructionReport:
    """Integer curve consistent with coefficient observation windows.

    The windows are scaled so the smallest-magnitude coefficient becomes
    +-1; each scaled window's midpoint is expanded in continued fractions
    and the first convergent inside the window is taken, provided no
    simpler rational also lies in the window.  The accepted rationals are
    then cleared to an integer-normalized polynomial.
    """
    s = _support(support)
    obs = [as_ival(o) for o in observed]
    if len(obs) != len(s):
        raise ValueError("observation count does not match the support")
    nonzero = [i for i, o in enumerate(obs) if o.excludes_zero()]
    if not nonzero:
        raise ReconstructionError("every observation window contains zero")
    pivot = min(nonzero, key=lambda i: (obs[i].mig, i))
    scale = obs[pivot].mid
    accepted = []
    scaled = []
    for i, o in enumerate(obs):
        iv = o / abs(scale) if i != pivot else Ival.point(1 if scale > 0 else -1)
        scaled.append(iv)
        if iv.is_point():
            accepted.append(iv.lo)
            continue
        if not iv.excludes_zero() and not iv.contains(0):
            raise ReconstructionError(f"coefficient {i}: empty window")
        if iv.contains(0) and _isolated(Fraction(0), iv):
            accepted.append(Fraction(0))
            continue
        choice = None
        for conv in continued_fraction(iv.mid, max_terms).convergents:
            if iv.contains(conv):
                choice = conv
                break
        if choice is None or not _isolated(choice, iv):
            raise ReconstructionError(
                f"coefficient {i}: window {iv} does not isolate a convergent")
        accepted.append(choice)
    vec = normalize_int_vector(accepted)
    return ReconstructionReport(list(obs), Poly(s, tuple(vec)), scaled=scaled, pivot=pivot)


def coefficient_radius(window, accepted: Fraction) -> Fraction | None:
    """1 / (n e) for an accepted ratio a/n and worst deviation e over the window.

    Any other rational whose denominator is below the returned value is at
    least 1 / (n * den) > e away from a/n, so it lies outside the window.
    None means the window is the single point a/n (unbounded radius).
    """
    iv = as_ival(window)
    accepted = Fraction(accepted)
    e = max(abs(iv.lo - accepted), abs(iv.hi - accepted))
    if e == 0:
        return None
    return 1 / (accepted.denominator * e)


def uniqueness_radius(observed: Sequence, accepted: Poly) -> ReconstructionReport:
    """Per-coefficient and overall uniqueness radii of an accepted integer curve.

    Ratios are taken against the coefficient of largest magnitude in
    ``accepted``: the observed ratio window is obs_j / obs_max and the
    accepted ratio is c_j / c_max in lowest terms.
    """
    obs = [as_ival(o) for o in observed]
    cs = [int(c) for c in accepted.coefficients]
    if len(obs) != len(cs):
        raise ValueError("observation count does not match the accepted curve")
    k = max(range(len(cs)), key=lambda i: (abs(cs[i]), -i))
    radii = []
    unbounded = False
    for j, (o, c) in enumerate(zip(obs, cs)):
        if j == k:
            radii.append(None)
            continue
        window = o / obs[k]
        r = coefficient_radius(window, Fraction(c, cs[k]))
        if r is None:
            unbounded = True
        radii.append(r)
    finite = [r for j, r in enumerate(radii) if j != k and r is not None]
    overall = None if unbounded or not finite else max(finite)
    return ReconstructionReport(obs, accepted, radii, overall, unbounded)


def approximate_observations(values: Sequence, rel_tol) -> list[Ival]:
    """Observation windows value * (1 +- rel_tol) for printed approximations."""
    rel = to_rat(rel_tol)
    return [Ival.around(to_rat(v), abs(to_rat(v)) * rel) for v in values]
