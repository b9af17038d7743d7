"""Degree lower bounds over rectangular neighborhoods.

If det M_d is nonzero for every choice of one point in each of p boxes,
no curve of degree <= d meets all of those boxes.  Two engines prove this:

* the radius bound: expand det M_d(centers + Delta) in the perturbations,
  bound each homogeneous part H_k by C_k delta^k with C_k the sum of its
  absolute coefficients, and find where k(delta) = |det| - sum C_k delta^k
  first vanishes;
* interval subdivision of the box product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import rng
from .exactnum import (Ival, UniPoly, det_exact, det_interval, fmt_rat, isolate_real_roots,
                       refine_root, to_rat)
from .polybasis import Support, graded_support, mono_vector

EXPANSION_GATE = 10


@dataclass(frozen=True)
class Box:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, to_rat(getattr(self, name)))
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError("box with lo > hi")

    @classmethod
    def around(cls, x, y, hx, hy=None) -> "Box":
        x, y, hx = to_rat(x), to_rat(y), to_rat(hx)
        hy = hx if hy is None else to_rat(hy)
        return cls(x - hx, x + hx, y - hy, y + hy)

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return (self.x_lo + self.x_hi) / 2, (self.y_lo + self.y_hi) / 2

    @property
    def half_widths(self) -> tuple[Fraction, Fraction]:
        return (self.x_hi - self.x_lo) / 2, (self.y_hi - self.y_lo) / 2

    @property
    def area(self) -> Fraction:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)

    @property
    def xi(self) -> Ival:
        return Ival(self.x_lo, self.x_hi)

    @property
    def yi(self) -> Ival:
        return Ival(self.y_lo, self.y_hi)

    def to_json(self) -> dict:
        return {k: fmt_rat(getattr(self, k)) for k in ("x_lo", "x_hi", "y_lo", "y_hi")}


def support_size(d: int) -> int:
    return (d + 1) * (d + 2) // 2


# ---------------------------------------------------------------- Delta expansion


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(u + v for u, v in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _shifted_power(c0: Fraction, var: int | None, k: int, nv: int) -> dict:
    """(c0 + t_var)^k as a sparse polynomial; var=None keeps the coordinate fixed."""
    zero = (0,) * nv
    if var is None:
        return {zero: c0 ** k} if c0 ** k else {}
    out = {}
    for j in range(k + 1):
        coef = comb(k, j) * c0 ** (k - j)
        if coef:
            e = [0] * nv
            e[var] = j
            out[tuple(e)] = Fraction(coef)
    return out


def delta_expansion(centers, d: int, free=None) -> dict:
    """det M_d(centers + Delta) as {exponent tuple: coefficient}.

    Variables are (dx_1, dy_1, dx_2, dy_2, ...) restricted to the free
    coordinates; ``free`` is a list of (bool, bool) per center.  The
    determinant is expanded along rows with a dynamic program over the
    set of columns already used.
    """
    s = graded_support(d)
    p = len(s)
    pts = [(to_rat(x), to_rat(y)) for x, y in centers]
    if len(pts) != p:
        raise ValueError(f"degree {d} needs exactly {p} centers, got {len(pts)}")
    if p > EXPANSION_GATE:
        raise ValueError(f"expansion gate exceeded (p = {p} > {EXPANSION_GATE})")
    free = free or [(True, True)] * p
    var_of = []
    nv = 0
    for fx, fy in free:
        vx = vy = None
        if fx:
            vx, nv = nv, nv + 1
        if fy:
            vy, nv = nv, nv + 1
        var_of.append((vx, vy))
    rows = []
    for (x0, y0), (vx, vy) in zip(pts, var_of):
        rows.append([_pmul(_shifted_power(x0, vx, m.kx, nv), _shifted_power(y0, vy, m.ky, nv))
                     for m in s])
    dp = {0: {(0,) * nv: Fraction(1)}}
    for k in range(p):
        nxt: dict = {}
        for used, poly in dp.items():
            for j in range(p):
                if used >> j & 1 or not rows[k][j]:
                    continue
                sign = -1 if bin(used >> (j + 1)).count("1") % 2 else 1
                key = used | (1 << j)
                nxt[key] = _padd(nxt.get(key, {}), _pmul(poly, rows[k][j]), sign)
        dp = nxt
    return dp.get((1 << p) - 1, {})


@dataclass(frozen=True)
class RadiusCertificate:
    centers: tuple
    degree: int
    bound_poly: UniPoly
    pd_radius: Ival | None
    constant_term: Fraction
    coefficient_sums: tuple = ()
    term_counts: tuple = ()

    def to_json(self) -> dict:
        return {
            "centers": [[fmt_rat(x), fmt_rat(y)] for x, y in self.centers],
            "degree": self.degree,
            "constant_term": fmt_rat(self.constant_term),
            "bound_poly": [fmt_rat(c) for c in self.bound_poly.coeffs],
            "coefficient_sums": [fmt_rat(c) for c in self.coefficient_sums],
            "term_counts": list(self.term_counts),
            "pd_radius": self.pd_radius.to_json() if self.pd_radius else None,
        }


def delta_bound_poly(centers, d: int, free=None,
                     root_width=Fraction(1, 10**12)) -> RadiusCertificate:
    """Radius certificate k_d(delta) = |det M_d(centers)| - sum_k C_k delta^k."""
    expansion = delta_expansion(centers, d, free)
    by_degree: dict[int, list] = {}
    for m, c in expansion.items():
        by_degree.setdefault(sum(m), []).append(c)
    top = max(by_degree, default=0)
    const = by_degree.get(0, [Fraction(0)])[0]
    sums = [Fraction(0)] * (top + 1)
    counts = [0] * (top + 1)
    for k, cs in by_degree.items():
        counts[k] = len(cs)
        sums[k] = const if k == 0 else sum(abs(c) for c in cs)
    k_poly = UniPoly([abs(const)] + [-c for c in sums[1:]])
    radius = None
    if const != 0 and k_poly.degree > 0:
        hi = Fraction(1)
        while k_poly(hi) > 0:
            hi *= 2
        roots = isolate_real_roots(k_poly, Ival(0, hi), max_width=hi)
        pos = [r for r in roots if r.hi > 0]
        if pos:
            radius = refine_root(k_poly, pos[0], abs_width=root_width)
    elif const != 0:
        radius = None
    pts = tuple((to_rat(x), to_rat(y)) for x, y in centers)
    return RadiusCertificate(pts, d, k_poly, radius, const, tuple(sums), tuple(counts))


# ---------------------------------------------------------------- certificates

PROVED = "proved"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class PDCertificate:
    status: str
    method: str | None
    subset: tuple
    witness: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    def to_json(self) -> dict:
        return {"status": self.status, "method": self.method, "subset": list(self.subset),
                "reason": self.reason, "witness": self.witness}


def _box_matrix(boxes: Sequence[tuple[Ival, Ival]], s: Support):
    return [mono_vector(s, x, y) for x, y in boxes]


def _bisect(region: list[tuple[Ival, Ival]]):
    best, which, width = 0, 0, Fraction(-1)
    for i, (x, y) in enumerate(region):
        if x.width > width:
            best, which, width = i, 0, x.width
        if y.width > width:
            best, which, width = i, 1, y.width
    halves = []
    iv = region[best][which]
    for part in (Ival(iv.lo, iv.mid), Ival(iv.mid, iv.hi)):
        r = list(region)
        r[best] = (part, r[best][1]) if which == 0 else (r[best][0], part)
        halves.append(r)
    return halves


def subdivision_certificate(boxes: Sequence[Box], d: int, max_depth: int = 12,
                            budget: int = 20000) -> tuple[bool, dict]:
    s = graded_support(d)
    centers = [b.center for b in boxes]
    det0 = det_exact([mono_vector(s, x, y) for x, y in centers])
    if det0 == 0:
        return False, {"reason": "determinant vanishes at the box centers"}
    stack = [([(b.xi, b.yi) for b in boxes], 0)]
    leaves = evals = 0
    worst = None
    while stack:
        region, depth = stack.pop()
        evals += 1
        if evals > budget:
            return False, {"reason": "evaluation budget exhausted", "evaluations": evals}
        enc = det_interval(_box_matrix(region, s))
        if enc.excludes_zero():
            leaves += 1
            if worst is None or enc.mig < worst.mig:
                worst = enc
            continue
        if depth >= max_depth:
            return False, {"reason": "max_depth reached", "evaluations": evals}
        for half in _bisect(region):
            stack.append((half, depth + 1))
    return True, {"leaves": leaves, "evaluations": evals,
                  "det_at_centers": fmt_rat(det0),
                  "sign": 1 if det0 > 0 else -1,
                  "min_abs_enclosure": worst.to_json() if worst else None}


def radius_certificate(boxes: Sequence[Box], d: int) -> tuple[bool, dict]:
    free = [(b.x_hi > b.x_lo, b.y_hi > b.y_lo) for b in boxes]
    cert = delta_bound_poly([b.center for b in boxes], d, free)
    half = max(max(b.half_widths) for b in boxes)
    ok = cert.pd_radius is not None and half < cert.pd_radius.lo
    witness = cert.to_json()
    witness["max_half_width"] = fmt_rat(half)
    return ok, witness


def candidate_subsets(boxes: Sequence[Box], p: int, random_subsets: int, seed: int):
    order = sorted(range(len(boxes)), key=lambda i: (boxes[i].area, i))
    yield tuple(sorted(order[:p]))
    seen = {tuple(sorted(order[:p]))}
    for t in range(random_subsets):
        sub = tuple(rng.sample(seed, t, len(boxes), p))
        if sub not in seen:
            seen.add(sub)
            yield sub


def box_pd_certificate(boxes: Sequence[Box], d: int, subset=None, max_depth: int = 12,
                       random_subsets: int = 8, seed: int = 0,
                       radius_gate: int = 6) -> PDCertificate:
    """Try to prove det M_d never vanishes on the product of p of the boxes.

    The radius engine runs when p <= ``radius_gate`` (the expansion has p!
    base terms), otherwise, or on failure, interval subdivision runs.
    """
    p = support_size(d)
    if len(boxes) < p:
        return PDCertificate(UNKNOWN, None, (), reason="N < p")
    if subset is not None:
        if len(subset) != p:
            raise ValueError(f"subset must have exactly {p} indices")
        candidates = [tuple(subset)]
    else:
        candidates = candidate_subsets(boxes, p, random_subsets, seed)
    reasons = []
    for sub in candidates:
        chosen = [boxes[i] for i in sub]
        if p <= min(radius_gate, EXPANSION_GATE):
            ok, wit = radius_certificate(chosen, d)
            if ok:
                return PDCertificate(PROVED, "radius", sub, wit)
        ok, wit = subdivision_certificate(chosen, d, max_depth)
        if ok:
            return PDCertificate(PROVED, "interval_subdivision", sub, wit)
        reasons.append(f"{list(sub)}: {wit.get('reason')}")
    return PDCertificate(UNKNOWN, None, (), reason="; ".join(reasons))


def min_degree_lower_bound(boxes: Sequence[Box], d: int, **kw) -> int | None:
    """d + 1 when no curve of degree <= d can meet all boxes, else None."""
    return d + 1 if box_pd_certificate(boxes, d, **kw).proved else None
