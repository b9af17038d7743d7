"""Regenerate the JSON fixtures shipped in src/curveinterp/fixtures.

    python tools/make_fixtures.py [outdir]
"""
from __future__ import annotations

import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from curveinterp.exactnum import Ival, fmt_rat, sqrt_ival
from curveinterp.polybasis import parse_poly, poly_eval

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "src/curveinterp/fixtures"
DIGITS = 40
Q = Fraction


def dump(name: str, doc: dict):
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path} ({len(doc['entries'])} entries)")


def dec(q: Fraction, up: bool) -> str:
    scale = 10 ** DIGITS
    n = -math.floor(-q * scale) if up else math.floor(q * scale)
    sign = "-" if n < 0 else ""
    s = str(abs(n)).rjust(DIGITS + 1, "0")
    return f"{sign}{s[:-DIGITS]}.{s[-DIGITS:]}".rstrip("0").rstrip(".")


def enc(v) -> str | list[str]:
    if isinstance(v, Fraction) or isinstance(v, int):
        return fmt_rat(Q(v))
    if v.is_point():
        return fmt_rat(v.lo)
    return [dec(v.lo, False), dec(v.hi, True)]


def S(v) -> Ival:
    return sqrt_ival(v, 200)


# ---------------------------------------------------------------- circle6


def circle6():
    entries = []
    for t in (0, 1, -1, 2, -2, 3):
        t = Q(t)
        entries.append({"x": fmt_rat((1 - t * t) / (1 + t * t)), "y": fmt_rat(2 * t / (1 + t * t))})
    dump("circle6", {"kind": "points", "entries": entries, "metadata": {
        "name": "circle6",
        "source": "rational points ((1-t^2)/(1+t^2), 2t/(1+t^2)) of the unit circle, t = 0, 1, -1, 2, -2, 3",
        "curve": "1 - x^2 - y^2"}})


# ---------------------------------------------------------------- example1

R2, R5, R6, R7, R10, R73 = S(2), S(5), S(6), S(7), S(10), S(73)

EXAMPLE1 = [
    ("0", "1", 0, 1),
    ("-2/3", "1/3", Q(-2, 3), Q(1, 3)),
    ("2/3", "1/3", Q(2, 3), Q(1, 3)),
    ("-sqrt(2)/6", "1/3", R2 * Q(-1, 6), Q(1, 3)),
    ("-2*sqrt(5)/3", "5/3", R5 * Q(-2, 3), Q(5, 3)),
    ("-sqrt(2)", "2", R2 * -1, 2),
    ("-sqrt(6)/2", "1", R6 * Q(-1, 2), 1),
    ("sqrt(6)/2", "1", R6 * Q(1, 2), 1),
    ("1", "2", 1, 2),
    ("2*sqrt(5)/3", "5/3", R5 * Q(2, 3), Q(5, 3)),
    ("sqrt(10)/6", "5/3", R10 * Q(1, 6), Q(5, 3)),
    ("sqrt(12-6*sqrt(2))/8", "1/4", S(R2 * -6 + 12) * Q(1, 8), Q(1, 4)),
    ("sqrt(12+6*sqrt(2))/8", "1/4", S(R2 * 6 + 12) * Q(1, 8), Q(1, 4)),
    ("-sqrt(18-6*sqrt(7))/4", "3/2", S(R7 * -6 + 18) * Q(-1, 4), Q(3, 2)),
    ("sqrt(18-6*sqrt(7))/4", "3/2", S(R7 * -6 + 18) * Q(1, 4), Q(3, 2)),
    ("-sqrt(18-2*sqrt(73))/6", "2/3", S(R73 * -2 + 18) * Q(-1, 6), Q(2, 3)),
    ("sqrt(18+2*sqrt(73))/6", "2/3", S(R73 * 2 + 18) * Q(1, 6), Q(2, 3)),
    ("-sqrt(9-sqrt(73))/3", "4/3", S(R73 * -1 + 9) * Q(-1, 3), Q(4, 3)),
    ("sqrt(9+sqrt(73))/3", "4/3", S(R73 + 9) * Q(1, 3), Q(4, 3)),
    ("-sqrt(9+sqrt(73))/3", "4/3", S(R73 + 9) * Q(-1, 3), Q(4, 3)),
    ("-sqrt(12+9*sqrt(2))/4", "1+3*sqrt(2)/4", S(R2 * 9 + 12) * Q(-1, 4), R2 * Q(3, 4) + 1),
    # printed as x = 1/4, which is not on the curve; the mirror of P21 is
    ("sqrt(12+9*sqrt(2))/4", "1+3*sqrt(2)/4", S(R2 * 9 + 12) * Q(1, 4), R2 * Q(3, 4) + 1),
]


def example1():
    curve = parse_poly("y^4 - 2*y^3 + y^2 - 3*x^2*y + 2*x^4")
    entries = []
    for i, (fx, fy, x, y) in enumerate(EXAMPLE1, 1):
        rec = {"name": f"P{i}", "x": enc(x), "y": enc(y)}
        xi = Ival(*map(Q, rec["x"])) if isinstance(rec["x"], list) else Ival.point(Q(rec["x"]))
        yi = Ival(*map(Q, rec["y"])) if isinstance(rec["y"], list) else Ival.point(Q(rec["y"]))
        assert xi.width <= Q(1, 10**30) and yi.width <= Q(1, 10**30)
        assert poly_eval(curve, xi, yi).contains(0), i
        entries.append(rec)
    closed = {f"P{i}": [fx, fy] for i, (fx, fy, _, _) in enumerate(EXAMPLE1, 1)}
    dump("example1", {"kind": "points", "entries": entries, "metadata": {
        "name": "example1",
        "source": "22 points on y^4 - 2y^3 + y^2 - 3x^2y + 2x^4 = 0; radicals enclosed by "
                  "decimal intervals of width below 1e-30",
        "closed_forms": closed,
        "curve": "y^4 - 2*y^3 + y^2 - 3*x^2*y + 2*x^4",
        "note": "P22 is printed with x = 1/4 in the source table; that point is off the curve "
                "and the plotted point is the mirror image of P21, x = sqrt(12+9*sqrt(2))/4"}})


# ---------------------------------------------------------------- planets6

PLANETS6 = [
    ("Mercury", "0.3868", "0.3874", "0.2405", "0.2411"),
    ("Venus", "0.7230", "0.7236", "0.6149", "0.6155"),
    ("Earth", "1", "1", "1", "1"),
    ("Mars", "1.5234", "1.5240", "1.8805", "1.8811"),
    ("Jupiter", "5.2041", "5.2047", "11.8617", "11.8623"),
    ("Saturn", "9.5823", "9.5829", "29.4568", "29.4574"),
]


def planets6():
    entries = [{"name": n, "x_lo": a, "x_hi": b, "y_lo": c, "y_hi": d} for n, a, b, c, d in PLANETS6]
    dump("planets6", {"kind": "boxes", "entries": entries, "metadata": {
        "name": "planets6",
        "source": "semi-major axis r (AU) and period p (Earth years) of the six inner planets; "
                  "boxes of half-width 3/10000 around the centers, Earth exact",
        "variables": ["r", "p"]}})


# ---------------------------------------------------------------- kepler38

KEPLER_X = ("3871/10000 7233/10000 1 15237/10000 13011/2500 47913/5000 24023/1250 3011/100 "
            "987/25 346/125 693/250 2671/1000 1181/500 787/500 1213/500 477/200 1101/500 "
            "2387/1000 31421/10000 2453/1000 1167/500 322/125 43/20 2643/1000 2921/1000 "
            "247/100 287/125 2441/1000 332/125 2777/1000 1277/500 299/100 2641/1000 3427/250 "
            "67781/1000 2534/5 21609/500 9143/200").split()
KEPLER_Y = ("301/1250 769/1250 1 2351/1250 5931/500 294571/10000 168041/2000 1647693/10000 "
            "12397/50 23/5 461/100 109/25 363/100 197/100 189/50 92/25 327/100 369/100 557/100 "
            "96/25 357/100 413/100 79/25 43/10 499/100 97/25 87/25 381/100 433/100 463/100 "
            "102/25 517/100 429/100 1269/25 13951/25 11411 7103/25 30909/100").split()
KEPLER_NAMES = ("Mercury Venus Earth Mars Jupiter Saturn Uranus Neptune Pluto Ceres Pallas Juno "
                "Vesta Astraea Hebe Iris Flora Metis Hygiea Parthenope Victoria Egeria Irene "
                "Eunomia Psyche Thetis Melpomene Fortune Proserpina Bellona Amphitrite Leukothea "
                "Fides Chiron Eris Sedna Haumea Makemake").split()
KEPLER_GROUPS = [[1, 2, 3, 4], [5, 6, 7, 8], [11, 12, 13, 14], [15, 16, 17, 18], [19, 20, 21, 22],
                 [23, 24, 25, 26], [27, 28, 29, 30], [31, 32, 33, 10], [34, 9, 37, 38]]


def kepler38():
    entries = [{"name": n, "x": x, "y": y} for n, x, y in zip(KEPLER_NAMES, KEPLER_X, KEPLER_Y)]
    dump("kepler38", {"kind": "points", "entries": entries, "metadata": {
        "name": "kepler38",
        "source": "semi-major axis r (AU) and period p (years) of 8 planets, 23 minor planets "
                  "and 7 dwarf planets; Table-3 order, indices are 1-based",
        "variables": ["r", "p"],
        "box_half_widths": ["1/1000", "1/100"],
        "groups": {f"G{i}": g for i, g in enumerate(KEPLER_GROUPS, 1)}}})


# ---------------------------------------------------------------- ellipse16 / barycenters16

SEG14 = ("4.00391006468634 4.01568603234052 4.03546516762171 4.06347582517416 4.10003596888417 "
         "4.14554927249083 4.20049672260437 4.26542082282451 4.34089883607274 4.42750157636573 "
         "4.52573604652852 4.63597477802543 4.75838211258069 4.89285523313257 5.03899987143207 "
         "5.19615242270664").split()
BARY12 = ("4.003910064687 4.015686032341 4.035465167622 4.063475825175 4.100035968885 "
          "4.145549272491 4.200496722605 4.265420822825 4.340898836073 4.427501576366 "
          "4.525736046529 4.635974778026 4.758382112581 4.892855233133 5.038999871433 "
          "5.196152422707").split()


def ellipse16():
    entries = [{"x": fmt_rat(Q(i, 16)), "y": y} for i, y in enumerate(SEG14, 1)]
    dump("ellipse16", {"kind": "segments", "delta": "1/200000000000000", "entries": entries,
                       "metadata": {
        "name": "ellipse16",
        "source": "16 vertical segments [b_i, b_i] x [L_i - delta, L_i + delta], b_i = i/16, "
                  "delta = 0.5e-14, L_i printed to 14 decimals",
        "variables": ["b", "L"]}})
    entries = [{"x": fmt_rat(Q(i, 16)), "y": y} for i, y in enumerate(BARY12, 1)]
    dump("barycenters16", {"kind": "points", "entries": entries, "metadata": {
        "name": "barycenters16",
        "source": "barycenters of the 16 ellipse segments, printed to 12 decimals",
        "variables": ["b", "L"]}})


# ---------------------------------------------------------------- approx_poly

APPROX = [("x^4", "431.9999989"), ("y^2", "16.00000013"), ("y^4", "-1.000000008"),
          ("x^2*y^2", "-23.99999985"), ("x^2*y^4", "1.999999994"), ("x^4*y^2", "-23.99999986"),
          ("x^4*y^4", "-1"), ("x^6*y^2", "15.99999998")]


def approx_poly():
    entries = [{"monomial": m, "value": v} for m, v in APPROX]
    dump("approx_poly", {"kind": "observations", "entries": entries, "metadata": {
        "name": "approx_poly",
        "source": "printed coefficients of the least-residual 8-term curve through the ellipse "
                  "segments, scaled so the smallest magnitude is 1",
        "tolerance": "1/1000000",
        "variables": ["b", "L"]}})


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for make in (circle6, example1, planets6, kepler38, ellipse16, approx_poly):
        make()
