"""Monomials, supports and sparse bivariate polynomials.

Supports are kept in graded order: ascending total degree and, inside one
degree, descending power of x, so the degree-2 block reads x^2, xy, y^2.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exactnum import Ival, UniPoly, fmt_rat, normalize_int_vector, parse_number


class Monomial(NamedTuple):
    kx: int
    ky: int

    @property
    def degree(self) -> int:
        return self.kx + self.ky

    def sort_key(self):
        return (self.kx + self.ky, -self.kx)

    def render(self, xname: str = "x", yname: str = "y") -> str:
        parts = []
        for name, k in ((xname, self.kx), (yname, self.ky)):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts) or "1"

    def __call__(self, x, y):
        return _pow(x, self.kx) * _pow(y, self.ky)


def _pow(v, k: int):
    if k == 0:
        return Fraction(1) if not isinstance(v, Ival) else Ival(1, 1)
    return v ** k


class Support(tuple):
    """Graded-ordered tuple of distinct monomials."""

    def __new__(cls, monomials: Iterable = ()):
        ms = [m if isinstance(m, Monomial) else Monomial(*m) for m in monomials]
        for m in ms:
            if m.kx < 0 or m.ky < 0:
                raise ValueError(f"negative exponent in {m}")
        keys = [m.sort_key() for m in ms]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("support must be strictly increasing in graded order")
        return super().__new__(cls, ms)

    @classmethod
    def of(cls, monomials: Iterable) -> "Support":
        """Build a support from monomials in any order."""
        ms = {m if isinstance(m, Monomial) else Monomial(*m) for m in monomials}
        return cls(sorted(ms, key=Monomial.sort_key))

    def index(self, m) -> int:  # type: ignore[override]
        return super().index(Monomial(*m))

    def render(self, xname="x", yname="y") -> list[str]:
        return [m.render(xname, yname) for m in self]

    def subset(self, indices: Iterable[int]) -> "Support":
        return Support(self[i] for i in sorted(indices))


def graded_support(d: int) -> Support:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return Support(Monomial(a, k - a) for k in range(d + 1) for a in range(k, -1, -1))


def even_support(d: int) -> Support:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return Support(Monomial(2 * a, 2 * (k - a)) for k in range(d + 1) for a in range(k, -1, -1))


def mono_vector(s: Sequence[Monomial], x, y) -> list:
    return [m(x, y) for m in s]


@dataclass(frozen=True)
class Poly:
    """Polynomial as coefficients over a support (Int, Rat or Ival entries)."""

    support: Support
    coefficients: tuple

    def __post_init__(self):
        if not isinstance(self.support, Support):
            object.__setattr__(self, "support", Support(self.support))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if len(self.coefficients) != len(self.support):
            raise ValueError("coefficient count does not match the support")

    @classmethod
    def from_terms(cls, terms: Mapping) -> "Poly":
        items = sorted(((Monomial(*m), c) for m, c in terms.items() if c != 0),
                       key=lambda mc: mc[0].sort_key())
        return cls(Support(m for m, _ in items), tuple(c for _, c in items))

    def terms(self) -> dict:
        return {m: c for m, c in zip(self.support, self.coefficients)}

    def is_zero(self) -> bool:
        return all(not isinstance(c, Ival) and c == 0 for c in self.coefficients)

    @property
    def degree(self) -> int:
        degs = [m.degree for m, c in zip(self.support, self.coefficients) if c != 0]
        return max(degs) if degs else -1

    def nonzero_support(self) -> Support:
        return Support(m for m, c in zip(self.support, self.coefficients) if c != 0)

    def __call__(self, x, y):
        return poly_eval(self, x, y)

    def in_y(self, x0) -> UniPoly:
        """Univariate restriction t -> f(x0, t) (x0 rational)."""
        out: dict[int, Fraction] = {}
        for m, c in zip(self.support, self.coefficients):
            out[m.ky] = out.get(m.ky, Fraction(0)) + Fraction(c) * Fraction(x0) ** m.kx
        return UniPoly(out.get(k, 0) for k in range(max(out, default=-1) + 1))

    def in_x(self, y0) -> UniPoly:
        """Univariate restriction t -> f(t, y0) (y0 rational)."""
        out: dict[int, Fraction] = {}
        for m, c in zip(self.support, self.coefficients):
            out[m.kx] = out.get(m.kx, Fraction(0)) + Fraction(c) * Fraction(y0) ** m.ky
        return UniPoly(out.get(k, 0) for k in range(max(out, default=-1) + 1))

    def __mul__(self, other: "Poly") -> "Poly":
        acc: dict = {}
        for m1, c1 in zip(self.support, self.coefficients):
            for m2, c2 in zip(other.support, other.coefficients):
                m = (m1.kx + m2.kx, m1.ky + m2.ky)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Poly.from_terms(acc)

    def __add__(self, other: "Poly") -> "Poly":
        acc = dict(self.terms())
        for m, c in other.terms().items():
            acc[m] = acc.get(m, 0) + c
        return Poly.from_terms(acc)

    def render(self, xname: str = "x", yname: str = "y") -> str:
        return render_poly(self, xname, yname)

    def __str__(self):
        return self.render()


def poly_eval(f: Poly, x, y):
    acc = Fraction(0) if not (isinstance(x, Ival) or isinstance(y, Ival)) else Ival(0, 0)
    for m, c in zip(f.support, f.coefficients):
        if not isinstance(c, Ival) and c == 0:
            continue
        acc = acc + c * m(x, y)
    return acc


def dy_square_sum(s: Sequence[Monomial]) -> Poly:
    """sum over the support of (d m / d y)^2, as an exact polynomial."""
    acc: dict = {}
    for m in s:
        if m.ky == 0:
            continue
        key = (2 * m.kx, 2 * (m.ky - 1))
        acc[key] = acc.get(key, 0) + m.ky * m.ky
    return Poly.from_terms({k: Fraction(v) for k, v in acc.items()})


def normalize_integer(coeffs: Sequence, s: Sequence[Monomial]) -> Poly:
    """Integer coefficients, content 1, first nonzero (graded order) positive."""
    if all(Fraction(c) == 0 for c in coeffs):
        raise ValueError("cannot normalize the zero polynomial")
    return Poly(Support(s), tuple(normalize_int_vector(coeffs)))


# ---------------------------------------------------------------- text format


def render_poly(f: Poly, xname: str = "x", yname: str = "y") -> str:
    """Canonical text: terms in support order, e.g. ``16*y^2 + 432*x^4 - y^4``."""
    out = []
    for m, c in zip(f.support, f.coefficients):
        if isinstance(c, Ival):
            body = f"{c}*{m.render(xname, yname)}" if m.degree else str(c)
            out.append((" + " if out else "") + body)
            continue
        c = Fraction(c)
        if c == 0:
            continue
        mono = m.render(xname, yname)
        mag = abs(c)
        if m.degree == 0:
            body = fmt_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{fmt_rat(mag)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out) or "0"


VARIABLE_ALIASES = {"x": "x", "y": "y", "r": "x", "p": "y", "b": "x", "L": "y"}
_ALIAS_PAIRS = [("x", "y"), ("r", "p"), ("b", "L")]

_TERM_SPLIT = re.compile(r"(?<=[^eE*/^+\-\s])\s*(?=[+-])")
_FACTOR = re.compile(r"^([A-Za-z])(?:\^(\d+))?$")


def parse_poly(text: str) -> Poly:
    """Parse ``432*x^4 + 16*y^2 - y^4 ...``.

    Coefficients may be integers, fractions or decimals; variables are
    ``x, y`` or one of the alias pairs ``r, p`` and ``b, L``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    terms: dict = {}
    seen_vars: set[str] = set()
    for raw in _TERM_SPLIT.split(s):
        t = raw.replace(" ", "")
        if not t:
            raise ValueError(f"malformed polynomial {text!r}")
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"dangling sign in {text!r}")
        coef = Fraction(sign)
        kx = ky = 0
        for factor in _split_factors(t):
            fm = _FACTOR.match(factor)
            if fm:
                name = fm.group(1)
                if name not in VARIABLE_ALIASES:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                seen_vars.add(name)
                k = int(fm.group(2) or 1)
                if VARIABLE_ALIASES[name] == "x":
                    kx += k
                else:
                    ky += k
            else:
                coef *= parse_number(factor)
        key = (kx, ky)
        terms[key] = terms.get(key, 0) + coef
    if not any(seen_vars <= set(pair) for pair in _ALIAS_PAIRS):
        raise ValueError(f"mixed variable names {sorted(seen_vars)} in {text!r}")
    return Poly.from_terms(terms)


def _split_factors(t: str) -> list[str]:
    # '3/4*x^2*y' -> ['3/4', 'x^2', 'y']; a fraction coefficient keeps its slash
    return [f for f in t.split("*") if f]
