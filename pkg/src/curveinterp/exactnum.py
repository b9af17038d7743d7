"""Exact rationals, outward-rounded intervals, and the small amount of exact
linear algebra and univariate root finding the rest of the package needs.

Rationals are plain :class:`fractions.Fraction` values.  Intervals keep
rational endpoints; a precision cap (in bits) can be applied to keep the
endpoint sizes bounded, and rounding is always outward.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
Scalar = Union[int, Fraction, "Ival"]

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)\s*/\s*([+-]?\d+)$")
_DEC_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_number(text: str) -> Fraction:
    """Parse an integer, ``p/q`` or finite decimal literal exactly."""
    if not isinstance(text, str):
        raise TypeError(f"expected a string literal, got {type(text).__name__}")
    s = text.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _FRAC_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    if _DEC_RE.match(s):
        # Fraction parses decimal strings exactly, never through a float
        return Fraction(s)
    raise ValueError(f"malformed number literal {text!r}")


def to_rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_number(v)
    raise TypeError(f"cannot convert {v!r} exactly to a rational")


def fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- intervals


@dataclass(frozen=True)
class Ival:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = to_rat(self.lo), to_rat(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, v) -> "Ival":
        q = to_rat(v)
        return cls(q, q)

    @classmethod
    def around(cls, center, radius) -> "Ival":
        c, r = to_rat(center), abs(to_rat(radius))
        return cls(c - r, c + r)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> Fraction:
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, v) -> bool:
        if isinstance(v, Ival):
            return self.lo <= v.lo and v.hi <= self.hi
        if isinstance(v, float):
            return float(self.lo) <= v <= float(self.hi)
        q = to_rat(v)
        return self.lo <= q <= self.hi

    __contains__ = contains

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int | None:
        """+1 / -1 when the sign is certain, 0 for the point zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def intersects(self, other: "Ival") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Ival") -> "Ival":
        return Ival(min(self.lo, other.lo), max(self.hi, other.hi))

    def rounded(self, bits: int | None) -> "Ival":
        """Outward rounding of both endpoints to multiples of 2**-bits."""
        if bits is None:
            return self
        scale = 1 << bits
        lo, hi = self.lo, self.hi
        if lo.denominator > scale:
            lo = Fraction(math.floor(lo * scale), scale)
        if hi.denominator > scale:
            hi = Fraction(-math.floor(-hi * scale), scale)
        return Ival(lo, hi)

    # arithmetic ----------------------------------------------------------
    def __add__(self, o):
        o = as_ival(o)
        return Ival(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Ival(-self.hi, -self.lo)

    def __sub__(self, o):
        o = as_ival(o)
        return Ival(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, o):
        return as_ival(o) - self

    def __mul__(self, o):
        o = as_ival(o)
        if self.is_point() and o.is_point():
            v = self.lo * o.lo
            return Ival(v, v)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Ival(min(c), max(c))

    __rmul__ = __mul__

    def recip(self) -> "Ival":
        if not self.excludes_zero():
            raise ZeroDivisionError(f"interval {self} contains zero")
        return Ival(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o):
        return self * as_ival(o).recip()

    def __rtruediv__(self, o):
        return as_ival(o) * self.recip()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        if n == 0:
            return Ival(1, 1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 1 or self.lo >= 0:
            return Ival(min(a, b), max(a, b))
        if self.hi <= 0:
            return Ival(b, a)
        return Ival(Fraction(0), max(a, b))

    def __float__(self):
        return float(self.mid)

    def __str__(self):
        return f"[{fmt_rat(self.lo)}, {fmt_rat(self.hi)}]"

    def to_json(self) -> list[str]:
        return [fmt_rat(self.lo), fmt_rat(self.hi)]


def as_ival(v) -> Ival:
    if isinstance(v, Ival):
        return v
    return Ival.point(v)


def sqrt_ival(v, bits: int = 128) -> Ival:
    """Enclosure of sqrt(v) for a rational or interval v >= 0, width about 2**-bits."""
    iv = as_ival(v)
    if iv.lo < 0:
        raise ValueError("square root of an interval reaching below zero")
    scale = 1 << bits

    def lower(q: Fraction) -> Fraction:
        # floor(sqrt(q) * scale) / scale
        return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator), scale)

    def upper(q: Fraction) -> Fraction:
        r = lower(q)
        return r if r * r == q else r + Fraction(1, scale)

    return Ival(lower(iv.lo), upper(iv.hi))


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of rationals or intervals."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("rows*cols does not match the number of entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().to_rows()
        return Matrix.from_rows([[_dot(r, c) for c in ot] for r in self.to_rows()])

    def is_square(self) -> bool:
        return self.rows == self.cols


def _dot(a: Sequence, b: Sequence):
    acc = 0
    for u, v in zip(a, b):
        acc = acc + u * v
    return acc


def _rows(m) -> list[list]:
    if isinstance(m, Matrix):
        return m.to_rows()
    return [list(r) for r in m]


def _square_rows(m) -> list[list]:
    rows = _rows(m)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix is not square")
    return rows


def _clear_row(row: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in row:
        den = math.lcm(den, Fraction(v).denominator)
    return [int(Fraction(v) * den) for v in row], den


def det_exact(m) -> Fraction:
    """Exact determinant by Bareiss elimination on the denominator-cleared matrix."""
    rows = _square_rows(m)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = []
    scale = 1
    for r in rows:
        ir, den = _clear_row(r)
        a.append(ir)
        scale *= den
    return Fraction(bareiss_det(a), scale)


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix (exact divisions only)."""
    a = [list(r) for r in a]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _det_cofactor(rows: list[list]):
    n = len(rows)
    if n == 0:
        return Ival(1, 1)
    if n == 1:
        return as_ival(rows[0][0])
    if n == 2:
        return as_ival(rows[0][0]) * rows[1][1] - as_ival(rows[0][1]) * rows[1][0]
    acc = Ival(0, 0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = as_ival(rows[0][j]) * _det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def det_interval(m, bits: int | None = 256) -> Ival:
    """Enclosure of the determinants of all real matrices inside ``m``.

    Gaussian elimination with mignitude pivoting and outward rounding to
    ``bits`` fractional bits (``None`` keeps endpoints exact).  Dimension <= 4
    uses cofactor expansion, which is usually tighter.  When no pivot
    candidate excludes zero the remaining block is expanded by cofactors.
    """
    rows = [[as_ival(v) for v in r] for r in _square_rows(m)]
    n = len(rows)
    if n <= 4:
        return _det_cofactor(rows).rounded(bits)
    acc = Ival(1, 1)
    a = rows
    for k in range(n):
        piv = max(range(k, n), key=lambda i: a[i][k].mig)
        if a[piv][k].mig == 0:
            rest = [r[k:] for r in a[k:]]
            return (acc * _det_cofactor(rest)).rounded(bits)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            acc = -acc
        p = a[k][k]
        acc = (acc * p).rounded(bits)
        inv = p.recip().rounded(bits)
        for i in range(k + 1, n):
            f = (a[i][k] * inv).rounded(bits)
            a[i] = a[i][:k + 1] + [(a[i][j] - f * a[k][j]).rounded(bits) for j in range(k + 1, n)]
    return acc


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = [[Fraction(v) for v in r] for r in _rows(m)]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def normalize_int_vector(v: Sequence) -> list[int]:
    """Clear denominators, divide by content, make the first nonzero entry positive."""
    ints, _ = _clear_row([Fraction(x) for x in v])
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector cannot be normalized")
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    return [-x for x in ints] if first < 0 else ints


def nullspace_integer(m) -> list[list[int]]:
    """Integer-normalized basis of the right nullspace of ``m``."""
    rows = _rows(m)
    if isinstance(m, Matrix):
        ncols = m.cols
    else:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][free]
        basis.append(normalize_int_vector(v))
    return basis


def solve_exact(m, b: Sequence) -> list[Fraction]:
    """Solve the nonsingular square system m x = b over Q."""
    rows = _square_rows(m)
    aug = [list(r) + [b[i]] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    n = len(rows)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


# ---------------------------------------------------------------- polynomials


class UniPoly:
    """Dense univariate polynomial with rational coefficients (ascending)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Ival) else Ival(0, 0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, o: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UniPoly(u + v for u, v in zip(a, b))

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, UniPoly):
            return UniPoly(c * o for c in self.coeffs)
        if self.is_zero() or o.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, d: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(len(r) - len(d.coeffs) + 1, 0)
        dl = d.lead
        dd = d.degree
        for k in range(len(r) - 1, dd - 1, -1):
            c = r[k] / dl
            if c:
                q[k - dd] = c
                for j, dc in enumerate(d.coeffs):
                    r[k - dd + j] -= c * dc
        return UniPoly(q), UniPoly(r[:dd] if dd > 0 else [])

    def monic_abs(self) -> "UniPoly":
        """Scale by a positive constant so the leading coefficient is +-1."""
        if self.is_zero():
            return self
        return self * (1 / abs(self.lead))

    def __repr__(self):
        return f"UniPoly({[fmt_rat(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            body = fmt_rat(mag) if (mag != 1 or not mono) else ""
            txt = body + ("*" if body and mono else "") + mono
            if not terms:
                terms.append(("-" if c < 0 else "") + txt)
            else:
                terms.append((" - " if c < 0 else " + ") + txt)
        return "".join(terms)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1].monic_abs()
    return a.monic_abs()


def squarefree_part(p: UniPoly) -> UniPoly:
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p.divmod(g)[0]


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p.monic_abs(), p.derivative().monic_abs()]
    while not seq[-1].is_zero():
        r = seq[-2].divmod(seq[-1])[1]
        if r.is_zero():
            break
        seq.append((-r).monic_abs())
    return [s for s in seq if not s.is_zero()]


def _variations(seq: list[UniPoly], x: Fraction) -> int:
    signs = [v for v in (s(x) for s in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def count_roots(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots of p in the closed interval [lo, hi]."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    lo, hi = to_rat(lo), to_rat(hi)
    if p.degree == 0 or lo > hi:
        return 0
    q = squarefree_part(p)
    seq = sturm_sequence(q)
    n = _variations(seq, lo) - _variations(seq, hi)
    return n + (1 if q(lo) == 0 else 0)


def isolate_real_roots(p: UniPoly, window, max_width=Fraction(1, 10**6)) -> list[Ival]:
    """Disjoint ascending isolating intervals for the real roots of p in ``window``.

    The window is treated as closed.  Roots hit exactly by bisection are
    returned as point intervals.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    w = as_ival(window)
    max_width = to_rat(max_width)
    if max_width <= 0:
        raise ValueError("max_width must be positive")
    if p.degree == 0:
        return []
    q = squarefree_part(p)
    seq = sturm_sequence(q)

    def var(x):
        return _variations(seq, x)

    out: list[Ival] = []
    if q(w.lo) == 0:
        out.append(Ival(w.lo, w.lo))
    # roots in half-open (a, b]
    stack = [(w.lo, w.hi, var(w.lo), var(w.hi))]
    found = []
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and q(b) == 0:
            found.append(Ival(b, b))
            continue
        if n == 1 and b - a <= max_width:
            found.append(Ival(a, b))
            continue
        m = (a + b) / 2
        vm = var(m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.extend(sorted(found, key=lambda iv: iv.lo))
    return out


def char_poly(s) -> UniPoly:
    """det(t*I - s) by the Faddeev-LeVerrier recursion, exact over Q."""
    a = [[Fraction(v) for v in r] for r in _square_rows(s)]
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += c_prev
        mk = prod
        tr = sum(sum(a[i][t] * mk[t][i] for t in range(n)) for i in range(n))
        coeffs[n - k] = -tr / k
    return UniPoly(coeffs)


# ---------------------------------------------------------------- continued fractions


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: list[int]
    convergents: list[Fraction]


def continued_fraction(r, max_terms: int = 64) -> ContinuedFraction:
    """Canonical expansion of r truncated to ``max_terms`` quotients."""
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    x = to_rat(r)
    quotients: list[int] = []
    convergents: list[Fraction] = []
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while len(quotients) < max_terms:
        a = math.floor(x)
        quotients.append(a)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        convergents.append(Fraction(h1, k1))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return ContinuedFraction(quotients, convergents)


def refine_root(p: UniPoly, iv: Ival, rel_width=Fraction(1, 2**200), abs_width=None) -> Ival:
    """Bisect an isolating interval of a squarefree-part root of p.

    Stops when the width is below ``rel_width`` times the magnitude of the
    enclosure, or below ``abs_width`` when given.
    """
    q = squarefree_part(p)
    a, b = iv.lo, iv.hi
    if q(a) == 0:
        return Ival(a, a)
    if q(b) == 0:
        return Ival(b, b)
    sa = q(a) > 0
    if (q(b) > 0) == sa:
        raise ValueError("interval does not bracket a simple sign change")
    while True:
        w = b - a
        if abs_width is not None and w <= abs_width:
            break
        if w <= rel_width * max(abs(a), abs(b)) and not (a <= 0 <= b):
            break
        m = (a + b) / 2
        vm = q(m)
        if vm == 0:
            return Ival(m, m)
        if (vm > 0) == sa:
            a = m
        else:
            b = m
    return Ival(a, b)


def simplest_between(lo, hi) -> Fraction:
    """The rational with the smallest denominator in the closed interval [lo, hi]."""
    lo, hi = to_rat(lo), to_rat(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # both in (fl, fl+1): recurse on reciprocals of the fractional parts
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))
