"""Sparse supports: zero-set enumeration, the psi / chi sparse-type scan,
sparsest interpolating curves and tables of minimal residuals r(d, q).
"""
from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import mpmath

from . import rng
from .exactnum import Ival, Matrix, det_exact, fmt_rat, nullspace_integer, solve_exact
from .gram import _support, build_gram, coerce_points, evaluation_matrix, is_exact, smallest_eigenvalue
from .polybasis import Monomial, Poly, Support, graded_support, poly_eval

ENUMERATION_GATE = 15


# ---------------------------------------------------------------- zero sets


def solve_with_zeros(points, support, j: Iterable[int]) -> list[Poly]:
    """Integer-normalized curves through the points whose coefficients vanish on ``j``."""
    s = _support(support)
    zero = set(j)
    if any(i < 0 or i >= len(s) for i in zero):
        raise IndexError("zero-set index out of range")
    free = [i for i in range(len(s)) if i not in zero]
    if not free:
        return []
    full = evaluation_matrix(points, s)
    sub = [[row[i] for i in free] for row in full]
    out = []
    for vec in nullspace_integer(sub):
        coeffs = [0] * len(s)
        for i, v in zip(free, vec):
            coeffs[i] = v
        out.append(Poly(s, tuple(coeffs)))
    return out


def psi_set(coeffs: Sequence) -> tuple[int, ...]:
    """Indices i with 10000 * p * c_i^2 < sum c^2, i.e. |c_i| < |c| / (100 sqrt p)."""
    cs = [Fraction(c) for c in coeffs]
    total = sum(c * c for c in cs)
    if total == 0:
        raise ValueError("psi of the zero vector is undefined")
    p = len(cs)
    return tuple(i for i, c in enumerate(cs) if 10000 * p * c * c < total)


def is_reducible(signature: Iterable[Monomial]) -> bool:
    """All monomials share a factor x or a factor y."""
    ms = list(signature)
    return all(m.kx >= 1 for m in ms) or all(m.ky >= 1 for m in ms)


def signature_text(signature: Iterable[Monomial], xname: str = "x", yname: str = "y") -> str:
    ms = sorted(signature, key=Monomial.sort_key)
    return "+".join(m.render(xname, yname) for m in ms)


@dataclass
class ScanReport:
    all_zero_sets: int
    s_prime: list
    s_double_prime: list
    partition: dict
    chi: frozenset
    reducible: frozenset
    degenerate_zero_sets: list = field(default_factory=list)

    def to_json(self, xname: str = "x", yname: str = "y") -> dict:
        return {
            "all_zero_sets": self.all_zero_sets,
            "s_prime": [list(j) for j in self.s_prime],
            "s_double_prime": [list(j) for j in self.s_double_prime],
            "partition": {str(k): [list(j) for j in v] for k, v in sorted(self.partition.items())},
            "chi": sorted(signature_text(s, xname, yname) for s in self.chi),
            "reducible": sorted(signature_text(s, xname, yname) for s in self.reducible),
            "degenerate_zero_sets": [list(j) for j in self.degenerate_zero_sets],
        }


def sparse_type_scan(group, d: int = 3, forbidden_full_block: Iterable[int] | None = None) -> ScanReport:
    """Enumerate zero-sets J for a point group and collect the psi images.

    |J| = p - N - 1 so that each restricted system generically has a
    one-dimensional solution; zero-sets containing the whole top-degree
    block are skipped.
    """
    pts = coerce_points(group)
    if not is_exact(pts):
        raise ValueError("sparse_type_scan needs exact rational points")
    if len(set(pts)) != len(pts):
        raise ValueError("degenerate group: repeated points")
    s = graded_support(d)
    p = len(s)
    if forbidden_full_block is None:
        forbidden_full_block = [i for i, m in enumerate(s) if m.degree == d]
    block = set(forbidden_full_block)
    size = p - len(pts) - 1
    if size < 0:
        raise ValueError("more points than the zero-set scan supports")
    zero_sets = [j for j in combinations(range(p), size) if not block <= set(j)]
    s_prime, images, degenerate = [], set(), []
    for j in zero_sets:
        sols = solve_with_zeros(pts, s, j)
        if len(sols) != 1:
            degenerate.append(j)
        for f in sols:
            psi = psi_set(f.coefficients)
            if set(j) < set(psi):
                if not s_prime or s_prime[-1] != j:
                    s_prime.append(j)
                images.add(psi)
    s_double = sorted(images, key=lambda t: (len(t), t))
    partition: dict[int, list] = {}
    for psi in s_double:
        partition.setdefault(len(psi), []).append(psi)
    chi, red = set(), set()
    for psi in s_double:
        sig = frozenset(s[i] for i in range(p) if i not in psi)
        (red if is_reducible(sig) else chi).add(sig)
    return ScanReport(len(zero_sets), s_prime, s_double, partition, frozenset(chi),
                      frozenset(red), degenerate)


def chi_common(groups: Sequence, d: int = 3) -> frozenset:
    """Sparse types shared by every group."""
    if not groups:
        raise ValueError("need at least one group")
    out = None
    for g in groups:
        chi = sparse_type_scan(g, d).chi
        out = chi if out is None else out & chi
    return out


@dataclass
class MonteCarloReport:
    consistent: bool
    divergent_groups: list
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {"consistent": self.consistent, "trials": self.trials, "seed": self.seed,
                "divergent_groups": [list(g) for g in self.divergent_groups]}


def random_quadruples(points, trials: int, seed: int, reference=None, d: int = 3,
                      jobs: int = 1) -> MonteCarloReport:
    """Compare chi of random 4-point groups with a reference (default: first four points).

    Trial t draws its group from the counter-based stream (seed, t), so the
    report does not depend on ``jobs``.
    """
    pts = coerce_points(points)
    if len(pts) < 4:
        raise ValueError("need at least four points")
    if reference is None:
        reference = sparse_type_scan(pts[:4], d).chi
    groups = [tuple(rng.sample(seed, t, len(pts), 4)) for t in range(trials)]

    def chi_of(idx):
        try:
            return sparse_type_scan([pts[i] for i in idx], d).chi
        except ValueError:
            return None

    if jobs > 1 and groups:
        with cf.ThreadPoolExecutor(jobs) as ex:
            chis = list(ex.map(chi_of, groups))
    else:
        chis = [chi_of(g) for g in groups]
    divergent = [g for g, c in zip(groups, chis) if c != reference]
    return MonteCarloReport(not divergent, divergent, trials, seed)


# ---------------------------------------------------------------- sparsest curves


@dataclass(frozen=True)
class SparseCurve:
    zero_set: tuple
    curve: Poly


def sparsest_curves(points, d: int) -> list[SparseCurve]:
    """All curves over graded_support(d) with the largest possible zero-set."""
    s = graded_support(d)
    p = len(s)
    if p > ENUMERATION_GATE:
        raise ValueError(f"enumeration gate exceeded (p = {p} > {ENUMERATION_GATE})")
    pts = coerce_points(points)
    if not is_exact(pts):
        raise ValueError("sparsest_curves needs exact rational points")
    if not solve_with_zeros(pts, s, ()):
        return []
    for k in range(p - 1, -1, -1):
        found = []
        for j in combinations(range(p), k):
            for f in solve_with_zeros(pts, s, j):
                zeros = tuple(i for i, c in enumerate(f.coefficients) if c == 0)
                if zeros == j:
                    found.append(SparseCurve(j, f))
        if found:
            return found
    return []


# ---------------------------------------------------------------- residual tables


@dataclass
class ResidualEntry:
    q: int
    r: Ival
    best_support: Support
    coeffs: Poly
    prefilter: float
    runner_up: float | None
    candidates_checked: int
    norm: str

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "norm": self.norm,
            "r": self.r.to_json(),
            "r_float": float(self.r.mid),
            "best_support": [m.render() for m in self.best_support],
            "coeffs": [fmt_rat(Fraction(c)) for c in self.coeffs.coefficients],
            "curve": self.coeffs.render(),
            "prefilter": self.prefilter,
            "runner_up": self.runner_up,
            "candidates_checked": self.candidates_checked,
        }


def _to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _prefilter_max(a, idx) -> float:
    """1 / max_j (A_S^-1)_jj by Cholesky at the current mpmath precision."""
    q = len(idx)
    l = [[mpmath.mpf(0)] * q for _ in range(q)]
    for i in range(q):
        for j in range(i + 1):
            s = a[idx[i]][idx[j]] - mpmath.fsum(l[i][k] * l[j][k] for k in range(j))
            if i == j:
                if s <= 0:
                    return 0.0
                l[i][i] = mpmath.sqrt(s)
            else:
                l[i][j] = s / l[j][j]
    # inverse of L, column by column: (A^-1)_jj = sum_i (L^-1)_ij^2
    inv = [[mpmath.mpf(0)] * q for _ in range(q)]
    for j in range(q):
        inv[j][j] = 1 / l[j][j]
        for i in range(j + 1, q):
            inv[i][j] = -mpmath.fsum(l[i][k] * inv[k][j] for k in range(j, i)) / l[i][i]
    diag = [mpmath.fsum(inv[i][j] ** 2 for i in range(j, q)) for j in range(q)]
    return float(1 / max(diag))


def _prefilter_unit(a, idx) -> float:
    m = mpmath.matrix([[a[i][j] for j in idx] for i in idx])
    return float(min(mpmath.eigsy(m, eigvals_only=True)))


def _exact_max(agg, idx) -> tuple[Fraction, list[Fraction]]:
    """Exact minimum of sum f^2 over coefficients with max |c| = 1 on support idx.

    With c_j pinned to 1 the minimum is 1 / (A^-1)_jj and the optimal
    vector is A^-1 e_j / (A^-1)_jj; by Cauchy-Schwarz on the positive
    semidefinite inverse, pinning the j with the largest diagonal entry
    keeps every other |c_i| <= 1.
    """
    sub = [[agg[i][j] for j in idx] for i in idx]
    det = det_exact(sub)
    q = len(idx)
    if det == 0:
        vec = nullspace_integer(sub)[0]
        top = max(vec, key=abs)
        return Fraction(0), [Fraction(v, top) for v in vec]
    best_j, best_val = 0, None
    for j in range(q):
        minor = [[sub[a][b] for b in range(q) if b != j] for a in range(q) if a != j]
        val = det_exact(minor) / det
        if best_val is None or val > best_val:
            best_j, best_val = j, val
    e = [Fraction(int(i == best_j)) for i in range(q)]
    x = solve_exact(sub, e)
    return 1 / best_val, [v / x[best_j] for v in x]


def _exact_unit(agg, idx) -> tuple[Ival, list[Fraction]]:
    sub = Matrix.from_rows([[agg[i][j] for j in idx] for i in idx])
    lam, _ = smallest_eigenvalue(sub)
    q = len(idx)
    if lam.is_point():
        shifted = [[sub[i, j] - (lam.lo if i == j else 0) for j in range(q)] for i in range(q)]
        vec = nullspace_integer(shifted)[0]
        top = max(vec, key=abs)
        return lam, [Fraction(v, top) for v in vec]
    mu = lam.mid
    shifted = [[sub[i, j] - (mu if i == j else 0) for j in range(q)] for i in range(q)]
    raw = solve_exact(shifted, [Fraction(1)] * q)
    top = max(raw, key=abs)
    return lam, [c / top for c in raw]


def _scan_q(args):
    agg_rows, q, norm, prec, margin, max_candidates = args
    with mpmath.workprec(prec):
        a = [[_to_mpf(v) for v in row] for row in agg_rows]
        pre = _prefilter_max if norm == "max" else _prefilter_unit
        scores = [(pre(a, idx), idx) for idx in combinations(range(len(agg_rows)), q)]
    scores.sort(key=lambda t: (t[0], t[1]))
    return scores[:max(max_candidates, 2)] if scores else []


def min_residual_table(points, basis, q_range: Iterable[int], norm: str = "max",
                       prec: int = 320, margin: float = 10.0, max_candidates: int = 64,
                       jobs: int = 1) -> dict[int, ResidualEntry]:
    """For each q, the smallest residual over all q-subsets of the basis.

    ``norm="max"`` minimizes sum f(P_i)^2 over coefficient vectors with
    max |c_j| = 1, the normalization of the segment residual bound; the
    value is an exact rational.  ``norm="unit"`` uses the Euclidean unit
    sphere (smallest eigenvalue, enclosed by an interval).

    Every subset is scored at ``prec`` bits; subsets scoring within
    ``margin`` times the best are then evaluated exactly and the exact
    minimum is reported, together with the prefilter value of the runner-up.
    """
    if norm not in ("max", "unit"):
        raise ValueError("norm must be 'max' or 'unit'")
    pts = coerce_points(points)
    if not is_exact(pts):
        raise ValueError("min_residual_table needs exact rational points")
    s = _support(basis)
    if len(s) > ENUMERATION_GATE:
        raise ValueError(f"enumeration gate exceeded (|basis| = {len(s)} > {ENUMERATION_GATE})")
    agg = build_gram(pts, s).aggregate.to_rows()
    qs = [q for q in q_range if 1 <= q <= len(s)]
    tasks = [(agg, q, norm, prec, margin, max_candidates) for q in qs]
    if jobs > 1 and len(tasks) > 1:
        with cf.ProcessPoolExecutor(jobs) as ex:
            scored = list(ex.map(_scan_q, tasks))
    else:
        scored = [_scan_q(t) for t in tasks]
    out = {}
    for q, scores in zip(qs, scored):
        best_pre = scores[0][0]
        # a zero score may be a near-singular subset; anchor the margin on the first positive one
        base = best_pre if best_pre > 0 else min((v for v, _ in scores if v > 0), default=0.0)
        limit = base * margin
        cands = [(v, idx) for v, idx in scores if v <= limit] or scores[:1]
        exact = []
        for v, idx in cands:
            if norm == "max":
                r, vec = _exact_max(agg, idx)
                r_iv = Ival(r, r)
            else:
                r_iv, vec = _exact_unit(agg, idx)
            exact.append((r_iv.mid, r_iv, idx, vec, v))
        exact.sort(key=lambda t: (t[0], t[2]))
        _, r_iv, idx, vec, v = exact[0]
        others = [v for v, i in scores if i != idx]
        sup = s.subset(idx)
        out[q] = ResidualEntry(q, r_iv, sup, Poly(sup, tuple(vec)), v,
                               min(others) if others else None, len(cands), norm)
    return out
