"""Command-line interface: ``curveinterp <subcommand> [options] DATASET``.

Datasets are file paths (JSON or CSV) or ``fixtures:<name>``.  Results go
to standard output as deterministic JSON (CSV for ``sample-curve``).
Exit status: 0 on success, 2 when a certificate is inconclusive, 1 on error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from . import __version__
from .boxcert import box_pd_certificate
from .dataset import Dataset, DatasetError, dumps, emit, fixture_names, load_dataset
from .exactnum import Ival, fmt_rat, isolate_real_roots, parse_number
from .gram import (PROVED_NO, collinear_bezout_bound, curves_through,
                   degree_degenerate, existence_degree, is_exact, min_degree_curve,
                   unit_sphere_min)
from .polybasis import Monomial, Poly, Support, even_support, graded_support, parse_poly
from .segrecon import (ReconstructionError, curve_meets_box, infeasibility_certificate,
                       reconstruct_integer, residual_bound, segment_crossing,
                       uniqueness_radius)
from .sparse import min_residual_table, random_quadruples, sparse_type_scan, sparsest_curves

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _rat(q) -> dict:
    q = Fraction(q)
    return {"exact": fmt_rat(q), "float": float(q)}


def _ival(v: Ival) -> dict:
    return {"enclosure": v.to_json(), "float": float(v.mid), "width": float(v.width)}


def _num(v) -> dict:
    return _ival(v) if isinstance(v, Ival) else _rat(v)


def _names(ds: Dataset) -> tuple[str, str]:
    v = ds.metadata.get("variables")
    return (v[0], v[1]) if v else ("x", "y")


def _curve(f: Poly, ds: Dataset | None = None) -> dict:
    out = {"text": f.render(), "support": [m.render() for m in f.support],
           "coefficients": [fmt_rat(Fraction(c)) for c in f.coefficients]}
    if ds is not None and _names(ds) != ("x", "y"):
        out["text_native"] = f.render(*_names(ds))
    return out


def _support_arg(text: str) -> Support:
    monos = []
    for part in text.split(","):
        f = parse_poly(part.strip())
        terms = f.terms()
        if len(terms) != 1:
            raise CliError(f"--support entry {part!r} is not a monomial")
        monos.append(Monomial(*next(iter(terms))))
    return Support.of(monos)


def _basis(kind: str, d: int) -> Support:
    if kind == "even":
        return even_support(d)
    if kind == "graded":
        return graded_support(d)
    raise CliError(f"unknown basis {kind!r} (even or graded)")


def _indices(text: str, n: int) -> list[int]:
    try:
        idx = [int(t) for t in text.split(",")]
    except ValueError:
        raise CliError(f"bad index list {text!r}") from None
    if any(i < 1 or i > n for i in idx):
        raise CliError(f"indices must lie in 1..{n}")
    return [i - 1 for i in idx]


# ---------------------------------------------------------------- subcommands


def cmd_mindeg(args, ds: Dataset):
    pts = ds.centers()
    out = {"dataset": ds.metadata.get("name"), "n": len(pts),
           "existence_degree": existence_degree(len(pts)),
           "bezout_line_bound": collinear_bezout_bound(pts)}
    if is_exact(pts):
        res = min_degree_curve(pts, args.dmax)
        out.update(status="exact", d_star=res.d_star,
                   curves=[_curve(f, ds) for f in res.curves],
                   dets={str(d): _rat(v) for d, v in res.dets.items()})
        return out, EXIT_OK
    # interval data: nonsingularity is provable, singularity is not
    dmax = args.dmax or existence_degree(len(pts)) + 1
    dets = {}
    for d in range(1, dmax + 1):
        v = degree_degenerate(pts, d)
        dets[str(d)] = {"verdict": v.degenerate, **_ival(v.det)}
        if v.degenerate != PROVED_NO:
            out.update(status="interval", lower_bound=d, dets=dets)
            return out, EXIT_UNKNOWN
    out.update(status="interval", lower_bound=dmax + 1, dets=dets)
    return out, EXIT_OK


def cmd_fit(args, ds: Dataset):
    pts = ds.centers()
    if args.support:
        support = _support_arg(args.support)
    elif args.degree is not None:
        support = graded_support(args.degree)
    else:
        raise CliError("fit needs --degree or --support")
    out = {"support": [m.render() for m in support]}
    if args.unit_sphere:
        r = unit_sphere_min(pts, support)
        out["unit_sphere"] = {"lambda_min": _num(r.lambda_min), "exact_direction": r.exact_direction,
                              "curve": _curve(r.coeffs, ds)}
        if r.quadratic_form:
            out["unit_sphere"]["quadratic_form"] = [_rat(v) for v in r.quadratic_form]
        if r.pinned_ratio is not None:
            out["unit_sphere"]["pinned_ratio"] = _rat(r.pinned_ratio)
    else:
        out["curves"] = [_curve(f, ds) for f in curves_through(pts, None, support)]
    return out, EXIT_OK


def cmd_certify_box(args, ds: Dataset):
    boxes = ds.boxes()
    subset = _indices(args.subset, len(boxes)) if args.subset else None
    cert = box_pd_certificate(boxes, args.degree, subset=subset, seed=args.seed,
                              random_subsets=args.random_subsets, max_depth=args.max_depth)
    out = {"degree": args.degree, "certificate": cert.to_json(),
           "bound": args.degree + 1 if cert.proved else None}
    out["certificate"]["subset"] = [i + 1 for i in cert.subset]
    if args.curve:
        f = parse_poly(args.curve)
        verdicts = [curve_meets_box(f, b) for b in boxes]
        out["curve"] = {"text": f.render(), "verdicts": verdicts,
                        "not_met": [i + 1 for i, v in enumerate(verdicts) if v != "yes"]}
    return out, EXIT_OK if cert.proved else EXIT_UNKNOWN


def cmd_sparse_scan(args, ds: Dataset):
    pts = ds.centers()
    idx = _indices(args.group, len(pts))
    rep = sparse_type_scan([pts[i] for i in idx], args.degree)
    out = rep.to_json(*_names(ds))
    out["group"] = [i + 1 for i in idx]
    out["counts"] = {"all_zero_sets": rep.all_zero_sets, "s_prime": len(rep.s_prime),
                     "s_double_prime": len(rep.s_double_prime),
                     "partition": {str(k): len(v) for k, v in sorted(rep.partition.items())},
                     "chi": len(rep.chi)}
    return out, EXIT_OK


def cmd_sparse_mc(args, ds: Dataset):
    rep = random_quadruples(ds.centers(), args.trials, args.seed, d=args.degree, jobs=args.jobs)
    out = rep.to_json()
    out["divergent_groups"] = [[i + 1 for i in g] for g in rep.divergent_groups]
    return out, EXIT_OK


def cmd_sparsest(args, ds: Dataset):
    found = sparsest_curves(ds.centers(), args.degree)
    return {"degree": args.degree,
            "curves": [{"zero_set": list(c.zero_set), **_curve(c.curve, ds)} for c in found]}, EXIT_OK


def cmd_residual_table(args, ds: Dataset):
    pts = ds.centers()
    tables = {}
    for d in range(args.dmin, args.dmax + 1):
        basis = _basis(args.basis, d)
        qs = range(args.qmin, min(args.qmax, len(basis)) + 1)
        table = min_residual_table(pts, basis, qs, norm=args.norm, jobs=args.jobs)
        entry = {"basis": [m.render() for m in basis],
                 "rows": [table[q].to_json() for q in sorted(table)]}
        if ds.kind == "segments":
            bound = residual_bound(ds.entries, basis)
            entry["residual_bound"] = _rat(bound)
            for row, q in zip(entry["rows"], sorted(table)):
                cert = infeasibility_certificate(ds.entries, basis, q, table=table)
                row["infeasible"] = cert.infeasible
                row["scaled_bound"] = _rat(cert.scaled_bound)
        tables[str(d)] = entry
    return {"basis_kind": args.basis, "norm": args.norm, "tables": tables}, EXIT_OK


def _nearest_root(f: Poly, x, y, reach) -> float | None:
    u = f.in_y(x)
    if u.is_zero():
        return 0.0
    roots = isolate_real_roots(u, Ival(y - reach, y + reach), max_width=reach / 10**6)
    if not roots:
        return None
    return float(min((r.mid - y for r in roots), key=abs))


def cmd_segments_check(args, ds: Dataset):
    ds.require("segments")
    f = parse_poly(args.curve)
    rows = []
    for i, s in enumerate(ds.entries):
        rows.append({"index": i + 1, "x": fmt_rat(s.x), "y": fmt_rat(s.y_center),
                     "crossing": segment_crossing(f, s),
                     "root_offset": _nearest_root(f, s.x, s.y_center, 1000 * s.half_width)})
    passed = sum(r["crossing"] for r in rows)
    return {"curve": f.render(), "segments": rows, "passed": passed,
            "all_pass": passed == len(rows)}, EXIT_OK


def _radius_json(rep) -> dict:
    return {"per_coefficient": [None if r is None else _rat(r) for r in rep.per_coefficient_radius],
            "overall": "unbounded" if rep.unbounded else
            (None if rep.uniqueness_radius is None else _rat(rep.uniqueness_radius))}


def _ordered_observations(ds: Dataset) -> tuple[Support, list]:
    monos, windows = ds.observations()
    s = Support.of(monos)
    pos = {m: i for i, m in enumerate(monos)}
    return s, [windows[pos[m]] for m in s]


def cmd_reconstruct(args, ds: Dataset):
    s, windows = _ordered_observations(ds)
    try:
        rep = reconstruct_integer(windows, s)
    except ReconstructionError as exc:
        return {"accepted": None, "reason": str(exc)}, EXIT_UNKNOWN
    out = rep.to_json()
    out["accepted"]["text_native"] = rep.accepted.render(*_names(ds))
    out["uniqueness_radius"] = _radius_json(uniqueness_radius(windows, rep.accepted))
    return out, EXIT_OK


def cmd_uniq_radius(args, ds: Dataset):
    s, windows = _ordered_observations(ds)
    terms = parse_poly(args.curve).terms()
    if set(terms) != set(s):
        raise CliError("curve support does not match the observed monomials")
    accepted = Poly(s, tuple(terms[m] for m in s))
    rep = uniqueness_radius(windows, accepted)
    return {"curve": accepted.render(), "monomials": [m.render() for m in s],
            **_radius_json(rep)}, EXIT_OK


def _range(text: str) -> tuple[Fraction, Fraction]:
    try:
        lo, hi = (parse_number(t) for t in text.split(","))
    except ValueError:
        raise CliError(f"bad range {text!r} (expected lo,hi)") from None
    if lo >= hi:
        raise CliError(f"empty range {text!r}")
    return lo, hi


def sample_curve(f: Poly, n: int, xr, yr) -> list[tuple[float, float]]:
    """Points on f = 0: real roots of f(x, y) in y on n evenly spaced x values."""
    (x0, x1), (y0, y1) = map(Fraction, xr), map(Fraction, yr)
    out = []
    width = (y1 - y0) / 2**30
    for i in range(n):
        x = x0 + (x1 - x0) * Fraction(i, max(n - 1, 1))
        u = f.in_y(x)
        if u.is_zero():
            continue
        for r in isolate_real_roots(u, Ival(y0, y1), max_width=width):
            out.append((float(x), float(r.mid)))
    return out


def _plot(points, path: str, title: str):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter([p[0] for p in points], [p[1] for p in points], s=2)
    ax.set_title(title)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_sample_curve(args, _ds):
    f = parse_poly(args.curve)
    pts = sample_curve(f, args.n, _range(args.xrange), _range(args.yrange))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in pts:
        w.writerow([repr(x), repr(y)])
    if args.plot:
        _plot(pts, args.plot, f.render())
    return None, EXIT_OK


def cmd_fixtures(args, _ds):
    if args.action == "list":
        out = {}
        for name in fixture_names():
            ds = load_dataset(f"fixtures:{name}")
            out[name] = {"kind": ds.kind, "entries": len(ds), "source": ds.metadata.get("source")}
        return out, EXIT_OK
    if not args.name:
        raise CliError("fixtures emit needs a fixture name")
    sys.stdout.write(emit(load_dataset(f"fixtures:{args.name}"), args.format or "json"))
    return None, EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="worker processes/threads")
    common.add_argument("--tolerance", help="relative width for observation windows")
    common.add_argument("--format", choices=("json", "csv"),
                        help="dataset format (default: by suffix); output format for fixtures emit")

    p = _Parser(prog="curveinterp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help, dataset=True):
        sp = sub.add_parser(name, parents=[common], help=help)
        if dataset:
            sp.add_argument("dataset", help="file path or fixtures:<name>")
        sp.set_defaults(fn=fn, needs_dataset=dataset)
        return sp

    sp = add("mindeg", cmd_mindeg, "minimal interpolation degree and curves")
    sp.add_argument("--dmax", type=int)

    sp = add("fit", cmd_fit, "curves through the points, or unit-sphere least squares")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--support", help='comma-separated monomials, e.g. "y^2,x^3"')
    sp.add_argument("--unit-sphere", action="store_true")

    sp = add("certify-box", cmd_certify_box, "prove no curve of degree <= d meets all boxes")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--subset", help="1-based box indices to certify")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--random-subsets", type=int, default=8)
    sp.add_argument("--max-depth", type=int, default=12)
    sp.add_argument("--curve", help="also test which boxes this curve meets")

    sp = add("sparse-scan", cmd_sparse_scan, "sparse types of a 4-point group")
    sp.add_argument("--group", required=True, help="1-based indices, e.g. 1,2,3,4")
    sp.add_argument("--degree", type=int, default=3)

    sp = add("sparse-mc", cmd_sparse_mc, "sparse types of random groups against the first four points")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--degree", type=int, default=3)

    sp = add("sparsest", cmd_sparsest, "curves with the fewest monomials")
    sp.add_argument("--degree", type=int, required=True)

    sp = add("residual-table", cmd_residual_table, "minimal residuals over q-term supports")
    sp.add_argument("--basis", default="even", choices=("even", "graded"))
    sp.add_argument("--dmin", type=int, default=2)
    sp.add_argument("--dmax", type=int, default=4)
    sp.add_argument("--qmin", type=int, default=2)
    sp.add_argument("--qmax", type=int, default=15)
    sp.add_argument("--norm", default="max", choices=("max", "unit"))

    sp = add("segments-check", cmd_segments_check, "exact segment crossing for a curve")
    sp.add_argument("--curve", required=True)

    add("reconstruct", cmd_reconstruct, "integer curve from coefficient observations")

    sp = add("uniq-radius", cmd_uniq_radius, "uniqueness radius of an integer curve")
    sp.add_argument("--curve", required=True)

    sp = add("sample-curve", cmd_sample_curve, "CSV samples of a curve", dataset=False)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--xrange", default="-2,2")
    sp.add_argument("--yrange", default="-2,2")
    sp.add_argument("--plot", metavar="FILE", help="also write a PNG scatter plot")

    sp = add("fixtures", cmd_fixtures, "list or emit shipped fixtures", dataset=False)
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        ds = None
        if args.needs_dataset:
            ds = load_dataset(args.dataset, args.format, args.tolerance)
        out, code = args.fn(args, ds)
    except (CliError, DatasetError, ValueError, ZeroDivisionError) as exc:
        print(f"curveinterp: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if out is not None:
        sys.stdout.write(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
