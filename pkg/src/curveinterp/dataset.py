"""Datasets on disk: JSON and CSV schemas, exact loading, emission and the
shipped fixtures.

Every number is stored as a string (integer, fraction "p/q" or decimal)
and parsed exactly; a non-rational coordinate is stored as a pair
["lo", "hi"] and loads as an interval.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .boxcert import Box
from .exactnum import Ival, fmt_rat, parse_number
from .polybasis import Monomial, parse_poly
from .segrecon import Segment

KINDS = ("points", "boxes", "segments", "observations")
FIXTURE_ENV = "CURVEINTERP_FIXTURES"
FIXTURE_PREFIX = "fixtures:"

_CSV_COLUMNS = {
    "points": ("x", "y"),
    "boxes": ("x_lo", "x_hi", "y_lo", "y_hi"),
    "segments": ("x", "y", "delta"),
    "observations": ("monomial", "value"),
}


class DatasetError(ValueError):
    """Schema or parse error; the message carries the location."""


@dataclass
class Dataset:
    kind: str
    entries: list
    names: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DatasetError(f"unknown dataset kind {self.kind!r}")
        if self.names and len(self.names) != len(self.entries):
            raise DatasetError("names and entries differ in length")

    def __len__(self):
        return len(self.entries)

    def require(self, *kinds: str) -> "Dataset":
        if self.kind not in kinds:
            raise DatasetError(f"expected a {' or '.join(kinds)} dataset, got {self.kind}")
        return self

    def name_of(self, i: int) -> str:
        return self.names[i] if self.names else f"P{i + 1}"

    def centers(self) -> list[tuple]:
        """Points for any geometric kind (box centers, segment centers)."""
        if self.kind == "points":
            return list(self.entries)
        if self.kind == "boxes":
            return [b.center for b in self.entries]
        if self.kind == "segments":
            return [(s.x, s.y_center) for s in self.entries]
        raise DatasetError("observations have no points")

    def boxes(self) -> list[Box]:
        """Boxes for a box dataset, or boxes of the given half-widths
        (metadata ``box_half_widths``) around exact points."""
        if self.kind == "boxes":
            return list(self.entries)
        if self.kind == "points" and "box_half_widths" in self.metadata:
            hx, hy = (parse_number(v) for v in self.metadata["box_half_widths"])
            return [Box.around(x, y, hx, hy) for x, y in self.entries]
        raise DatasetError("dataset does not describe boxes")

    def observations(self):
        """(support, windows) of an observation dataset."""
        self.require("observations")
        return [m for m, _ in self.entries], [v for _, v in self.entries]


# ---------------------------------------------------------------- parsing


def _num(value, where: str):
    if isinstance(value, list):
        if len(value) != 2:
            raise DatasetError(f"{where}: interval needs exactly two endpoints")
        lo, hi = (_num(v, where) for v in value)
        if lo > hi:
            raise DatasetError(f"{where}: interval endpoints out of order")
        return Ival(lo, hi)
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DatasetError(f"{where}: numbers must be strings or integers, got {value!r}")
    try:
        return parse_number(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise DatasetError(f"{where}: {exc}") from None


def _exact(value, where: str) -> Fraction:
    v = _num(value, where)
    if isinstance(v, Ival):
        raise DatasetError(f"{where}: an exact number is required here")
    return v


def _monomial(text: str, where: str) -> Monomial:
    try:
        f = parse_poly(text)
    except ValueError as exc:
        raise DatasetError(f"{where}: {exc}") from None
    terms = f.terms()
    if len(terms) != 1 or list(terms.values()) != [1]:
        raise DatasetError(f"{where}: {text!r} is not a single monomial")
    return next(iter(terms))


def _entry(kind: str, rec: dict, where: str, delta):
    def get(key):
        if key not in rec:
            raise DatasetError(f"{where}: missing field {key!r}")
        return rec[key]

    if kind == "points":
        return (_num(get("x"), f"{where}.x"), _num(get("y"), f"{where}.y"))
    if kind == "boxes":
        if "x_lo" in rec:
            vals = [_exact(get(k), f"{where}.{k}") for k in _CSV_COLUMNS["boxes"]]
            try:
                return Box(*vals)
            except ValueError as exc:
                raise DatasetError(f"{where}: {exc}") from None
        hx = _exact(get("hx"), f"{where}.hx")
        hy = _exact(rec.get("hy", get("hx")), f"{where}.hy")
        return Box.around(_exact(get("x"), f"{where}.x"), _exact(get("y"), f"{where}.y"), hx, hy)
    if kind == "segments":
        d = rec.get("delta", delta)
        if d is None:
            raise DatasetError(f"{where}: segment without delta (no shared delta either)")
        try:
            return Segment(_exact(get("x"), f"{where}.x"), _exact(get("y"), f"{where}.y"),
                           _exact(d, f"{where}.delta"))
        except ValueError as exc:
            raise DatasetError(f"{where}: {exc}") from None
    value = _num(get("value"), f"{where}.value")
    return (_monomial(str(get("monomial")), f"{where}.monomial"), value)


def _check_windows(ds: Dataset, tolerance) -> Dataset:
    """Observation values given as single numbers become windows of relative
    width ``tolerance`` (metadata ``tolerance`` when not given)."""
    if ds.kind != "observations":
        return ds
    tol = tolerance if tolerance is not None else ds.metadata.get("tolerance")
    out = []
    for m, v in ds.entries:
        if not isinstance(v, Ival):
            if tol is None:
                v = Ival(v, v)
            else:
                rel = parse_number(str(tol))
                v = Ival.around(v, abs(v) * rel)
        out.append((m, v))
    ds.entries = out
    return ds


def from_json(doc, source: str = "<json>", tolerance=None) -> Dataset:
    if not isinstance(doc, dict):
        raise DatasetError(f"{source}: top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DatasetError(f"{source}: kind must be one of {', '.join(KINDS)}, got {kind!r}")
    entries = doc.get("entries")
    if not isinstance(entries, list) or not entries:
        raise DatasetError(f"{source}: entries must be a non-empty list")
    delta = doc.get("delta")
    parsed, names = [], []
    for i, rec in enumerate(entries):
        where = f"{source}: entries[{i}]"
        if not isinstance(rec, dict):
            raise DatasetError(f"{where}: entry must be an object")
        if "kind" in rec and rec["kind"] != kind:
            raise DatasetError(f"{where}: mixed kinds ({rec['kind']} in a {kind} dataset)")
        parsed.append(_entry(kind, rec, where, delta))
        names.append(rec.get("name"))
    if all(n is None for n in names):
        names = []
    elif any(n is None for n in names):
        raise DatasetError(f"{source}: either every entry has a name or none does")
    ds = Dataset(kind, parsed, names, dict(doc.get("metadata", {})))
    if delta is not None:
        ds.metadata.setdefault("delta", str(delta))
    return _check_windows(ds, tolerance)


def from_csv(text: str, source: str = "<csv>", kind: str | None = None,
             tolerance=None) -> Dataset:
    """CSV with a header row; '#' lines are comments.

    The kind follows from the header columns unless given.  Interval
    coordinates are written "lo..hi"; an optional ``name`` column is kept.
    """
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DatasetError(f"{source}: empty file")
    header_line, header = lines[0][0], next(csv.reader([lines[0][1]]))
    header = [h.strip() for h in header]
    cols = set(header) - {"name", "kind"}
    if kind is None:
        matches = [k for k, c in _CSV_COLUMNS.items() if cols == set(c)]
        if len(matches) != 1:
            raise DatasetError(f"{source}:{header_line}: cannot infer dataset kind from header {header}")
        kind = matches[0]
    if not lines[1:]:
        raise DatasetError(f"{source}: no entries")
    docs = []
    for n, ln in lines[1:]:
        row = next(csv.reader([ln]))
        if len(row) != len(header):
            raise DatasetError(f"{source}:{n}: expected {len(header)} fields, got {len(row)}")
        rec = {}
        for h, v in zip(header, row):
            v = v.strip()
            if h in ("name", "kind", "monomial"):
                rec[h] = v
            elif ".." in v:
                rec[h] = v.split("..", 1)
            elif v:
                rec[h] = v
        docs.append((n, rec))
    parsed, names = [], []
    for n, rec in docs:
        if "kind" in rec and rec["kind"] != kind:
            raise DatasetError(f"{source}:{n}: mixed kinds ({rec['kind']} in a {kind} dataset)")
        parsed.append(_entry(kind, rec, f"{source}:{n}", None))
        names.append(rec.get("name"))
    if not any(names):
        names = []
    return _check_windows(Dataset(kind, parsed, names, {}), tolerance)


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(__file__).with_name("fixtures")


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json"))


def fixture_path(name: str) -> Path:
    path = fixture_dir() / f"{name}.json"
    if not path.exists():
        raise DatasetError(f"unknown fixture {name!r} (known: {', '.join(fixture_names())})")
    return path


def load_dataset(path, format: str | None = None, tolerance=None) -> Dataset:
    """Load a dataset from a file path or a ``fixtures:<name>`` reference."""
    path = str(path)
    if path.startswith(FIXTURE_PREFIX):
        path = str(fixture_path(path[len(FIXTURE_PREFIX):]))
    p = Path(path)
    if not p.exists():
        raise DatasetError(f"{path}: no such file")
    if format is None:
        format = "csv" if p.suffix.lower() == ".csv" else "json"
    text = p.read_text()
    if format == "csv":
        return from_csv(text, path, tolerance=tolerance)
    if format != "json":
        raise DatasetError(f"unknown format {format!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return from_json(doc, path, tolerance)


# ---------------------------------------------------------------- emission


def _fmt(v):
    return v.to_json() if isinstance(v, Ival) else fmt_rat(v)


def _record(kind: str, e) -> dict:
    if kind == "points":
        return {"x": _fmt(e[0]), "y": _fmt(e[1])}
    if kind == "boxes":
        return e.to_json()
    if kind == "segments":
        return {"x": fmt_rat(e.x), "y": fmt_rat(e.y_center), "delta": fmt_rat(e.half_width)}
    m, v = e
    return {"monomial": m.render(), "value": _fmt(v)}


def to_json(ds: Dataset) -> dict:
    entries = []
    for i, e in enumerate(ds.entries):
        rec = _record(ds.kind, e)
        if ds.names:
            rec["name"] = ds.names[i]
        entries.append(rec)
    doc = {"kind": ds.kind, "entries": entries,
           "metadata": {k: v for k, v in ds.metadata.items() if k != "delta"}}
    if "delta" in ds.metadata:
        doc["delta"] = ds.metadata["delta"]
    return doc


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(ds: Dataset, format: str = "json") -> str:
    if format == "json":
        return dumps(to_json(ds))
    if format != "csv":
        raise DatasetError(f"unknown format {format!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(_CSV_COLUMNS[ds.kind])
    w.writerow((["name"] if ds.names else []) + cols)
    for i, e in enumerate(ds.entries):
        rec = _record(ds.kind, e)
        row = [f"{rec[c][0]}..{rec[c][1]}" if isinstance(rec[c], list) else rec[c]
               for c in cols]
        w.writerow(([ds.names[i]] if ds.names else []) + row)
    return buf.getvalue()
