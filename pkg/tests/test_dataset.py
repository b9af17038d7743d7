import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveinterp.boxcert import Box
from curveinterp.dataset import (KINDS, DatasetError, dumps, emit, fixture_names, from_csv,
                                 from_json, load_dataset, to_json)
from curveinterp.exactnum import Ival, as_ival
from curveinterp.polybasis import Monomial
from curveinterp.segrecon import Segment

from conftest import rationals

FIXTURES = ["approx_poly", "barycenters16", "circle6", "ellipse16", "example1", "kepler38",
            "planets6"]


def test_fixture_names():
    assert fixture_names() == FIXTURES


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trips(name):
    ds = load_dataset(f"fixtures:{name}")
    assert ds.kind in KINDS and len(ds) > 0
    back = from_json(json.loads(emit(ds, "json")))
    assert back.entries == ds.entries and back.names == ds.names
    csv_back = from_csv(emit(ds, "csv"))
    assert csv_back.entries == ds.entries and csv_back.names == ds.names


def test_fixture_golden_values():
    k = load_dataset("fixtures:kepler38")
    assert len(k) == 38 and k.names[0] == "Mercury" and k.names[-1] == "Makemake"
    assert k.entries[2] == (1, 1)
    assert k.boxes()[0].half_widths == (Fraction(1, 1000), Fraction(1, 100))
    e = load_dataset("fixtures:ellipse16")
    assert e.entries[0] == Segment(Fraction(1, 16), Fraction("4.00391006468634"), Fraction(1, 2 * 10**14))
    assert e.entries[-1].x == 1
    b = load_dataset("fixtures:barycenters16")
    assert b.entries[15] == (1, Fraction("5.196152422707"))
    ex = load_dataset("fixtures:example1")
    assert len(ex) == 22 and all(as_ival(v).width <= Fraction(1, 10**30) for p in ex.entries for v in p)
    assert ex.entries[0] == (0, 1)
    pl = load_dataset("fixtures:planets6")
    assert pl.entries[2] == Box(1, 1, 1, 1)


def test_observations():
    ds = load_dataset("fixtures:approx_poly")
    monos, windows = ds.observations()
    assert monos[0] == Monomial(4, 0)
    assert windows[0].contains(432) and windows[0].contains(Fraction("431.9999989"))
    # the tolerance argument overrides the metadata value
    tight = load_dataset("fixtures:approx_poly", tolerance="1/10000000000")
    assert not tight.observations()[1][0].contains(432)


def test_points_with_intervals():
    ds = from_json({"kind": "points", "entries": [{"x": ["1", "2"], "y": "3"}]})
    assert ds.entries == [(Ival(1, 2), Fraction(3))]
    assert ds.centers() == [(Ival(1, 2), Fraction(3))]


def test_box_forms_agree():
    a = from_json({"kind": "boxes", "entries": [{"x_lo": "0", "x_hi": "1", "y_lo": "2", "y_hi": "4"}]})
    b = from_json({"kind": "boxes", "entries": [{"x": "1/2", "y": "3", "hx": "1/2", "hy": "1"}]})
    assert a.entries == b.entries


def test_points_as_boxes_need_half_widths():
    ds = from_json({"kind": "points", "entries": [{"x": "1", "y": "2"}]})
    with pytest.raises(DatasetError):
        ds.boxes()
    ds = from_json({"kind": "points", "entries": [{"x": "1", "y": "2"}],
                    "metadata": {"box_half_widths": ["1/10", "1/5"]}})
    assert ds.boxes() == [Box(Fraction(9, 10), Fraction(11, 10), Fraction(9, 5), Fraction(11, 5))]


@pytest.mark.parametrize("doc, where", [
    ({"kind": "points", "entries": []}, "non-empty"),
    ({"kind": "lines", "entries": [{"x": "1"}]}, "kind must be"),
    ({"kind": "points", "entries": [{"x": "1"}]}, "entries[0]"),
    ({"kind": "points", "entries": [{"x": "1", "y": "2"}, {"x": "a", "y": "2"}]}, "entries[1].x"),
    ({"kind": "points", "entries": [{"x": 1.5, "y": "2"}]}, "strings or integers"),
    ({"kind": "points", "entries": [{"x": "1", "y": "2", "kind": "boxes"}]}, "mixed kinds"),
    ({"kind": "points", "entries": [{"x": "1", "y": "2", "name": "a"}, {"x": "2", "y": "2"}]}, "name"),
    ({"kind": "segments", "entries": [{"x": "1", "y": "2"}]}, "delta"),
    ({"kind": "points", "entries": [{"x": ["2", "1"], "y": "2"}]}, "out of order"),
    ([1, 2], "top level"),
])
def test_json_errors(doc, where):
    with pytest.raises(DatasetError) as exc:
        from_json(doc, "t.json")
    assert where in str(exc.value)


def test_csv_parsing():
    text = "# comment\nname,x,y\nA,1/2,3\nB,0.25..0.5,1\n"
    ds = from_csv(text)
    assert ds.kind == "points" and ds.names == ["A", "B"]
    assert ds.entries[1] == (Ival(Fraction(1, 4), Fraction(1, 2)), Fraction(1))
    with pytest.raises(DatasetError):
        from_csv("u,v\n1,2\n")
    with pytest.raises(DatasetError):
        from_csv("x,y\n1\n")
    with pytest.raises(DatasetError):
        from_csv("x,y\n")
    assert from_csv("x,y,delta\n1,2,1/10\n").kind == "segments"


def test_load_dataset_files(tmp_path):
    p = tmp_path / "d.json"
    p.write_text('{"kind": "points", "entries": [{"x": "1", "y": "2"}]}')
    assert load_dataset(str(p)).entries == [(1, 2)]
    q = tmp_path / "d.csv"
    q.write_text("x,y\n1,2\n")
    assert load_dataset(str(q)).entries == [(1, 2)]
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    with pytest.raises(DatasetError, match="bad.json:1"):
        load_dataset(str(bad))
    with pytest.raises(DatasetError):
        load_dataset(str(tmp_path / "missing.json"))
    with pytest.raises(DatasetError):
        load_dataset("fixtures:nope")


def test_fixture_directory_override(tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text('{"kind": "points", "entries": [{"x": "3", "y": "4"}]}')
    monkeypatch.setenv("CURVEINTERP_FIXTURES", str(tmp_path))
    assert fixture_names() == ["mine"]
    assert load_dataset("fixtures:mine").entries == [(3, 4)]


def test_dumps_is_sorted_and_stable():
    out = dumps({"b": 1, "a": ["1/2"]})
    assert out == '{\n  "a": [\n    "1/2"\n  ],\n  "b": 1\n}\n'


@given(st.lists(st.tuples(rationals(10**4, 10**3), rationals(10**4, 10**3)), min_size=1, max_size=10),
       st.sampled_from(["json", "csv"]))
def test_points_round_trip(pts, fmt):
    ds = from_json({"kind": "points", "entries": [{"x": str(x), "y": str(y)} for x, y in pts]})
    text = emit(ds, fmt)
    back = from_json(json.loads(text)) if fmt == "json" else from_csv(text)
    assert back.entries == ds.entries
    assert emit(back, fmt) == text
    assert to_json(back) == to_json(ds)
