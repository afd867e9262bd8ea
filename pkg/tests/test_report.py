"""Report container, CSV/JSON emitters, and figure rendering."""

import csv
import json
import math

import pytest

from scalenorm.report import (
    EquivalenceReport,
    ReportRow,
    fmt17,
    render_bench_figure,
    render_overview_figure,
    write_reports_csv,
    write_summary,
)


def test_fmt17_round_trips_doubles():
    for v in (1.0 / 3.0, 0.1, 1e-17, 123456.789, 5.2882457795071183):
        assert float(fmt17(v)) == v
    assert fmt17(2.0) == "2"


def test_row_ratio_conventions():
    assert ReportRow("s", "f", 0.0, 0.0).ratio == 1.0
    assert ReportRow("s", "f", 3.0, 2.0).ratio == 1.5


def test_add_rejects_degenerate_rows():
    rep = EquivalenceReport(name="demo")
    with pytest.raises(ValueError, match="degenerate ratio for f1"):
        rep.add("s", "f1", 1.0, 0.0)
    with pytest.raises(ValueError, match="degenerate"):
        rep.add("s", "f2", 0.0, 1.0)
    with pytest.raises(ValueError, match="degenerate"):
        rep.add("s", "f3", math.nan, 1.0)
    assert rep.rows == []


def _demo_report():
    rep = EquivalenceReport(name="demo")
    rep.add("(p=2, q=3)", "a", 0.5, 1.0)
    rep.add("(p=2, q=3)", "b", 1.0, 1.0)
    rep.add("(p=2, q=3)", "c", 2.0, 1.0)
    return rep


def test_envelope_statistics():
    rep = _demo_report()
    assert rep.min_ratio == 0.5
    assert rep.max_ratio == 2.0
    assert rep.median_ratio == 1.0
    assert rep.envelope_width == 4.0
    d = rep.summary_dict()
    assert d["check"] == "demo"
    assert d["rows"] == 3
    assert set(d) == {
        "check", "rows", "min_ratio", "max_ratio", "median_ratio",
        "envelope_width", "notes",
    }
    assert d["notes"]


def test_csv_emitter_quotes_and_appends(tmp_path):
    path = str(tmp_path / "rows.csv")
    rep = _demo_report()
    write_reports_csv([rep], path)
    write_reports_csv([rep], path)
    with open(path, encoding="ascii", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["check_name", "spec", "field_id", "lhs", "rhs", "ratio"]
    assert len(rows) == 1 + 2 * 3
    # the comma inside the label column survives the round trip
    assert all(len(r) == 6 for r in rows)
    assert rows[1][1] == "(p=2, q=3)"
    assert float(rows[1][5]) == 0.5


def test_summary_emitter(tmp_path):
    path = str(tmp_path / "summary.json")
    write_summary([_demo_report().summary_dict()], path)
    with open(path, encoding="ascii") as fh:
        data = json.load(fh)
    assert data[0]["check"] == "demo"
    assert data[0]["envelope_width"] == 4.0


def test_overview_figure(tmp_path):
    path = tmp_path / "overview.png"
    render_overview_figure([_demo_report()], str(path))
    assert path.exists() and path.stat().st_size > 0
    skip = tmp_path / "empty.png"
    render_overview_figure([EquivalenceReport(name="none")], str(skip))
    assert not skip.exists()


def test_bench_figure(tmp_path):
    path = tmp_path / "bench.png"
    rows = [
        {"n_x": 1024, "naive_ns": 5.0e6, "fast_ns": 1.0e5},
        {"n_x": 4096, "naive_ns": 2.0e7, "fast_ns": 3.0e5},
    ]
    render_bench_figure(rows, str(path))
    assert path.exists() and path.stat().st_size > 0
