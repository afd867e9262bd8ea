import numpy as np
import pytest

from scalenorm.corpus import (
    BOUNDARY_KINDS,
    KINDS,
    CorpusEntry,
    SeededStream,
    boundary_entries,
    generate_boundary,
    generate_halfspace,
    parse_manifest_text,
)


def test_manifest_shape(entries):
    assert len(entries) == 20
    expect = [f"b{i:02d}" for i in range(1, 11)] + [f"h{i:02d}" for i in range(1, 11)]
    assert sorted(entries) == expect
    assert all(e.kind in KINDS for e in entries.values())


def test_boundary_panel(entries):
    panel = boundary_entries(list(entries.values()))
    assert [e.id for e in panel] == [f"b{i:02d}" for i in range(1, 11)]
    assert all(e.kind in BOUNDARY_KINDS for e in panel)


def test_stream_matches_published_reference_outputs():
    # reference outputs of the standard SplitMix64 mixing function
    s = SeededStream(0)
    assert [s.next_u64() for _ in range(3)] == [
        16294208416658607535,
        7960286522194355700,
        487617019471545679,
    ]
    s = SeededStream(1234567)
    assert [s.next_u64() for _ in range(2)] == [
        6457827717110365317,
        3203168211198807973,
    ]


def test_stream_float_range_and_mean():
    s = SeededStream(42)
    vals = [s.next_float() for _ in range(10000)]
    assert min(vals) >= 0.0 and max(vals) < 1.0
    assert abs(sum(vals) / len(vals) - 0.5) < 0.02


def test_generation_is_deterministic(entries, grid):
    a = generate_boundary(entries["b08"], grid)
    b = generate_boundary(entries["b08"], grid)
    assert np.array_equal(a.samples, b.samples)
    ha = generate_halfspace(entries["h05"], grid)
    hb = generate_halfspace(entries["h05"], grid)
    assert np.array_equal(ha.values, hb.values)


def test_boundary_samples_are_centered_and_peak_one(entries, grid):
    for eid in ("b01", "b04", "b06", "b08", "b09"):  # one entry per kind
        f = generate_boundary(entries[eid], grid)
        assert abs(float(f.samples.mean())) < 1e-12
        assert float(np.max(np.abs(f.samples))) == pytest.approx(1.0, abs=1e-12)


def test_halfspace_fields_peak_one(fields):
    for fid in ("h01", "h03", "h05", "h08", "h10"):
        assert float(np.max(np.abs(fields[fid].values))) == pytest.approx(
            1.0, abs=1e-12
        )


def test_indicator_field_covers_one_box(fields):
    F = fields["h06"]  # unit-side cube, slab 1/2 <= t < 1
    assert set(np.unique(F.values).tolist()) <= {0.0, 1.0}
    rows = np.unique(np.nonzero(F.values)[0])
    assert rows.tolist() == list(range(24, 32))
    cols = np.unique(np.nonzero(F.values)[1])
    assert cols.size == 16 and cols.tolist() == list(range(336, 352))


def test_manifest_parse_errors():
    with pytest.raises(ValueError, match="version"):
        parse_manifest_text("b01 gaussian 1 cx=0.5 w=0.06\n")
    with pytest.raises(ValueError, match="malformed manifest line"):
        parse_manifest_text("version 1\nb01 gaussian\n")
    with pytest.raises(ValueError, match="duplicate corpus id"):
        parse_manifest_text(
            "version 1\nb01 gaussian 1 cx=0.5 w=0.06\nb01 bump 2 cx=0.5 w=0.06\n"
        )
    with pytest.raises(ValueError, match="malformed parameter"):
        parse_manifest_text("version 1\nb01 gaussian 1 cx0.5\n")
    with pytest.raises(ValueError, match="unknown corpus kind"):
        CorpusEntry(id="x", kind="mystery", seed=1)


def test_manifest_round_trips_through_text(entries):
    lines = ["version 1"] + [e.manifest_line() for e in entries.values()]
    version, back = parse_manifest_text("\n".join(lines))
    assert version == 1
    assert {e.id: e for e in back} == entries


def test_missing_parameter_is_named(grid):
    e = CorpusEntry(id="x1", kind="gaussian", seed=1, params={"cx": 0.5})
    with pytest.raises(ValueError, match="missing parameter 'w'"):
        generate_boundary(e, grid)


def test_indicator_alignment_errors(grid):
    too_big = CorpusEntry(
        id="x2", kind="whitney_indicator", seed=1, params={"gen": 7, "pos": 0.0}
    )
    with pytest.raises(ValueError, match="does not tile"):
        generate_halfspace(too_big, grid)
    too_fine = CorpusEntry(
        id="x3", kind="whitney_indicator", seed=1, params={"gen": -5, "pos": 0.0}
    )
    with pytest.raises(ValueError, match="finer than the spatial grid"):
        generate_halfspace(too_fine, grid)
