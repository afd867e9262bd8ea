import numpy as np
import pytest

from scalenorm.grid import (
    LN2,
    BoundaryFunction,
    HalfSpaceField,
    load_field,
    make_grid,
    save_field,
)


def test_reference_layout(grid):
    assert (grid.d, grid.L, grid.n_x, grid.s_oct) == (1, 64.0, 1024, 8)
    assert grid.J == 56 and grid.n_t == 57
    assert grid.h == 1.0 / 16.0 and grid.x_weight == 1.0 / 16.0
    assert grid.t_weight == LN2 / 8.0
    assert float(grid.t_nodes[0]) == 0.0625
    assert float(grid.t_nodes[-1]) == 8.0
    assert grid.field_shape == (57, 1024)


def test_octave_steps_are_exact_doublings(grid):
    ratio = grid.t_nodes[8:] / grid.t_nodes[:-8]
    assert np.allclose(ratio, 2.0, rtol=1e-12)


def test_scale_index_round_trip(grid):
    for j in (0, 8, 31, 56):
        assert grid.scale_index(float(grid.t_nodes[j])) == j
    with pytest.raises(ValueError, match="not a scale node"):
        grid.scale_index(0.07)


def test_make_grid_rejects_bad_parameters():
    with pytest.raises(ValueError, match="d must be 1 or 2"):
        make_grid(3, 64.0, 1024, 0.0625, 8.0, 8)
    with pytest.raises(ValueError, match="n_x not power of two"):
        make_grid(1, 64.0, 1000, 0.0625, 8.0, 8)
    with pytest.raises(ValueError, match="s_oct must be an integer >= 4"):
        make_grid(1, 64.0, 1024, 0.0625, 8.0, 2)
    with pytest.raises(ValueError, match="0 < t_min < t_max"):
        make_grid(1, 64.0, 1024, 8.0, 0.0625, 8)
    with pytest.raises(ValueError, match="too large"):
        make_grid(1, 64.0, 1024, 0.0625, 9.0, 8)


def test_margin_equality_is_allowed():
    g = make_grid(1, 64.0, 1024, 0.0625, 8.0, 8)  # 2*t_max == L/4 exactly
    assert g.t_max == 8.0


def test_field_validation(grid):
    with pytest.raises(ValueError, match="shape"):
        HalfSpaceField(grid=grid, values=np.zeros((3, 3)))
    with pytest.raises(ValueError, match="non-finite"):
        BoundaryFunction(grid=grid, samples=np.full(grid.spatial_shape, np.nan))


def test_field_samples_are_read_only(grid):
    F = HalfSpaceField(grid=grid, values=np.zeros(grid.field_shape))
    with pytest.raises(ValueError):
        F.values[0, 0] = 1.0


def test_save_load_round_trip_whole_corpus(tmp_path, grid, fields):
    for fid, F in fields.items():
        path = tmp_path / f"{fid}.hsf"
        save_field(F, str(path))
        back = load_field(str(path))
        assert back.grid == grid
        assert np.array_equal(back.values, F.values)


def test_load_rejects_corruption(tmp_path, grid):
    F = HalfSpaceField(grid=grid, values=np.zeros(grid.field_shape))
    path = tmp_path / "f.hsf"
    save_field(F, str(path))
    blob = path.read_bytes()

    bad = tmp_path / "bad.hsf"
    bad.write_bytes(b"XXXX" + blob[4:])
    with pytest.raises(ValueError, match="bad magic"):
        load_field(str(bad))

    trunc = tmp_path / "trunc.hsf"
    trunc.write_bytes(blob[:-16])
    with pytest.raises(ValueError, match="truncated payload"):
        load_field(str(trunc))

    extra = tmp_path / "extra.hsf"
    extra.write_bytes(blob + b"\x00" * 8)
    with pytest.raises(ValueError, match="trailing data"):
        load_field(str(extra))


def test_save_rejects_unwritable_header_combination(tmp_path):
    # a loadable file must re-derive its own grid; mismatched n_t is caught
    g = make_grid(1, 64.0, 256, 0.25, 2.0, 8)
    F = HalfSpaceField(grid=g, values=np.zeros(g.field_shape))
    path = tmp_path / "f.hsf"
    save_field(F, str(path))
    blob = bytearray(path.read_bytes())
    # header field 3 (u32 n_t) sits at offset 4 + 4 + 4
    blob[12:16] = (99).to_bytes(4, "little")
    bad = tmp_path / "badnt.hsf"
    bad.write_bytes(bytes(blob))
    with pytest.raises(ValueError, match="inconsistent header"):
        load_field(str(bad))
