import math

import numpy as np
import pytest

from scalenorm.exponents import SpaceSpec
from scalenorm.grid import HalfSpaceField, make_grid
from scalenorm.whitney import (
    DEFAULT_WINDOW,
    WhitneyParams,
    ball_halfwidths,
    ball_node_count,
    box_average,
    box_average_fast,
    change_angle_ratio,
    retained_slices,
    scale_window_offsets,
)


def test_window_validation():
    with pytest.raises(ValueError, match="0 < a < b"):
        WhitneyParams(1.0, 0.5, 1.0)
    with pytest.raises(ValueError, match="c > 0"):
        WhitneyParams(0.5, 1.0, 0.0)


def test_scale_window_offsets_reference_values():
    assert scale_window_offsets(DEFAULT_WINDOW, 8) == (-7, -1)
    assert scale_window_offsets(WhitneyParams(0.25, 2.0, 2.0), 8) == (-15, 7)
    assert scale_window_offsets(WhitneyParams(0.5, 2.0, 0.5), 8) == (-7, 7)


def test_scale_window_needs_a_node():
    with pytest.raises(ValueError, match="smallest valid s_oct is 70"):
        scale_window_offsets(WhitneyParams(1.0, 1.01, 1.0), 8)


def test_ball_halfwidths_on_the_line(grid):
    h = grid.h
    assert int(ball_halfwidths(grid, 2.5 * h)[0]) == 2
    # node exactly on the boundary stays outside (open ball)
    assert int(ball_halfwidths(grid, 3.0 * h)[0]) == 2
    # the center node always qualifies
    assert int(ball_halfwidths(grid, 0.25 * h)[0]) == 0
    assert ball_node_count(grid, 2.5 * h) == 5


def test_ball_matches_direct_count_in_the_plane():
    g2 = make_grid(2, 16.0, 16, 0.25, 2.0, 4)
    for radius in (1.3, 2.05, 3.9):  # radii off the lattice distances
        direct = sum(
            1
            for o1 in range(-8, 8)
            for o2 in range(-8, 8)
            if (o1 * o1 + o2 * o2) * g2.h * g2.h < radius * radius
        )
        assert ball_node_count(g2, radius) == direct


def test_retained_slices_reference(grid):
    kept, dropped = retained_slices(grid, DEFAULT_WINDOW)
    assert kept.tolist() == list(range(8, 57))
    assert dropped.tolist() == list(range(0, 8))
    wide, _ = retained_slices(grid, WhitneyParams(0.25, 2.0, 2.0))
    assert wide.tolist() == list(range(16, 49))


def test_fast_path_matches_reference_on_the_line(fields):
    F = fields["h03"]
    for r in (1.0, 2.0, math.inf):
        for beta in (-1.0, 0.5):
            ref = box_average(F, r, beta)
            fast = box_average_fast(F, r, beta)
            assert np.array_equal(ref.retained, fast.retained)
            scale = float(np.max(ref.values))
            dev = float(np.max(np.abs(ref.values - fast.values)))
            assert dev <= 1e-12 * scale


def test_fast_path_matches_reference_in_the_plane():
    g2 = make_grid(2, 16.0, 16, 0.25, 2.0, 4)
    rng = np.random.default_rng(7)
    F = HalfSpaceField(grid=g2, values=rng.standard_normal(g2.field_shape))
    for r in (1.0, 2.0, math.inf):
        ref = box_average(F, r, 0.3)
        fast = box_average_fast(F, r, 0.3)
        scale = float(np.max(ref.values))
        assert float(np.max(np.abs(ref.values - fast.values))) <= 1e-12 * scale


def test_supremum_average_is_bitwise_reproducible(fields):
    F = fields["h01"]
    ref = box_average(F, math.inf, -0.5)
    fast = box_average_fast(F, math.inf, -0.5)
    assert np.array_equal(ref.values, fast.values)


def test_exact_zeros_survive_the_fast_path(grid):
    vals = np.zeros(grid.field_shape)
    vals[:, : grid.n_x // 2] = 1.0
    F = HalfSpaceField(grid=grid, values=vals)
    avg = box_average_fast(F, 2.0, 0.0)
    # a box far inside the vanishing half stays exactly zero
    assert avg.values[0, 3 * grid.n_x // 4] == 0.0


def test_constant_field_is_a_fixed_point_at_zero_weight(grid):
    F = HalfSpaceField(grid=grid, values=np.ones(grid.field_shape))
    for r in (1.0, 2.0, math.inf):
        avg = box_average_fast(F, r, 0.0)
        assert float(np.max(np.abs(avg.values - 1.0))) < 1e-12


def test_scale_weight_sits_inside_the_average(grid):
    # r = inf on a constant field: the box supremum picks the largest
    # node value of s^-beta over the scale window
    F = HalfSpaceField(grid=grid, values=np.ones(grid.field_shape))
    beta = 1.0
    avg = box_average_fast(F, math.inf, beta)
    lo, hi = scale_window_offsets(DEFAULT_WINDOW, grid.s_oct)
    for i, j in enumerate(avg.retained):
        expect = max(
            float(grid.t_nodes[j + o]) ** (-beta) for o in range(lo, hi + 1)
        )
        assert float(avg.values[i, 0]) == pytest.approx(expect, rel=1e-12)


def test_degenerate_window_is_reported(fields):
    # a huge ball violates the wrap margin on every slice
    with pytest.raises(ValueError, match="retains no scale slice"):
        box_average(fields["h01"], 2.0, 0.0, WhitneyParams(0.5, 1.0, 300.0))


def test_enlarging_the_ball_by_one_is_the_identity(fields):
    spec = SpaceSpec(2, 2, 2, -0.5)
    assert change_angle_ratio(fields["h01"], spec, 1.0) == 1.0
    with pytest.raises(ValueError, match="lam >= 1"):
        change_angle_ratio(fields["h01"], spec, 0.5)
