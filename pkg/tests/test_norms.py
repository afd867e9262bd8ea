"""Reduction-layer checks.

Constant fields make every reduction computable by a short explicit loop;
those closed forms pin the quadrature weights and reduction order of each
norm entry point. Band-limited boundary data adds a Parseval route for the
frequency-block norms.
"""

import math

import numpy as np
import pytest

from scalenorm.exponents import SpaceSpec
from scalenorm.grid import HalfSpaceField, make_grid
from scalenorm.kernel import default_lp_family, frequency_radii
from scalenorm.norms import (
    HUANG_WINDOW,
    ScaleBallRegion,
    besov_norm,
    holder_quasi_check,
    huang_norm,
    localization_check,
    pairing,
    pairing_indices,
    t_classical_norm,
    t_norm,
    triebel_norm,
    vv_norm,
    z_amenta_norm,
    z_norm,
)
from scalenorm.whitney import (
    DEFAULT_WINDOW,
    ball_node_count,
    retained_slices,
    scale_window_offsets,
)


def _constant_field(grid, value=1.0):
    return HalfSpaceField(grid=grid, values=np.full(grid.field_shape, value))


def _expected_constant_z(grid, spec, window=DEFAULT_WINDOW):
    """Scale-outer norm of the all-ones field, by direct summation."""
    lo, hi = scale_window_offsets(window, grid.s_oct)
    kept, _ = retained_slices(grid, window)
    per = []
    for j in kept:
        rows = [float(grid.t_nodes[j + o]) ** (-spec.beta) for o in range(lo, hi + 1)]
        if math.isinf(spec.r):
            amp = max(rows)
        else:
            amp = (sum(v**spec.r for v in rows) / len(rows)) ** (1.0 / spec.r)
        per.append(amp if math.isinf(spec.p) else amp * grid.L ** (grid.d / spec.p))
    if math.isinf(spec.q):
        return max(per)
    return (sum(v**spec.q for v in per) * grid.t_weight) ** (1.0 / spec.q)


@pytest.mark.parametrize(
    "spec",
    [
        SpaceSpec(2, 2, 2, -0.5),
        SpaceSpec(1, 3, 1, 1.0),
        SpaceSpec(math.inf, 2, 2, 0.5),
        SpaceSpec(2, math.inf, 1, -1.0),
        SpaceSpec(2, 2, math.inf, 0.3),
        SpaceSpec(0.5, 1, 2, 0.0),
    ],
)
def test_constant_field_closed_form(grid, spec):
    F = _constant_field(grid)
    expect = _expected_constant_z(grid, spec)
    assert z_norm(F, spec) == pytest.approx(expect, rel=1e-12)


def test_constant_field_closed_form_other_windows(grid):
    from scalenorm.whitney import WhitneyParams

    F = _constant_field(grid)
    spec = SpaceSpec(2, 2, 2, -0.5)
    for window in (WhitneyParams(0.25, 2.0, 2.0), WhitneyParams(0.5, 2.0, 0.5)):
        expect = _expected_constant_z(grid, spec, window)
        assert z_norm(F, spec, window) == pytest.approx(expect, rel=1e-12)


def test_constant_field_tent_equals_scale_outer(grid):
    # on x-constant data the two reduction orders agree for any (p, q)
    F = _constant_field(grid)
    for spec in (SpaceSpec(2, 3, 2, -0.5), SpaceSpec(1, 2, 1, 0.5)):
        assert t_norm(F, spec) == pytest.approx(z_norm(F, spec), rel=1e-12)


def test_constant_field_flat_form(grid):
    # flat product-measure reduction on the all-ones field
    F = _constant_field(grid)
    p, r, beta = 2.0, 2.0, -0.5
    lo, hi = scale_window_offsets(DEFAULT_WINDOW, grid.s_oct)
    kept, _ = retained_slices(grid, DEFAULT_WINDOW)
    total = 0.0
    for j in kept:
        rows = [float(grid.t_nodes[j + o]) ** (-beta) for o in range(lo, hi + 1)]
        amp = (sum(v**r for v in rows) / len(rows)) ** (1.0 / r)
        total += amp**p * grid.L * grid.t_weight
    assert z_amenta_norm(F, p, r, beta) == pytest.approx(
        total ** (1.0 / p), rel=1e-12
    )


def test_constant_field_triple_average(grid):
    # ball means of a constant are the constant; the triple-average norm
    # collapses to an explicit scale sum over its own retained slices
    F = _constant_field(grid)
    spec = SpaceSpec(2, 3, 2, -0.5)
    lo, hi = scale_window_offsets(HUANG_WINDOW, grid.s_oct)
    kept, _ = retained_slices(grid, HUANG_WINDOW)
    assert kept.tolist() == list(range(8, 49))
    total = 0.0
    for j in kept:
        rows = [float(grid.t_nodes[j + o]) ** (-spec.beta) for o in range(lo, hi + 1)]
        amp = (sum(v**spec.r for v in rows) / len(rows)) ** (1.0 / spec.r)
        total += amp**spec.q * grid.t_weight
    expect = total ** (1.0 / spec.q) * grid.L ** (1.0 / spec.p)
    assert huang_norm(F, spec) == pytest.approx(expect, rel=1e-12)


def test_constant_field_window_integral_norm(grid):
    # the embedding norm on the all-ones field: the inner value over the box
    # at (t, x) is its measure to the 1/r, with the weight t^-beta outside
    F = _constant_field(grid)
    spec = SpaceSpec(2, 2, 2, -0.5)
    lo, hi = scale_window_offsets(DEFAULT_WINDOW, grid.s_oct)
    kept, _ = retained_slices(grid, DEFAULT_WINDOW)
    total = 0.0
    for j in kept:
        t_j = float(grid.t_nodes[j])
        n_ball = ball_node_count(grid, DEFAULT_WINDOW.c * t_j)
        measure = sum(
            n_ball * float(grid.t_nodes[j + o]) ** (-grid.d) * grid.t_weight * grid.h
            for o in range(lo, hi + 1)
        )
        inner = measure ** (1.0 / spec.r)
        per = inner * grid.L ** (1.0 / spec.p)
        total += (t_j ** (-spec.beta) * per) ** spec.q * grid.t_weight
    assert vv_norm(F, spec) == pytest.approx(total ** (1.0 / spec.q), rel=1e-12)


def test_frequency_block_norm_parseval_route(grid, boundary):
    f = boundary["b05"]
    fam = default_lp_family(grid)
    beta = -0.5
    spectrum = np.fft.fft(f.samples)
    rho = frequency_radii(grid)
    total = 0.0
    for k in fam.ks:
        m = fam.symbol(k, rho)
        block_sq = float(np.sum(np.abs(m * spectrum) ** 2)) * grid.L / grid.n_x**2
        total += 4.0 ** (k * beta) * block_sq
    assert besov_norm(f, 2.0, 2.0, beta) == pytest.approx(
        math.sqrt(total), rel=1e-8
    )


def test_block_norms_coincide_at_equal_exponents(grid, boundary):
    f = boundary["b03"]
    v1 = besov_norm(f, 2.0, 2.0, -0.5)
    v2 = triebel_norm(f, 2.0, 2.0, -0.5)
    assert v1 == pytest.approx(v2, rel=1e-10)


def test_positive_homogeneity(fields, grid, boundary):
    F = fields["h04"]
    scaled = HalfSpaceField(grid=grid, values=3.5 * F.values)
    spec = SpaceSpec(2, 3, 2, -0.5)
    assert z_norm(scaled, spec) == pytest.approx(3.5 * z_norm(F, spec), rel=1e-12)
    assert t_norm(scaled, spec) == pytest.approx(3.5 * t_norm(F, spec), rel=1e-12)
    assert vv_norm(scaled, spec) == pytest.approx(3.5 * vv_norm(F, spec), rel=1e-12)
    assert huang_norm(scaled, spec) == pytest.approx(
        3.5 * huang_norm(F, spec), rel=1e-12
    )
    assert z_amenta_norm(scaled, 2.0, 2.0, -0.5) == pytest.approx(
        3.5 * z_amenta_norm(F, 2.0, 2.0, -0.5), rel=1e-12
    )
    f = boundary["b02"]
    half = type(f)(grid=grid, samples=0.5 * f.samples)
    assert besov_norm(half, 2.0, 1.0, 0.5) == pytest.approx(
        0.5 * besov_norm(f, 2.0, 1.0, 0.5), rel=1e-12
    )


def test_monotone_in_the_pointwise_modulus(fields, grid):
    F = fields["h02"]
    bigger = HalfSpaceField(grid=grid, values=np.abs(F.values) + 0.25)
    for spec in (SpaceSpec(2, 2, 2, -0.5), SpaceSpec(1, 2, math.inf, 0.5)):
        assert z_norm(F, spec) <= z_norm(bigger, spec) * (1 + 1e-12)
        assert t_norm(F, spec) <= t_norm(bigger, spec) * (1 + 1e-12)


def test_triangle_inequality_in_the_banach_range(fields, grid):
    F, G = fields["h01"], fields["h03"]
    S = HalfSpaceField(grid=grid, values=F.values + G.values)
    spec = SpaceSpec(2, 2, 2, 0.0)
    assert z_norm(S, spec) <= (z_norm(F, spec) + z_norm(G, spec)) * (1 + 1e-12)


def test_quasi_triangle_bound_below_one(fields, grid):
    F, G = fields["h01"], fields["h03"]
    S = HalfSpaceField(grid=grid, values=F.values + G.values)
    spec = SpaceSpec(0.5, 1, 2, 0.3)
    # p = 1/2 concavity costs at most 2^(1/p - 1) = 2
    assert z_norm(S, spec) <= 2.0 * (z_norm(F, spec) + z_norm(G, spec)) * (1 + 1e-12)


def test_tent_rejects_unbounded_outer_exponent(fields):
    with pytest.raises(ValueError, match="tent spaces not defined"):
        t_norm(fields["h01"], SpaceSpec(math.inf, 2, 2, 0.0))
    with pytest.raises(ValueError, match="tent spaces not defined"):
        t_classical_norm(fields["h01"], math.inf, 2.0, 0.0)
    with pytest.raises(ValueError, match="finite p"):
        huang_norm(fields["h01"], SpaceSpec(math.inf, 2, 2, 0.0))


def test_cone_form_tracks_the_windowed_tent(fields):
    # independent discretization of the same object: same-order values
    spec = SpaceSpec(2, 2, 2, -0.5)
    for fid in ("h01", "h05"):
        a = t_classical_norm(fields[fid], 2.0, 2.0, -0.5)
        b = t_norm(fields[fid], spec)
        assert 0.1 < a / b < 10.0


def test_pairing_bilinear_and_grid_checked(fields, grid):
    F, G, H = fields["h01"], fields["h03"], fields["h05"]
    assert pairing(F, G) == pairing(G, F)
    combo = HalfSpaceField(grid=grid, values=2.0 * F.values - 0.5 * H.values)
    lhs = pairing(combo, G)
    rhs = 2.0 * pairing(F, G) - 0.5 * pairing(H, G)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    other = make_grid(1, 64.0, 512, 0.0625, 8.0, 8)
    Fo = HalfSpaceField(grid=other, values=np.zeros(other.field_shape))
    with pytest.raises(ValueError, match="grid mismatch"):
        pairing(F, Fo)


def test_pairing_scale_range_matches_reference_window(grid):
    kept, _ = retained_slices(grid, DEFAULT_WINDOW)
    assert pairing_indices(grid).tolist() == kept.tolist()


def test_one_sided_duality_check(fields):
    rep = holder_quasi_check(fields["h01"], fields["h05"], SpaceSpec(2, 3, 2, 0.3))
    row = rep.rows[0]
    assert row.rhs > 0 and 0 <= row.lhs <= 5.0 * row.rhs
    with pytest.raises(ValueError, match="inner exponent r"):
        holder_quasi_check(fields["h01"], fields["h05"], SpaceSpec(2, 3, math.inf, 0.3))
    with pytest.raises(ValueError, match="outer exponents must be finite"):
        holder_quasi_check(fields["h01"], fields["h05"], SpaceSpec(math.inf, 3, 2, 0.3))


def test_localization_on_a_compactly_supported_field(fields):
    # this field lives on a single box; a region containing it compares the
    # norm with the plain region integral
    F = fields["h07"]  # support t in [2, 4), x in [44, 48)
    region = ScaleBallRegion(t_lo=1.5, t_hi=4.5, center=(46.0,), radius=6.0)
    rep = localization_check(F, SpaceSpec(2, 2, 2, -0.5), region, field_id="h07")
    ratio = rep.rows[0].ratio
    assert 1e-3 < ratio < 1e3


def test_localization_region_validation(fields):
    F = fields["h01"]
    spec = SpaceSpec(2, 2, 2, 0.0)
    with pytest.raises(ValueError, match="0 < t_lo < t_hi"):
        ScaleBallRegion(t_lo=2.0, t_hi=1.0, center=(0.0,), radius=1.0)
    with pytest.raises(ValueError, match="radius > 0"):
        ScaleBallRegion(t_lo=1.0, t_hi=2.0, center=(0.0,), radius=0.0)
    with pytest.raises(ValueError, match="center dimension mismatch"):
        localization_check(
            F, spec, ScaleBallRegion(1.0, 2.0, (0.0, 0.0), 1.0)
        )
    with pytest.raises(ValueError, match="exits the grid scale range"):
        localization_check(
            F, spec, ScaleBallRegion(0.01, 2.0, (0.0,), 1.0)
        )
    with pytest.raises(ValueError, match="spatial margin"):
        localization_check(
            F, spec, ScaleBallRegion(1.0, 2.0, (0.0,), 30.0)
        )
