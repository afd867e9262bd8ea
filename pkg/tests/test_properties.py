"""Randomized invariants of the box-average layer.

Three contracts hold for every admissible parameter draw: positive
homogeneity at finite r, pointwise monotonicity under window enlargement at
r = inf, and the factoring of the scale weight into the field.
"""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from scalenorm.grid import HalfSpaceField
from scalenorm.whitney import DEFAULT_WINDOW, WhitneyParams, box_average_fast


def _rows(avg):
    return dict(zip(avg.retained.tolist(), avg.values))


@settings(max_examples=20, deadline=None)
@given(kappa=st.floats(min_value=0.05, max_value=20.0))
def test_positive_homogeneity_of_box_values(fields, grid, kappa):
    F = fields["h05"]
    pos = HalfSpaceField(grid=grid, values=np.abs(F.values))
    base = box_average_fast(pos, 2.0, -0.5)
    scaled = box_average_fast(
        HalfSpaceField(grid=grid, values=kappa * pos.values), 2.0, -0.5
    )
    assert np.array_equal(base.retained, scaled.retained)
    dev = np.max(np.abs(scaled.values - kappa * base.values))
    assert dev <= 1e-12 * kappa * max(1.0, float(np.max(base.values)))


@settings(max_examples=20, deadline=None)
@given(
    da=st.floats(min_value=0.0, max_value=0.2),
    db=st.floats(min_value=0.0, max_value=1.0),
    dc=st.floats(min_value=0.0, max_value=1.0),
)
def test_sup_values_grow_with_the_window(fields, da, db, dc):
    # (a', b', c') with a' <= a, b' >= b, c' >= c covers a superset of
    # nodes, so the per-box sup cannot drop on commonly retained slices
    F = fields["h03"]
    wide = WhitneyParams(0.5 - da, 1.0 + db, 1.0 + dc)
    base = _rows(box_average_fast(F, math.inf, -0.5))
    grown = _rows(box_average_fast(F, math.inf, -0.5, wide))
    common = sorted(set(base) & set(grown))
    assert common
    for j in common:
        assert np.all(grown[j] >= base[j] - 1e-15)


@settings(max_examples=20, deadline=None)
@given(
    beta=st.floats(min_value=-1.5, max_value=1.5),
    r=st.sampled_from([1.0, 2.0, math.inf]),
)
def test_scale_weight_factors_into_the_field(fields, grid, beta, r):
    F = fields["h08"]
    weighted = HalfSpaceField(
        grid=grid,
        values=grid.t_nodes[:, None] ** (-beta) * F.values,
    )
    a = box_average_fast(F, r, beta)
    b = box_average_fast(weighted, r, 0.0)
    assert np.array_equal(a.retained, b.retained)
    scale = np.maximum(np.abs(a.values), 1e-300)
    assert float(np.max(np.abs(a.values - b.values) / scale)) < 1e-12


@settings(max_examples=15, deadline=None)
@given(
    c1=st.floats(min_value=-3.0, max_value=3.0),
    c2=st.floats(min_value=-3.0, max_value=3.0),
)
def test_quasi_triangle_at_the_box_level(fields, grid, c1, c2):
    # |c1 F + c2 G| <= |c1||F| + |c2||G| pointwise survives the monotone
    # finite-r reduction
    F, G = fields["h01"].values, fields["h02"].values
    combo = box_average_fast(
        HalfSpaceField(grid=grid, values=c1 * F + c2 * G), 1.0, 0.0
    )
    bound = box_average_fast(
        HalfSpaceField(grid=grid, values=abs(c1) * np.abs(F) + abs(c2) * np.abs(G)),
        1.0,
        0.0,
    )
    tol = 1e-12 * max(1.0, float(np.max(bound.values)))
    assert np.all(combo.values <= bound.values + tol)
