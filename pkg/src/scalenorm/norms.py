"""Mixed-norm reductions over half-space fields.

Two reduction orders share the same Whitney-average field A(t, x):

- scale-outer ("z_norm"): L^p in x per slice, then L^q against dt/t;
- space-outer ("t_norm"): L^q against dt/t per point, then L^p in x.

Alongside them: the flat product-measure form used when q = p, the
triple-average form with a second ball mean, the classical cone form
(an independent implementation kept as an oracle), dyadic-frequency
norms on boundary data, the vector-valued embedding norm, and the
duality pairing with its inequality checks.

Every comparison between reductions with different scale windows must
run on the common retained slice set; all norm entry points accept
``t_indices`` (absolute scale indices) for that purpose.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exponents import SpaceSpec, dual_spec
from .grid import BoundaryFunction, HalfSpaceField, TorusGrid
from .kernel import LPFamily, band_tail_fraction, default_lp_family, lp_block
from .report import EquivalenceReport
from .whitney import (
    DEFAULT_WINDOW,
    AvgField,
    WhitneyParams,
    ball_reduce,
    box_average,
    box_average_fast,
    reduce_scale,
    reduce_space,
    retained_slices,
    scale_window_offsets,
    ball_node_count,
)

__all__ = [
    "z_norm",
    "z_norm_of_avg",
    "t_norm",
    "t_norm_of_avg",
    "z_amenta_norm",
    "huang_norm",
    "HUANG_WINDOW",
    "t_classical_norm",
    "classical_retained",
    "besov_norm",
    "triebel_norm",
    "vv_norm",
    "pairing",
    "pairing_indices",
    "holder_quasi_check",
    "ScaleBallRegion",
    "localization_check",
]

_TENT_P_INF = "tent spaces not defined for p=∞ in this artifact"

HUANG_WINDOW = WhitneyParams(0.5, 2.0, 1.0)


def _selected(avg: AvgField, t_indices) -> tuple[np.ndarray, np.ndarray]:
    """Rows of avg.values for the requested absolute slice indices."""
    if t_indices is None:
        if avg.retained.size == 0:
            raise ValueError("empty retained t-set")
        return avg.values, avg.retained
    idx = np.asarray(t_indices, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty retained t-set")
    pos = np.searchsorted(avg.retained, idx)
    if np.any(pos >= avg.retained.size) or not np.array_equal(avg.retained[pos], idx):
        raise ValueError("t_indices must be a subset of the retained slices")
    return avg.values[pos], idx


def z_norm_of_avg(avg: AvgField, p: float, q: float, t_indices=None) -> float:
    vals, _ = _selected(avg, t_indices)
    per_slice = reduce_space(vals, p, avg.grid.x_weight)
    return float(reduce_scale(per_slice, q, avg.grid.t_weight))


def z_norm(
    F: HalfSpaceField,
    spec: SpaceSpec,
    window: WhitneyParams = DEFAULT_WINDOW,
    t_indices=None,
) -> float:
    """Whitney average in L^r, then L^p in x, then L^q against dt/t."""
    avg = box_average_fast(F, spec.r, spec.beta, window)
    return z_norm_of_avg(avg, spec.p, spec.q, t_indices)


def t_norm_of_avg(avg: AvgField, p: float, q: float, t_indices=None) -> float:
    if math.isinf(p):
        raise ValueError(_TENT_P_INF)
    vals, _ = _selected(avg, t_indices)
    if math.isinf(q):
        col = vals.max(axis=0)
    else:
        col = (np.sum(vals**q, axis=0) * avg.grid.t_weight) ** (1.0 / q)
    return float((np.sum(col**p) * avg.grid.x_weight) ** (1.0 / p))


def t_norm(
    F: HalfSpaceField,
    spec: SpaceSpec,
    window: WhitneyParams = DEFAULT_WINDOW,
    t_indices=None,
) -> float:
    """Whitney average in L^r, then L^q against dt/t per point, then L^p in x."""
    if math.isinf(spec.p):
        raise ValueError(_TENT_P_INF)
    avg = box_average_fast(F, spec.r, spec.beta, window)
    return t_norm_of_avg(avg, spec.p, spec.q, t_indices)


def z_amenta_norm(
    F: HalfSpaceField,
    p: float,
    r: float,
    beta: float,
    window: WhitneyParams = DEFAULT_WINDOW,
    t_indices=None,
) -> float:
    """Flat L^p of the Whitney average over the product measure dx dt/t.

    This is the two-exponent form the q = p case must collapse to. It runs
    on the reference averaging path and a single flat reduction, so it is an
    independent route against the nested implementation.
    """
    avg = box_average(F, r, beta, window)
    vals, _ = _selected(avg, t_indices)
    if math.isinf(p):
        return float(vals.max())
    total = np.sum(vals**p) * avg.grid.x_weight * avg.grid.t_weight
    return float(total ** (1.0 / p))


def huang_norm(F: HalfSpaceField, spec: SpaceSpec, t_indices=None) -> float:
    """Triple-average norm: inner window (t/2, 2t) x ball(y, t), then a ball
    mean of the q-th power in y around x, then dt/t, then L^p in x."""
    if math.isinf(spec.p):
        raise ValueError("triple-average norm needs finite p")
    g = F.grid
    avg = box_average_fast(F, spec.r, spec.beta, HUANG_WINDOW)
    vals, idx = _selected(avg, t_indices)
    q = spec.q
    if math.isinf(q):
        col = None
        for i, j in enumerate(idx):
            m = ball_reduce(vals[i], g, float(g.t_nodes[j]), "max")
            col = m if col is None else np.maximum(col, m)
    else:
        acc = np.zeros(g.spatial_shape)
        for i, j in enumerate(idx):
            acc += ball_reduce(vals[i] ** q, g, float(g.t_nodes[j]), "mean")
        col = (acc * g.t_weight) ** (1.0 / q)
    return float((np.sum(col**spec.p) * g.x_weight) ** (1.0 / spec.p))


def classical_retained(grid: TorusGrid) -> np.ndarray:
    """Slices whose radius-t ball wraps the torus at most once."""
    t = grid.t_nodes
    keep = 2.0 * t <= (grid.L / 2.0) * (1.0 + 1e-12)
    return np.arange(grid.n_t)[keep]


def t_classical_norm(
    F: HalfSpaceField, p: float, q: float, beta: float, t_indices=None
) -> float:
    """Cone-form tent norm on the raw field: ball mean of |t^-beta F(t,.)|^q
    at each scale, dt/t, then L^p. No scale window; independent of the
    Whitney averaging machinery, kept as the q = r coincidence oracle."""
    if math.isinf(p):
        raise ValueError(_TENT_P_INF)
    g = F.grid
    idx = classical_retained(g) if t_indices is None else np.asarray(t_indices)
    if idx.size == 0:
        raise ValueError("empty retained t-set")
    if math.isinf(q):
        col = None
        for j in idx:
            s = float(g.t_nodes[j]) ** (-beta) * np.abs(F.values[j])
            m = ball_reduce(s, g, float(g.t_nodes[j]), "max")
            col = m if col is None else np.maximum(col, m)
    else:
        acc = np.zeros(g.spatial_shape)
        for j in idx:
            s = float(g.t_nodes[j]) ** (-beta) * np.abs(F.values[j])
            acc += ball_reduce(s**q, g, float(g.t_nodes[j]), "mean")
        col = (acc * g.t_weight) ** (1.0 / q)
    return float((np.sum(col**p) * g.x_weight) ** (1.0 / p))


def _boundary_lp(samples: np.ndarray, p: float, x_weight: float) -> float:
    if math.isinf(p):
        return float(np.abs(samples).max())
    return float((np.sum(np.abs(samples) ** p) * x_weight) ** (1.0 / p))


_TAIL_WARN = 1e-8


def _check_tail(f: BoundaryFunction, fam: LPFamily) -> float:
    tail = band_tail_fraction(f, fam)
    if tail >= _TAIL_WARN:
        warnings.warn(
            f"spectral mass outside the block family: fraction {tail:.3e}",
            RuntimeWarning,
            stacklevel=3,
        )
    return tail


def besov_norm(
    f: BoundaryFunction,
    p: float,
    q: float,
    beta: float,
    fam: LPFamily | None = None,
) -> float:
    """l^q over dyadic frequency blocks of weighted block L^p norms."""
    fam = fam if fam is not None else default_lp_family(f.grid)
    _check_tail(f, fam)
    terms = []
    for k in fam.ks:
        block = lp_block(f, fam, k)
        terms.append(2.0 ** (k * beta) * _boundary_lp(block.samples, p, f.grid.x_weight))
    vec = np.array(terms)
    if math.isinf(q):
        return float(vec.max())
    return float(np.sum(vec**q) ** (1.0 / q))


def triebel_norm(
    f: BoundaryFunction,
    p: float,
    q: float,
    beta: float,
    fam: LPFamily | None = None,
) -> float:
    """Pointwise l^q across weighted blocks, then L^p in x; finite p only."""
    if math.isinf(p):
        raise ValueError("pointwise block norm needs finite p")
    fam = fam if fam is not None else default_lp_family(f.grid)
    _check_tail(f, fam)
    stack = np.stack(
        [2.0 ** (k * beta) * np.abs(lp_block(f, fam, k).samples) for k in fam.ks]
    )
    if math.isinf(q):
        col = stack.max(axis=0)
    else:
        col = np.sum(stack**q, axis=0) ** (1.0 / q)
    return float((np.sum(col**p) * f.grid.x_weight) ** (1.0 / p))


def vv_norm(
    F: HalfSpaceField,
    spec: SpaceSpec,
    window: WhitneyParams = DEFAULT_WINDOW,
    t_indices=None,
) -> float:
    """Norm of the window-indicator embedding: per (t, x) the L^r integral of
    F over the Whitney box against dy ds/s^(d+1), then L^p in x, then the
    t^-beta weighted L^q against dt/t.

    The inner integral is reconstructed from the box mean: the measure of a
    node is s^-d * (dt/t weight) * h^d, so the window integral equals
    (node count * t-weight * h^d)^(1/r) times the box mean taken with the
    weight s^(-d/r) inside. The four-argument object is never materialized.
    """
    g = F.grid
    r = spec.r
    if math.isinf(r):
        avg = box_average_fast(F, math.inf, 0.0, window)
        vals, idx = _selected(avg, t_indices)
        inner = vals
    else:
        avg = box_average_fast(F, r, g.d / r, window)
        vals, idx = _selected(avg, t_indices)
        lo, hi = scale_window_offsets(window, g.s_oct)
        m_rows = hi - lo + 1
        factors = np.empty(idx.size)
        for i, j in enumerate(idx):
            n_ball = ball_node_count(g, window.c * float(g.t_nodes[j]))
            factors[i] = (g.t_weight * g.x_weight * m_rows * n_ball) ** (1.0 / r)
        inner = vals * factors[(slice(None),) + (None,) * g.d]
    per_slice = reduce_space(inner, spec.p, g.x_weight)
    weighted = g.t_nodes[idx] ** (-spec.beta) * per_slice
    return float(reduce_scale(weighted, spec.q, g.t_weight))


def pairing_indices(grid: TorusGrid) -> np.ndarray:
    """Scale slices the duality pairing integrates over: the retained set of
    the default window, so pairings and norms see the same scale range."""
    retained, _ = retained_slices(grid, DEFAULT_WINDOW)
    return retained


def pairing(F: HalfSpaceField, G: HalfSpaceField) -> float:
    """Bilinear form integral of F*G against dy ds/s over the retained range."""
    if F.grid != G.grid:
        raise ValueError("grid mismatch")
    idx = pairing_indices(F.grid)
    total = np.sum(F.values[idx] * G.values[idx])
    return float(total * F.grid.t_weight * F.grid.x_weight)


def holder_quasi_check(
    F: HalfSpaceField,
    G: HalfSpaceField,
    spec: SpaceSpec,
    pair_id: str = "pair",
) -> EquivalenceReport:
    """One-sided duality inequality: |<F, G>| against the product of the
    norm of G and the norm of F in the conjugate space with shifted weight
    -beta + max(0, d(1/p - 1)). Records the ratio; raises only if the right
    side degenerates while the pairing does not."""
    p, q, r = spec.p, spec.q, spec.r
    if not (1.0 <= r and math.isfinite(r)):
        raise ValueError("inner exponent r must lie in [1, inf)")
    if math.isinf(p) or math.isinf(q):
        raise ValueError("outer exponents must be finite for this check")
    dual = dual_spec(spec, F.grid.d)
    lhs = abs(pairing(F, G))
    rhs = z_norm(G, spec) * z_norm(F, dual)
    rep = EquivalenceReport(name="holder-quasi")
    rep.add(f"{spec.label()} vs {dual.label()}", pair_id, lhs, rhs)
    return rep


@dataclass(frozen=True)
class ScaleBallRegion:
    """Compact region (t_lo, t_hi) x ball(center, radius) in the half-space."""

    t_lo: float
    t_hi: float
    center: tuple[float, ...]
    radius: float

    def __post_init__(self) -> None:
        if not (0.0 < self.t_lo < self.t_hi):
            raise ValueError("need 0 < t_lo < t_hi")
        if not self.radius > 0.0:
            raise ValueError("need radius > 0")


def _region_mask(grid: TorusGrid, region: ScaleBallRegion) -> np.ndarray:
    if len(region.center) != grid.d:
        raise ValueError("region center dimension mismatch")
    if region.t_lo < grid.t_min * (1.0 - 1e-12) or region.t_hi > float(
        grid.t_nodes[-1]
    ) * (1.0 + 1e-12):
        raise ValueError("localization region exits the grid scale range")
    if 2.0 * region.radius > grid.L / 2.0:
        raise ValueError("localization region exits the grid spatial margin")
    t = grid.t_nodes
    mask_t = (t > region.t_lo) & (t < region.t_hi)
    ax = grid.x_nodes
    d2 = np.zeros(grid.spatial_shape)
    for axis, c in enumerate(region.center):
        delta = np.abs(ax - c)
        delta = np.minimum(delta, grid.L - delta)
        shape = [1] * grid.d
        shape[axis] = grid.n_x
        d2 = d2 + (delta.reshape(shape)) ** 2
    mask_x = d2 < region.radius**2
    return mask_t[(slice(None),) + (None,) * grid.d] & mask_x[None]


def localization_check(
    F: HalfSpaceField,
    spec: SpaceSpec,
    region: ScaleBallRegion,
    field_id: str = "field",
) -> EquivalenceReport:
    """Compare the full norm of the region-truncated field against the plain
    L^r integral of F over the region (measure dy ds/s). On a fixed compact
    region the two are equivalent; the ratio is recorded per field."""
    g = F.grid
    mask = _region_mask(g, region)
    cut = HalfSpaceField(grid=g, values=np.where(mask, F.values, 0.0))
    lhs = z_norm(cut, spec)
    vals = np.abs(F.values[mask])
    if math.isinf(spec.r):
        rhs = float(vals.max()) if vals.size else 0.0
    else:
        rhs = float(
            (np.sum(vals**spec.r) * g.t_weight * g.x_weight) ** (1.0 / spec.r)
        )
    rep = EquivalenceReport(name="localization")
    rep.add(spec.label(), field_id, lhs, rhs)
    return rep
