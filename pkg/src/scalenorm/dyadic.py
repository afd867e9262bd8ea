"""Dyadic cubes, the cube-decomposed norm, and the sequence reindexing.

A generation k tiles the torus by side-2^k cubes Q; each cube carries the
scale slab [2^(k-1), 2^k), giving boxes that partition the sampled part of
the half-space. The cube-decomposed norm reduces cube by cube; the sequence
map relabels every box onto the unit box (1/2, 1) x [0, 1)^d by the affine
(s, y) = (2^k s0, 2^k (idx + y0)). The measure dy0 ds0 / s0^(d+1) is
invariant under that map, so block quadrature weights equal the original
ones and the relabeling is an exact bijection on retained nodes.

Generations must align with the scale grid: slab boundaries 2^k have to
land on grid nodes, which holds when s_oct * log2(t_min) is an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .exponents import SpaceSpec
from .grid import HalfSpaceField, TorusGrid

__all__ = [
    "DyadicCube",
    "GenerationLayout",
    "retained_generations",
    "generation_span_indices",
    "dyadic_norm",
    "neighbors_G",
    "SequenceField",
    "to_sequence",
    "from_sequence",
    "sequence_norm",
]

_SNAP = 1e-9


def _as_int(u: float) -> int | None:
    r = round(u)
    if abs(u - r) <= _SNAP * max(1.0, abs(u)):
        return int(r)
    return None


@dataclass(frozen=True)
class DyadicCube:
    """Generation-k cube 2^k * (idx + [0,1)^d) with slab [2^(k-1), 2^k)."""

    k: int
    idx: tuple[int, ...]

    @property
    def side(self) -> float:
        return 2.0**self.k

    @property
    def t_range(self) -> tuple[float, float]:
        return (2.0 ** (self.k - 1), 2.0**self.k)


@dataclass(frozen=True)
class GenerationLayout:
    """Grid bookkeeping for one retained generation."""

    k: int
    j_lo: int  # first scale index of the slab
    n_side: int  # cubes per axis
    nodes_per_side: int  # spatial nodes per cube side


def retained_generations(grid: TorusGrid) -> list[GenerationLayout]:
    """Generations whose slab and tiling sit exactly on the grid.

    A generation survives iff [2^(k-1), 2^k) lies inside the sampled scale
    range, the torus splits into a whole number of cubes, and each cube side
    carries a whole number (>= 1) of spatial nodes.
    """
    base = _as_int(grid.s_oct * math.log2(grid.t_min))
    if base is None:
        raise ValueError(
            "scale grid is not dyadically aligned: s_oct * log2(t_min) "
            "must be an integer"
        )
    t_top = float(grid.t_nodes[-1])
    out: list[GenerationLayout] = []
    k_lo = math.ceil(math.log2(2.0 * grid.t_min) - _SNAP)
    k_hi = math.floor(math.log2(t_top) + _SNAP)
    for k in range(k_lo, k_hi + 1):
        j_lo = grid.s_oct * (k - 1) - base
        if j_lo < 0 or j_lo + grid.s_oct > grid.n_t:
            continue
        n_side = _as_int(grid.L / 2.0**k)
        nodes = _as_int(grid.n_x * 2.0**k / grid.L)
        if n_side is None or nodes is None or n_side < 1 or nodes < 1:
            continue
        out.append(GenerationLayout(k=k, j_lo=j_lo, n_side=n_side, nodes_per_side=nodes))
    if not out:
        raise ValueError("no complete dyadic generation inside the scale range")
    return out


def generation_span_indices(grid: TorusGrid, layouts=None) -> np.ndarray:
    """All scale indices covered by the retained generations' slabs."""
    lays = layouts if layouts is not None else retained_generations(grid)
    idx = np.concatenate(
        [np.arange(lay.j_lo, lay.j_lo + grid.s_oct) for lay in lays]
    )
    return np.unique(idx)


def _cube_values(
    F: HalfSpaceField, lay: GenerationLayout, r: float
) -> np.ndarray:
    """Per-cube L^r(dy ds/s^(d+1)) over the generation's boxes."""
    g = F.grid
    slab = F.values[lay.j_lo:lay.j_lo + g.s_oct]
    ns, nodes = lay.n_side, lay.nodes_per_side
    if math.isinf(r):
        blk = np.abs(slab)
        if g.d == 1:
            return blk.reshape(g.s_oct, ns, nodes).max(axis=(0, 2))
        return blk.reshape(g.s_oct, ns, nodes, ns, nodes).max(axis=(0, 2, 4))
    svals = g.t_nodes[lay.j_lo:lay.j_lo + g.s_oct]
    w = svals ** (-float(g.d)) * (g.t_weight * g.x_weight)
    G = np.abs(slab) ** r * w[(slice(None),) + (None,) * g.d]
    if g.d == 1:
        sums = G.reshape(g.s_oct, ns, nodes).sum(axis=(0, 2))
    else:
        sums = G.reshape(g.s_oct, ns, nodes, ns, nodes).sum(axis=(0, 2, 4))
    return sums ** (1.0 / r)


def dyadic_norm(F: HalfSpaceField, spec: SpaceSpec, layouts=None) -> float:
    """Cube-decomposed norm: per generation, l^p over cubes of the side^d
    weighted block L^r values, then the 2^(-k beta) weighted l^q across
    generations. Infinite exponents reduce by max."""
    g = F.grid
    lays = layouts if layouts is not None else retained_generations(g)
    p, q = spec.p, spec.q
    levels = []
    for lay in lays:
        cubes = _cube_values(F, lay, spec.r)
        if math.isinf(p):
            inner = float(cubes.max())
        else:
            inner = float(
                np.sum(2.0 ** (lay.k * g.d) * cubes**p) ** (1.0 / p)
            )
        levels.append(2.0 ** (-lay.k * spec.beta) * inner)
    vec = np.array(levels)
    if math.isinf(q):
        return float(vec.max())
    return float(np.sum(vec**q) ** (1.0 / q))


def neighbors_G(cube: DyadicCube, L: float) -> list[DyadicCube]:
    """Cubes of generations k and k-1 whose box can meet a Whitney box
    W(t, x) anchored inside this cube's box; reflexive, wrapped on the torus.

    Scale windows (t/2, t) for t in the slab stay inside the two slabs
    [2^(k-2), 2^k); spatial reach is below one side length each way, giving
    3 same-generation and 6 finer-generation cubes per axis."""
    d = len(cube.idx)
    n_side = _as_int(L / 2.0**cube.k)
    if n_side is None or n_side < 1:
        raise ValueError("cube does not tile the torus")
    found: set[DyadicCube] = set()
    for off in product((-1, 0, 1), repeat=d):
        idx = tuple((i + o) % n_side for i, o in zip(cube.idx, off))
        found.add(DyadicCube(k=cube.k, idx=idx))
    n_fine = 2 * n_side
    for off in product(range(-2, 4), repeat=d):
        idx = tuple((2 * i + o) % n_fine for i, o in zip(cube.idx, off))
        found.add(DyadicCube(k=cube.k - 1, idx=idx))
    return sorted(found, key=lambda c: (c.k, c.idx))


@dataclass(frozen=True, eq=False)
class SequenceField:
    """Per-generation stacks of cube blocks on the unit box (1/2,1) x [0,1)^d.

    blocks[k] has the cube axes first, then the block sample axes
    (scale, space...); within a generation every block shares one shape.
    Samples are stored exactly as they appear in the source field; the
    2^(kd/p) relabeling weight enters only through sequence_norm, keeping
    the round trip bit-exact.
    """

    grid: TorusGrid
    spec: SpaceSpec
    blocks: dict[int, np.ndarray]

    def block(self, k: int, idx: tuple[int, ...]) -> np.ndarray:
        return self.blocks[k][idx]


def to_sequence(F: HalfSpaceField, spec: SpaceSpec) -> SequenceField:
    """Relabel every retained box onto the unit box; pure reindexing."""
    g = F.grid
    blocks: dict[int, np.ndarray] = {}
    for lay in retained_generations(g):
        slab = F.values[lay.j_lo:lay.j_lo + g.s_oct]
        ns, nodes = lay.n_side, lay.nodes_per_side
        if g.d == 1:
            arr = slab.reshape(g.s_oct, ns, nodes).transpose(1, 0, 2).copy()
        else:
            arr = (
                slab.reshape(g.s_oct, ns, nodes, ns, nodes)
                .transpose(1, 3, 0, 2, 4)
                .copy()
            )
        blocks[lay.k] = arr
    return SequenceField(grid=g, spec=spec, blocks=blocks)


def from_sequence(S: SequenceField, spec: SpaceSpec | None = None) -> HalfSpaceField:
    """Inverse relabeling; nodes outside the retained slabs come back zero."""
    if spec is not None and spec != S.spec:
        raise ValueError("sequence spec mismatch")
    g = S.grid
    out = np.zeros(g.field_shape)
    for lay in retained_generations(g):
        arr = S.blocks[lay.k]
        ns, nodes = lay.n_side, lay.nodes_per_side
        if g.d == 1:
            expect = (ns, g.s_oct, nodes)
        else:
            expect = (ns, ns, g.s_oct, nodes, nodes)
        if arr.shape != expect:
            raise ValueError(
                f"block shape mismatch at generation {lay.k}: "
                f"{arr.shape} != {expect}"
            )
        if g.d == 1:
            slab = arr.transpose(1, 0, 2).reshape(g.s_oct, g.n_x)
        else:
            slab = arr.transpose(2, 0, 3, 1, 4).reshape(g.s_oct, g.n_x, g.n_x)
        out[lay.j_lo:lay.j_lo + g.s_oct] = slab
    return HalfSpaceField(grid=g, values=out)


def sequence_norm(S: SequenceField, p: float, q: float, beta: float) -> float:
    """Nested reduction: block L^r on the unit box, 2^(kd/p) weighted l^p
    over cube positions, then 2^(-k beta) weighted l^q over generations.
    The inner exponent r comes from the stored space selector."""
    g = S.grid
    r = S.spec.r
    levels = []
    for lay in retained_generations(g):
        arr = S.blocks[lay.k]
        svals = g.t_nodes[lay.j_lo:lay.j_lo + g.s_oct]
        s0 = svals * 2.0 ** (-lay.k)
        h0 = g.h * 2.0 ** (-lay.k)
        samp_axes = tuple(range(g.d, arr.ndim))
        if math.isinf(r):
            cubes = np.abs(arr).max(axis=samp_axes)
        else:
            w0 = s0 ** (-float(g.d)) * (g.t_weight * h0**g.d)
            wshape = [1] * arr.ndim
            wshape[g.d] = g.s_oct
            G = np.abs(arr) ** r * w0.reshape(wshape)
            cubes = G.sum(axis=samp_axes) ** (1.0 / r)
        if math.isinf(p):
            inner = float(cubes.max())
        else:
            inner = float(
                np.sum((2.0 ** (lay.k * g.d / p) * cubes) ** p) ** (1.0 / p)
            )
        levels.append(2.0 ** (-lay.k * beta) * inner)
    vec = np.array(levels)
    if math.isinf(q):
        return float(vec.max())
    return float(np.sum(vec**q) ** (1.0 / q))
