"""Discretization of the upper half-space over a periodic spatial torus.

The spatial domain is the torus [0, L)^d with n_x samples per axis, and the
scale axis is geometric: t_j = t_min * 2**(j / s_oct) for j = 0..J with
J = ceil(s_oct * log2(t_max / t_min)). Every scale integral in this package
carries dt/t, so the log-uniform layout turns it into a plain average per
octave: each node gets the weight ln(2) / s_oct.

Half-space fields are stored scale-major (t outermost) and can be saved to a
small binary container (magic ``HSF1``) that round-trips bit-exactly.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "LN2",
    "TorusGrid",
    "BoundaryFunction",
    "HalfSpaceField",
    "make_grid",
    "default_grid",
    "save_field",
    "load_field",
]

LN2 = math.log(2.0)

# Relative slack used when a derived quantity should land on an integer but
# floating arithmetic leaves it a hair off.
_SNAP = 1e-9

_HEADER = struct.Struct("<4sIIIdddI")
_MAGIC = b"HSF1"


def _snap_ceil(x: float) -> int:
    """Ceiling that treats values within _SNAP of an integer as that integer."""
    r = round(x)
    if abs(x - r) <= _SNAP * max(1.0, abs(x)):
        return int(r)
    return int(math.ceil(x))


@dataclass(frozen=True)
class TorusGrid:
    """Sampling layout for fields on (0, infinity) x [0, L)^d.

    Parameters
    ----------
    d : int
        Spatial dimension, 1 or 2.
    L : float
        Side length of the periodic spatial box.
    n_x : int
        Samples per spatial axis; must be a power of two.
    t_min, t_max : float
        Nominal scale range. Nodes are t_min * 2**(j / s_oct), j = 0..J.
    s_oct : int
        Scale nodes per octave. Must be an integer >= 4: integer s_oct is a
        hard requirement so octave blocks [2**(k-1), 2**k) land exactly on
        s_oct consecutive nodes (dyadic alignment of the scale grid).
    """

    d: int
    L: float
    n_x: int
    t_min: float
    t_max: float
    s_oct: int

    @property
    def J(self) -> int:
        return _snap_ceil(self.s_oct * math.log2(self.t_max / self.t_min))

    @property
    def n_t(self) -> int:
        return self.J + 1

    @property
    def h(self) -> float:
        """Spatial node spacing L / n_x."""
        return self.L / self.n_x

    @property
    def t_weight(self) -> float:
        """Quadrature weight of one scale node for integrals against dt/t."""
        return LN2 / self.s_oct

    @property
    def x_weight(self) -> float:
        """Quadrature weight of one spatial node for integrals against dx."""
        return self.h**self.d

    @cached_property
    def t_nodes(self) -> np.ndarray:
        j = np.arange(self.n_t, dtype=np.float64)
        t = self.t_min * np.exp2(j / self.s_oct)
        t.setflags(write=False)
        return t

    @cached_property
    def x_nodes(self) -> np.ndarray:
        x = np.arange(self.n_x, dtype=np.float64) * self.h
        x.setflags(write=False)
        return x

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        return (self.n_x,) * self.d

    @property
    def field_shape(self) -> tuple[int, ...]:
        return (self.n_t,) + self.spatial_shape

    def scale_index(self, t: float) -> int:
        """Index j with t_j == t, if t lies on the grid; ValueError otherwise."""
        pos = self.s_oct * math.log2(t / self.t_min)
        r = round(pos)
        if abs(pos - r) > _SNAP * max(1.0, abs(pos)) or not 0 <= r <= self.J:
            raise ValueError(f"t={t!r} is not a scale node of this grid")
        return int(r)


def make_grid(
    d: int, L: float, n_x: int, t_min: float, t_max: float, s_oct: int
) -> TorusGrid:
    """Validate parameters and build a TorusGrid.

    Raises
    ------
    ValueError
        On any violated constraint; the message names the constraint.
    """
    if d not in (1, 2):
        raise ValueError(f"d must be 1 or 2, got {d}")
    if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0):
        raise ValueError(f"L must be a positive finite number, got {L!r}")
    if not (isinstance(n_x, int) and n_x > 0 and n_x & (n_x - 1) == 0):
        raise ValueError(f"n_x not power of two: {n_x!r}")
    if not (math.isfinite(t_min) and math.isfinite(t_max) and 0 < t_min < t_max):
        raise ValueError(f"need 0 < t_min < t_max, got t_min={t_min!r} t_max={t_max!r}")
    if not (isinstance(s_oct, int) and s_oct >= 4):
        # Integer s_oct keeps the scale grid dyadically aligned; see TorusGrid.
        raise ValueError(f"s_oct must be an integer >= 4, got {s_oct!r}")
    # The largest Whitney ball must stay well inside one period. The default
    # reference layout sits exactly at 2*t_max == L/4, so equality passes.
    if 2.0 * t_max > L / 4.0:
        raise ValueError(f"2*t_max >= L/4: t_max={t_max!r} too large for L={L!r}")
    return TorusGrid(d=d, L=float(L), n_x=n_x, t_min=float(t_min),
                     t_max=float(t_max), s_oct=s_oct)


def default_grid() -> TorusGrid:
    """Reference desk-scale layout: d=1, L=64, n_x=1024, t in [1/16, 8], 8 per octave."""
    return make_grid(1, 64.0, 1024, 0.0625, 8.0, 8)


def _frozen_array(values: np.ndarray, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True, order="C")
    if arr.shape != shape:
        raise ValueError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Real samples of a function on the spatial torus."""

    grid: TorusGrid
    samples: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "samples",
            _frozen_array(self.samples, self.grid.spatial_shape, "samples"),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoundaryFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.samples, other.samples)


@dataclass(frozen=True, eq=False)
class HalfSpaceField:
    """Real samples of a function on the scale grid times the spatial torus.

    values[j, ...] is the slice at scale t_j; spatial axes follow.
    """

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values",
            _frozen_array(self.values, self.grid.field_shape, "values"),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HalfSpaceField):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)


def save_field(field: HalfSpaceField, path: str) -> None:
    """Write a HalfSpaceField to ``path`` in the HSF1 container.

    Layout: magic ``HSF1``; little-endian u32 d, u32 n_x, u32 n_t; f64 L,
    t_min, t_max; u32 s_oct; then n_t * n_x**d float64 values, C order with
    the scale axis outermost. Rejects non-finite values.
    """
    g = field.grid
    if not np.all(np.isfinite(field.values)):
        raise ValueError("refusing to save non-finite values")
    header = _HEADER.pack(_MAGIC, g.d, g.n_x, g.n_t, g.L, g.t_min, g.t_max, g.s_oct)
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_field(path: str) -> HalfSpaceField:
    """Read an HSF1 container written by save_field; exact inverse of it."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ValueError("truncated header")
    magic, d, n_x, n_t, L, t_min, t_max, s_oct = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    grid = make_grid(int(d), float(L), int(n_x), float(t_min), float(t_max), int(s_oct))
    if grid.n_t != n_t:
        raise ValueError(
            f"inconsistent header: stored n_t={n_t}, grid derives {grid.n_t}"
        )
    expect = _HEADER.size + 8 * n_t * n_x**d
    if len(blob) < expect:
        raise ValueError("truncated payload")
    if len(blob) > expect:
        raise ValueError("trailing data after payload")
    values = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    values = values.reshape(grid.field_shape)
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite values in payload")
    return HalfSpaceField(grid=grid, values=values)
