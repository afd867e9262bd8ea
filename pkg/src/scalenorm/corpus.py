"""Deterministic test-function corpus.

A corpus entry is (id, kind, seed, params). Kinds:

- ``gaussian``: periodized Gaussian profile.
- ``modulated_gaussian``: Gaussian envelope times a cosine carrier snapped to
  an exact torus frequency near 2**k.
- ``bump``: compactly supported smooth bump exp(1 - 1/(1 - u^2)).
- ``multi_bump``: several seeded bumps with drawn positions, widths, heights.
- ``lp_random_band``: random-phase field spectrally supported in the dyadic
  band [2**(k-1), 2**(k+1)] with a smooth edge taper.
- ``whitney_indicator``: half-space only; 1 on a single dyadic block.
- ``power_tail``: half-space only; pure power in scale times an algebraic
  spatial tail.

Spatial positions and widths are stored as fractions of L, scale-envelope
centers as fractions of the log scale range, widths in octaves, so one entry
is meaningful on every grid. Boundary samples are mean-removed (the grid
norms of boundary data cannot see the mean) and peak-normalized.

Randomness comes from a SplitMix64 stream: state advances by the 64-bit
golden-ratio constant 0x9E3779B97F4A7C15 and the output mix uses the
multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with shifts 30/27/31.
Each generator documents its draw order; fields are byte-stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .grid import BoundaryFunction, HalfSpaceField, TorusGrid

__all__ = [
    "SeededStream",
    "CorpusEntry",
    "load_manifest",
    "parse_manifest_text",
    "manifest_text",
    "boundary_entries",
    "generate_boundary",
    "generate_halfspace",
    "BOUNDARY_KINDS",
    "KINDS",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

KINDS = (
    "gaussian",
    "modulated_gaussian",
    "bump",
    "multi_bump",
    "lp_random_band",
    "whitney_indicator",
    "power_tail",
)
BOUNDARY_KINDS = KINDS[:5]


class SeededStream:
    """SplitMix64 pseudo-random stream (pure integer arithmetic)."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform draw in [0, 1) with 53 significant bits."""
        return (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    kind: str
    seed: int
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown corpus kind {self.kind!r}")

    def p(self, name: str, default: float | None = None) -> float:
        if name in self.params:
            return self.params[name]
        if default is None:
            raise ValueError(f"entry {self.id}: missing parameter {name!r}")
        return default

    def manifest_line(self) -> str:
        parts = [self.id, self.kind, str(self.seed)]
        parts += [f"{k}={self.params[k]:.17g}" for k in self.params]
        return " ".join(parts)


def parse_manifest_text(text: str) -> tuple[int, list[CorpusEntry]]:
    """Parse a manifest: a version line, then one ``id kind seed k=v ...`` per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("version "):
        raise ValueError("manifest must start with a 'version N' line")
    version = int(lines[0].split()[1])
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for ln in lines[1:]:
        tokens = ln.split()
        if len(tokens) < 3:
            raise ValueError(f"malformed manifest line: {ln!r}")
        eid, kind, seed = tokens[0], tokens[1], int(tokens[2])
        params: dict[str, float] = {}
        for tok in tokens[3:]:
            key, _, val = tok.partition("=")
            if not _:
                raise ValueError(f"malformed parameter {tok!r} in line {ln!r}")
            params[key] = float(val)
        if eid in seen:
            raise ValueError(f"duplicate corpus id {eid!r}")
        seen.add(eid)
        entries.append(CorpusEntry(id=eid, kind=kind, seed=seed, params=params))
    return version, entries


def manifest_text() -> str:
    """Text of the packaged canonical manifest."""
    return (resources.files("scalenorm") / "data" / "manifest.txt").read_text()


def load_manifest(path: str | None = None) -> tuple[int, list[CorpusEntry]]:
    """Load a manifest file, or the packaged canonical one if path is None."""
    if path is None:
        text = manifest_text()
    else:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    return parse_manifest_text(text)


def boundary_entries(entries: list[CorpusEntry]) -> list[CorpusEntry]:
    """The boundary panel: entries with boundary semantics, by id convention."""
    return [e for e in entries if e.id.startswith("b") and e.kind in BOUNDARY_KINDS]


# ----------------------------------------------------------------------------
# spatial profile builders (shared by boundary and half-space generation)


def _axes(grid: TorusGrid) -> list[np.ndarray]:
    if grid.d == 1:
        return [grid.x_nodes]
    x = grid.x_nodes
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    return [X1, X2]


def _gauss_images_1d(x: np.ndarray, c: float, w: float, L: float) -> np.ndarray:
    acc = np.zeros_like(x)
    for n in range(-2, 3):
        acc += np.exp(-((x - c + n * L) ** 2) / (2.0 * w * w))
    return acc


def _gaussian_profile(grid: TorusGrid, cx: float, w_frac: float) -> np.ndarray:
    w = w_frac * grid.L
    c = cx * grid.L
    axes = _axes(grid)
    prof = _gauss_images_1d(axes[0], c, w, grid.L)
    if grid.d == 2:
        prof = prof * _gauss_images_1d(axes[1], c, w, grid.L)
    return prof


def _wrapped_delta(x: np.ndarray, c: float, L: float) -> np.ndarray:
    delta = (x - c) % L
    return np.where(delta > L / 2.0, delta - L, delta)


def _torus_dist2(grid: TorusGrid, cx: float) -> np.ndarray:
    c = cx * grid.L
    axes = _axes(grid)
    d2 = _wrapped_delta(axes[0], c, grid.L) ** 2
    if grid.d == 2:
        d2 = d2 + _wrapped_delta(axes[1], c, grid.L) ** 2
    return d2


def _bump_profile(grid: TorusGrid, cx: float, w_frac: float) -> np.ndarray:
    # support radius w_frac * L; must stay under half a period
    w = w_frac * grid.L
    if w >= grid.L / 2.0:
        raise ValueError("bump width reaches the antipode")
    u2 = _torus_dist2(grid, cx) / (w * w)
    out = np.zeros(grid.spatial_shape, dtype=np.float64)
    inside = u2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u2[inside]))
    return out


def _carrier(grid: TorusGrid, k: float, phase: float) -> np.ndarray:
    # snap the carrier 2**k to the nearest exact torus frequency (nonzero)
    target = 2.0**k
    m = max(1, round(target * grid.L / (2.0 * math.pi)))
    omega = 2.0 * math.pi * m / grid.L
    return np.cos(omega * _axes(grid)[0] + 2.0 * math.pi * phase)


def _band_envelope(rho: np.ndarray, k: float) -> np.ndarray:
    # smooth taper on log2(|xi| / 2**k) in [-1, 1], zero at the edges
    out = np.zeros_like(rho)
    pos = rho > 0
    u = np.zeros_like(rho)
    u[pos] = np.log2(rho[pos] / 2.0**k)
    sel = pos & (np.abs(u) < 1.0)
    out[sel] = np.cos(0.5 * math.pi * u[sel]) ** 2
    return out


def _freq_radii(grid: TorusGrid) -> np.ndarray:
    xi = 2.0 * math.pi * np.fft.fftfreq(grid.n_x, d=1.0 / grid.n_x) / grid.L
    if grid.d == 1:
        return np.abs(xi)
    X1, X2 = np.meshgrid(xi, xi, indexing="ij")
    return np.sqrt(X1 * X1 + X2 * X2)


def _band_profile(grid: TorusGrid, k: float, stream: SeededStream) -> np.ndarray:
    """Random-phase band-limited sample. Draw order: one float per white-noise
    node in C order (d = 2), or one float per retained positive frequency in
    ascending order (d = 1)."""
    if grid.d == 1:
        n = grid.n_x
        spec = np.zeros(n // 2 + 1, dtype=np.complex128)
        rho = 2.0 * math.pi * np.arange(n // 2 + 1) / grid.L
        env = _band_envelope(rho, k)
        for idx in range(1, n // 2):
            if env[idx] > 0.0:
                theta = 2.0 * math.pi * stream.next_float()
                spec[idx] = env[idx] * complex(math.cos(theta), math.sin(theta))
        return np.fft.irfft(spec, n=n) * n
    noise = np.empty(grid.spatial_shape, dtype=np.float64)
    flat = noise.reshape(-1)
    for i in range(flat.size):
        flat[i] = stream.next_float() - 0.5
    spec = np.fft.fftn(noise) * _band_envelope(_freq_radii(grid), k)
    return np.fft.ifftn(spec).real


def _multi_bump_draws(entry: CorpusEntry) -> list[tuple[float, float, float, float]]:
    """Per bump, in order: position, width factor, height, scale position."""
    stream = SeededStream(entry.seed)
    nb = int(entry.p("nb", 3))
    draws = []
    for _ in range(nb):
        pos = stream.next_float()
        wfac = 0.5 + stream.next_float()
        height = 0.25 + 0.75 * stream.next_float()
        spos = 0.2 + 0.6 * stream.next_float()
        draws.append((pos, wfac, height, spos))
    return draws


def _spatial_profile(entry: CorpusEntry, grid: TorusGrid) -> np.ndarray:
    kind = entry.kind
    if kind == "gaussian":
        return _gaussian_profile(grid, entry.p("cx"), entry.p("w"))
    if kind == "modulated_gaussian":
        prof = _gaussian_profile(grid, entry.p("cx"), entry.p("w"))
        return prof * _carrier(grid, entry.p("k"), entry.p("phase", 0.0))
    if kind == "bump":
        return _bump_profile(grid, entry.p("cx"), entry.p("w"))
    if kind == "multi_bump":
        acc = np.zeros(grid.spatial_shape, dtype=np.float64)
        w0 = entry.p("w0", 0.05)
        for pos, wfac, height, _ in _multi_bump_draws(entry):
            acc += height * _bump_profile(grid, pos, w0 * wfac)
        return acc
    if kind == "lp_random_band":
        return _band_profile(grid, entry.p("k"), SeededStream(entry.seed))
    raise ValueError(f"kind {kind!r} has no boundary form")


def generate_boundary(entry: CorpusEntry, grid: TorusGrid) -> BoundaryFunction:
    """Boundary sample for a boundary-capable kind: mean-removed, peak 1."""
    prof = _spatial_profile(entry, grid)
    prof = prof - prof.mean()
    peak = np.max(np.abs(prof))
    if peak == 0.0:
        raise ValueError(f"entry {entry.id} generated an identically zero sample")
    return BoundaryFunction(grid=grid, samples=prof / peak)


def _log_envelope(grid: TorusGrid, sc: float, sw: float) -> np.ndarray:
    """Gaussian in log2(s), centered at fraction sc of the log range, width sw octaves."""
    lo = math.log2(grid.t_min)
    hi = math.log2(grid.t_max)
    center = (1.0 - sc) * lo + sc * hi
    u = (np.log2(grid.t_nodes) - center) / sw
    return np.exp(-(u * u))


def generate_halfspace(entry: CorpusEntry, grid: TorusGrid) -> HalfSpaceField:
    """Half-space field for any kind; peak-normalized except whitney_indicator."""
    kind = entry.kind
    t = grid.t_nodes
    bcast = (slice(None),) + (None,) * grid.d

    if kind == "whitney_indicator":
        gen = int(entry.p("gen"))
        ell = 2.0**gen
        n_side = grid.L / ell
        if abs(n_side - round(n_side)) > 1e-9 or round(n_side) < 1:
            raise ValueError(f"generation {gen} does not tile the torus of side {grid.L}")
        idx = int(entry.p("pos") * n_side) % int(round(n_side))
        s_mask = (t >= ell / 2.0) & (t < ell)
        nodes_per = grid.n_x / n_side
        if abs(nodes_per - round(nodes_per)) > 1e-9:
            raise ValueError(f"generation {gen} is finer than the spatial grid")
        npc = int(round(nodes_per))
        x_mask_1d = np.zeros(grid.n_x, dtype=bool)
        x_mask_1d[idx * npc:(idx + 1) * npc] = True
        if grid.d == 1:
            x_mask = x_mask_1d
        else:
            x_mask = np.outer(x_mask_1d, x_mask_1d)
        values = (s_mask[bcast] & x_mask[None]).astype(np.float64)
        return HalfSpaceField(grid=grid, values=values)

    if kind == "power_tail":
        gamma = entry.p("gamma")
        m = entry.p("m", 2.0)
        w = entry.p("w") * grid.L
        s_geo = math.sqrt(grid.t_min * grid.t_max)
        radial = (1.0 + _torus_dist2(grid, entry.p("cx")) / (w * w)) ** (-m / 2.0)
        values = (t / s_geo)[bcast] ** gamma * radial[None]
    elif kind == "multi_bump":
        w0 = entry.p("w0", 0.05)
        sw = entry.p("sw", 0.9)
        lo, hi = math.log2(grid.t_min), math.log2(grid.t_max)
        values = np.zeros(grid.field_shape, dtype=np.float64)
        for pos, wfac, height, spos in _multi_bump_draws(entry):
            center = (1.0 - spos) * lo + spos * hi
            env = np.exp(-(((np.log2(t) - center) / sw) ** 2))
            values += height * env[bcast] * _bump_profile(grid, pos, w0 * wfac)[None]
    else:
        prof = _spatial_profile(entry, grid)
        env = _log_envelope(grid, entry.p("sc", 0.5), entry.p("sw", 1.2))
        values = env[bcast] * prof[None]

    peak = np.max(np.abs(values))
    if peak == 0.0:
        raise ValueError(f"entry {entry.id} generated an identically zero field")
    return HalfSpaceField(grid=grid, values=values / peak)
