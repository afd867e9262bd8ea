#!/usr/bin/env python3
"""Produce the frozen reference values in tests/data/golden.json.

The scale-outer norm is recomputed here from first principles: explicit
membership loops, index-gather ball lookups, and compensated (fsum)
reductions, sharing no evaluation code with the library. Library code is
used only to realize the input fields, which are fixtures, not the
quantity under measurement. Each entry also records the same norm on a
refined grid (4x in both directions, computed with the library path) as
an informational stability figure; the frozen anchor is the same-grid
reference value.

Run from the repository root:

    python3 tools/golden_oracle.py [--out tests/data/golden.json]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from scalenorm.corpus import generate_boundary, generate_halfspace, load_manifest
from scalenorm.exponents import SpaceSpec
from scalenorm.grid import default_grid, make_grid
from scalenorm.kernel import heat_extension
from scalenorm.norms import z_norm

_SNAP = 1e-9
_COVER = 1e-12

# (name, field id, p, q, r, beta); "heat:bXX" = heat extension of boundary bXX
PAIRS = (
    ("g1", "heat:b01", 2.0, 2.0, 2.0, -0.5),
    ("g2", "heat:b01", 1.0, 2.0, 2.0, -1.0),
    ("g3", "h01", 2.0, 3.0, 2.0, 0.3),
    ("g4", "h06", 2.0, 2.0, 1.0, 0.0),
    ("g5", "h08", 1.0, 1.0, 2.0, 0.5),
    ("g6", "h03", 2.0, 2.0, math.inf, -0.5),
)


def _strict_below(u: float) -> int:
    # ties within 1e-9 (relative) of an integer count as that integer
    r = round(u)
    if abs(u - r) <= _SNAP * max(1.0, abs(u)):
        return int(r) - 1
    return int(math.floor(u))


def _strict_above(u: float) -> int:
    r = round(u)
    if abs(u - r) <= _SNAP * max(1.0, abs(u)):
        return int(r) + 1
    return int(math.ceil(u))


def reference_norm(
    values: np.ndarray,
    L: float,
    n_x: int,
    t_min: float,
    s_oct: int,
    p: float,
    q: float,
    r: float,
    beta: float,
    a: float = 0.5,
    b: float = 1.0,
    c: float = 1.0,
) -> float:
    """Scale-outer norm of a d=1 field array, recomputed independently.

    values has shape (n_t, n_x) on the geometric scale ladder
    t_j = t_min * 2^(j / s_oct). Box membership, slice retention, and the
    snapped tie rule follow the published discretization contract; the
    arithmetic (gather order, accumulation) is this script's own.
    """
    if values.ndim != 2 or values.shape[1] != n_x:
        raise ValueError("expected a (n_t, n_x) field array")
    h = L / n_x
    w_t = math.log(2.0) / s_oct
    n_t = values.shape[0]
    t_nodes = np.array([t_min * 2.0 ** (j / s_oct) for j in range(n_t)])
    t_top = float(t_nodes[-1])

    lo = _strict_above(s_oct * math.log2(a))
    hi = _strict_below(s_oct * math.log2(b))
    if lo > hi:
        raise ValueError("scale window holds no node at this resolution")
    retained = [
        j
        for j in range(n_t)
        if a * t_nodes[j] >= t_min * (1.0 - _COVER)
        and b * t_nodes[j] <= t_top * (1.0 + _COVER)
        and 2.0 * c * t_nodes[j] <= (L / 2.0) * (1.0 + _COVER)
    ]
    if not retained:
        raise ValueError("no retained scale slice")

    inf_r = math.isinf(r)
    weighted = np.abs(values * (t_nodes ** (-beta))[:, None])
    if not inf_r:
        weighted = weighted**r

    centers = np.arange(n_x)
    per_slice = []
    for j in retained:
        K = _strict_below(c * float(t_nodes[j]) / h)
        if K < 0:
            K = 0
        gathered = [
            np.take(weighted[k], (centers + o) % n_x)
            for k in range(j + lo, j + hi + 1)
            for o in range(-K, K + 1)
        ]
        box = np.array(gathered)
        if inf_r:
            amp = box.max(axis=0)
        else:
            count = float(box.shape[0])
            amp = np.array(
                [math.fsum(box[:, i]) / count for i in range(n_x)]
            ) ** (1.0 / r)
        if math.isinf(p):
            per_slice.append(float(amp.max()))
        else:
            per_slice.append((math.fsum(amp**p) * h) ** (1.0 / p))
    if math.isinf(q):
        return max(per_slice)
    return (math.fsum(v**q for v in per_slice) * w_t) ** (1.0 / q)


def _realize(field_id: str, grid):
    entries = {e.id: e for e in load_manifest()[1]}
    if field_id.startswith("heat:"):
        f = generate_boundary(entries[field_id.split(":", 1)[1]], grid)
        return heat_extension(f)
    return generate_halfspace(entries[field_id], grid)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="tests/data/golden.json")
    args = ap.parse_args(argv)

    grid = default_grid()
    fine = make_grid(grid.d, grid.L, 4 * grid.n_x, grid.t_min, grid.t_max, 4 * grid.s_oct)

    records = []
    for name, field_id, p, q, r, beta in PAIRS:
        F = _realize(field_id, grid)
        ref = reference_norm(
            F.values, grid.L, grid.n_x, grid.t_min, grid.s_oct, p, q, r, beta
        )
        lib = z_norm(F, SpaceSpec(p, q, r, beta))
        rel = abs(lib - ref) / ref
        F4 = _realize(field_id, fine)
        refined = z_norm(F4, SpaceSpec(p, q, r, beta))
        ratio = ref / refined
        assert rel < 1e-10, f"{name}: library disagrees with reference ({rel:.3e})"
        assert 0.25 < ratio < 4.0, f"{name}: refinement ratio {ratio:.3f} out of range"
        records.append(
            {
                "name": name,
                "field": field_id,
                "p": p,
                "q": q,
                "r": "inf" if math.isinf(r) else r,
                "beta": beta,
                "value": ref,
                "refined_value": refined,
            }
        )
        print(
            f"{name}: {field_id:9s} ({p:g},{q:g},{r:g},{beta:g}) "
            f"value={ref:.17g} lib_rel={rel:.2e} refined={refined:.17g}"
        )

    payload = {
        "grid": {
            "d": grid.d,
            "L": grid.L,
            "n_x": grid.n_x,
            "t_min": grid.t_min,
            "t_max": grid.t_max,
            "s_oct": grid.s_oct,
        },
        "window": {"a": 0.5, "b": 1.0, "c": 1.0},
        "refined": {"n_x": fine.n_x, "s_oct": fine.s_oct},
        "entries": records,
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
