"""Equivalence reports and their CSV / summary / figure emitters.

A report collects per-field (lhs, rhs, ratio) rows for one check. The ratio
envelope [min, max] over the corpus is the numerical certificate that two
norms are equivalent at desk scale; the emitters keep everything
locale-independent with 17 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "S_AVERAGE_NOTE",
    "ReportRow",
    "EquivalenceReport",
    "fmt17",
    "write_reports_csv",
    "write_summary",
    "render_overview_figure",
    "render_bench_figure",
]

# every constant recorded downstream absorbs this quadrature convention
S_AVERAGE_NOTE = (
    "scale averages weight nodes by ds/s; on a window (a*t, b*t) this differs "
    "from a plain ds mean by a factor within [a/b, b/a], absorbed into every "
    "recorded constant"
)


def fmt17(value: float) -> str:
    """Locale-independent decimal with 17 significant digits."""
    return format(float(value), ".17g")


@dataclass(frozen=True)
class ReportRow:
    spec_label: str
    field_id: str
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        if self.lhs == 0.0 and self.rhs == 0.0:
            return 1.0
        if self.rhs == 0.0:
            return math.copysign(math.inf, self.lhs)
        return self.lhs / self.rhs


@dataclass
class EquivalenceReport:
    """Ratio rows for one named check, plus the notes the numbers carry."""

    name: str
    rows: list[ReportRow] = field(default_factory=list)
    notes: tuple[str, ...] = (S_AVERAGE_NOTE,)

    def add(self, spec_label: str, field_id: str, lhs: float, rhs: float) -> None:
        row = ReportRow(spec_label, field_id, float(lhs), float(rhs))
        if not (row.ratio > 0.0 and math.isfinite(row.ratio)):
            raise ValueError(
                f"{self.name}: degenerate ratio for {field_id} "
                f"(lhs={row.lhs!r}, rhs={row.rhs!r})"
            )
        self.rows.append(row)

    def ratios(self) -> np.ndarray:
        return np.array([row.ratio for row in self.rows], dtype=np.float64)

    @property
    def min_ratio(self) -> float:
        return float(self.ratios().min())

    @property
    def max_ratio(self) -> float:
        return float(self.ratios().max())

    @property
    def median_ratio(self) -> float:
        return float(np.median(self.ratios()))

    @property
    def envelope_width(self) -> float:
        return self.max_ratio / self.min_ratio

    def summary_dict(self) -> dict:
        return {
            "check": self.name,
            "rows": len(self.rows),
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "median_ratio": self.median_ratio,
            "envelope_width": self.envelope_width,
            "notes": list(self.notes),
        }


def write_reports_csv(reports: list[EquivalenceReport], path: str) -> None:
    """Append report rows to a CSV file, writing the header once."""
    need_header = not (os.path.exists(path) and os.path.getsize(path) > 0)
    with open(path, "a", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if need_header:
            writer.writerow(["check_name", "spec", "field_id", "lhs", "rhs", "ratio"])
        for rep in reports:
            for row in rep.rows:
                writer.writerow(
                    [
                        rep.name,
                        row.spec_label,
                        row.field_id,
                        fmt17(row.lhs),
                        fmt17(row.rhs),
                        fmt17(row.ratio),
                    ]
                )


def write_summary(suites: list[dict], path: str) -> None:
    """Suite summaries (min/max/median per check) as a JSON text file."""
    with open(path, "w", encoding="ascii") as fh:
        json.dump(suites, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _agg():
    # imported lazily so library users never pay for a backend
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_overview_figure(reports: list[EquivalenceReport], path: str) -> None:
    """Ratio envelopes per check, log scale: min/median/max whisker per row."""
    plt = _agg()
    reports = [r for r in reports if r.rows]
    if not reports:
        return
    fig, ax = plt.subplots(figsize=(8.0, 0.45 * len(reports) + 1.5))
    for i, rep in enumerate(reports):
        lo, med, hi = rep.min_ratio, rep.median_ratio, rep.max_ratio
        ax.plot([lo, hi], [i, i], color="#4878a8", lw=2)
        ax.plot([med], [i], marker="o", color="#1f3b57", ms=5)
    ax.set_yticks(range(len(reports)))
    ax.set_yticklabels([r.name for r in reports], fontsize=8)
    ax.set_xscale("log")
    ax.axvline(1.0, color="#999999", lw=0.8, ls="--")
    ax.set_xlabel("ratio envelope (min / median / max)")
    ax.set_title("norm-equivalence envelopes")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_bench_figure(rows: list[dict], path: str) -> None:
    """Naive vs fast box-average timing against n_x."""
    plt = _agg()
    if not rows:
        return
    n = [row["n_x"] for row in rows]
    naive = [row["naive_ns"] * 1e-6 for row in rows]
    fast = [row["fast_ns"] * 1e-6 for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(n, naive, marker="o", label="naive")
    ax.loglog(n, fast, marker="s", label="fast")
    ax.set_xlabel("n_x")
    ax.set_ylabel("time per average (ms)")
    ax.set_title("box-average timing")
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
