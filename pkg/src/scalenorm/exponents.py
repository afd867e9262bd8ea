"""Exponent bookkeeping shared by the norm and averaging layers."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["SpaceSpec", "conjugate_exponent", "dual_beta", "dual_spec"]


def _check_exponent(name: str, value: float) -> float:
    v = float(value)
    if math.isinf(v) and v > 0:
        return v
    if not (v > 0.0 and math.isfinite(v)):
        raise ValueError(f"exponent {name} must be in (0, inf], got {value!r}")
    return v


@dataclass(frozen=True)
class SpaceSpec:
    """Four-parameter space selector: outer p, scale q, inner r, weight beta."""

    p: float
    q: float
    r: float
    beta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_exponent("p", self.p))
        object.__setattr__(self, "q", _check_exponent("q", self.q))
        object.__setattr__(self, "r", _check_exponent("r", self.r))
        b = float(self.beta)
        if not math.isfinite(b):
            raise ValueError(f"beta must be finite, got {self.beta!r}")
        object.__setattr__(self, "beta", b)

    def label(self) -> str:
        def fmt(v: float) -> str:
            if math.isinf(v):
                return "inf"
            return f"{v:g}"

        return f"(p={fmt(self.p)}, q={fmt(self.q)}, r={fmt(self.r)}, beta={self.beta:g})"


def conjugate_exponent(p: float) -> float:
    """Duality partner of p: p/(p-1) for 1 < p < inf, inf for p <= 1, 1 for inf."""
    p = _check_exponent("p", p)
    if math.isinf(p):
        return 1.0
    if p <= 1.0:
        return math.inf
    return p / (p - 1.0)


def dual_beta(beta: float, p: float, d: int) -> float:
    """Weight index of the pairing partner: -beta + max(0, d*(1/p - 1))."""
    p = _check_exponent("p", p)
    bump = 0.0 if math.isinf(p) else max(0.0, d * (1.0 / p - 1.0))
    return -beta + bump


def dual_spec(spec: SpaceSpec, d: int) -> SpaceSpec:
    """Pairing partner space: conjugate every exponent, shift the weight."""
    return SpaceSpec(
        p=conjugate_exponent(spec.p),
        q=conjugate_exponent(spec.q),
        r=conjugate_exponent(spec.r),
        beta=dual_beta(spec.beta, spec.p, d),
    )
