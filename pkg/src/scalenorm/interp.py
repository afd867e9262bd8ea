"""Interpolation machinery: split-based K bounds, nesting and embedding
checks, and the convexity identities.

The K quantity for a compatible pair of scale-weighted spaces is the usual
infimum over two-part splits of ``norm0(F0) + tau * norm1(F1)``. We never
optimize over all splits; the profile uses the time-cut family (zero the
field above or below a dyadic scale) plus the two trivial splits, and takes
the pointwise minimum of the resulting affine-in-tau bounds. Every entry is
the value of an admissible split, so the profile is a genuine upper bound
for K, and as a lower envelope of nonnegative affine functions it inherits
the exact K shape: nondecreasing in tau, tau -> value/tau nonincreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exponents import SpaceSpec
from .grid import HalfSpaceField
from .norms import t_norm, z_norm
from .report import EquivalenceReport

__all__ = [
    "KProfile",
    "profile_window",
    "k_functional_upper",
    "k_functional_bruteforce",
    "k_profile",
    "interp_sum",
    "real_interp_norm",
    "tent_real_interp_check",
    "nesting_check",
    "embedding_check",
    "convexity_check",
    "log_convexity_check",
]

_SNAP = 1e-9


def _require_compatible(spec0: SpaceSpec, spec1: SpaceSpec) -> None:
    if spec0.p != spec1.p or spec0.r != spec1.r:
        raise ValueError("endpoint specs must share (p, r)")
    if spec0.beta == spec1.beta:
        raise ValueError("endpoint weights must differ (beta0 != beta1)")


def _cut_split(F: HalfSpaceField, m: int) -> tuple[HalfSpaceField, HalfSpaceField]:
    """Zero the field on one side of scale 2^m.

    The high part keeps slices with t >= 2^m (the node at 2^m included),
    the low part the rest; the two sum back to F exactly.
    """
    g = F.grid
    j_cut = int(np.searchsorted(g.t_nodes, 2.0**m * (1.0 - _SNAP)))
    hi = np.zeros_like(F.values)
    lo = np.zeros_like(F.values)
    hi[j_cut:] = F.values[j_cut:]
    lo[:j_cut] = F.values[:j_cut]
    return HalfSpaceField(grid=g, values=hi), HalfSpaceField(grid=g, values=lo)


def k_functional_upper(
    F: HalfSpaceField, spec0: SpaceSpec, spec1: SpaceSpec, k: int
) -> float:
    """Value of the scale-2^k time-cut split at tau = 2^(-k(beta0-beta1)).

    The high part is measured in spec0, the low part in spec1; the result
    bounds K(F, tau) from above because the split is admissible.
    """
    _require_compatible(spec0, spec1)
    alpha = spec0.beta - spec1.beta
    hi, lo = _cut_split(F, k)
    return z_norm(hi, spec0) + 2.0 ** (-k * alpha) * z_norm(lo, spec1)


def k_functional_bruteforce(
    F: HalfSpaceField, spec0: SpaceSpec, spec1: SpaceSpec, k: int
) -> float:
    """Minimum over every grid-slice cut position; slow reference.

    Scans all n_t + 1 split points (the two ends give the trivial splits),
    so it lower-bounds any time-cut profile value at the same tau.
    """
    _require_compatible(spec0, spec1)
    g = F.grid
    tau = 2.0 ** (-k * (spec0.beta - spec1.beta))
    best = math.inf
    for j in range(g.n_t + 1):
        hi = np.zeros_like(F.values)
        lo = np.zeros_like(F.values)
        hi[j:] = F.values[j:]
        lo[:j] = F.values[:j]
        val = z_norm(HalfSpaceField(g, hi), spec0) + tau * z_norm(
            HalfSpaceField(g, lo), spec1
        )
        best = min(best, val)
    return best


def profile_window(grid) -> range:
    """Cut exponents m with 2^m in [2 t_min, t_top / 2]."""
    t_top = float(grid.t_nodes[-1])
    m_lo = math.ceil(math.log2(2.0 * grid.t_min) - _SNAP)
    m_hi = math.floor(math.log2(t_top / 2.0) + _SNAP)
    return range(m_lo, m_hi + 1)


@dataclass(frozen=True)
class KProfile:
    """Upper bounds for K(F, 2^(-k alpha)) over a finite k window."""

    alpha: float
    ks: tuple[int, ...]
    values: tuple[float, ...]
    spec0: SpaceSpec
    spec1: SpaceSpec
    norm0: float
    norm1: float

    @property
    def taus(self) -> np.ndarray:
        return 2.0 ** (-self.alpha * np.array(self.ks, dtype=float))


def k_profile(
    F: HalfSpaceField,
    spec0: SpaceSpec,
    spec1: SpaceSpec,
    norm_fn=z_norm,
) -> KProfile:
    """Lower envelope of the time-cut split bounds at tau_k = 2^(-k alpha).

    norm_fn measures both endpoints (pass t_norm for the tent-space
    variant); the envelope also includes the trivial splits (F, 0) and
    (0, F), so every value is at most min(norm0, tau * norm1).
    """
    _require_compatible(spec0, spec1)
    alpha = spec0.beta - spec1.beta
    if alpha <= 0:
        raise ValueError("profile needs beta0 > beta1")
    window = profile_window(F.grid)
    if len(window) == 0:
        raise ValueError("empty profile window: scale range too narrow")
    lines = []  # (intercept, slope) of admissible-split bounds in tau
    n0 = norm_fn(F, spec0)
    n1 = norm_fn(F, spec1)
    lines.append((n0, 0.0))
    lines.append((0.0, n1))
    for m in window:
        hi, lo = _cut_split(F, m)
        lines.append((norm_fn(hi, spec0), norm_fn(lo, spec1)))
    ks = tuple(window)
    values = []
    for k in ks:
        tau = 2.0 ** (-k * alpha)
        values.append(min(a + b * tau for a, b in lines))
    return KProfile(
        alpha=alpha,
        ks=ks,
        values=tuple(values),
        spec0=spec0,
        spec1=spec1,
        norm0=n0,
        norm1=n1,
    )


def interp_sum(profile: KProfile, theta: float, q: float) -> float:
    """Weighted l^q of the profile: (sum_k (2^(k alpha theta) K_k)^q)^(1/q),
    max for q = inf."""
    terms = [
        2.0 ** (k * profile.alpha * theta) * v
        for k, v in zip(profile.ks, profile.values)
    ]
    if math.isinf(q):
        return max(terms)
    return float(sum(t**q for t in terms) ** (1.0 / q))


def _check_theta(theta: float) -> None:
    if not (isinstance(theta, (int, float)) and 0.0 < theta < 1.0):
        raise ValueError(f"malformed theta: need 0 < theta < 1, got {theta!r}")


def real_interp_norm(
    F: HalfSpaceField,
    theta: float,
    q: float,
    spec0: SpaceSpec,
    spec1: SpaceSpec,
) -> float:
    """Dyadic interpolation sum (sum_k (2^(k alpha theta) K_k)^q)^(1/q)
    over the profile window, with max for q = inf."""
    _check_theta(theta)
    profile = k_profile(F, spec0, spec1)
    return interp_sum(profile, theta, q)


def _theta_spec(spec0: SpaceSpec, spec1: SpaceSpec, theta: float, q: float) -> SpaceSpec:
    beta = (1.0 - theta) * spec0.beta + theta * spec1.beta
    return SpaceSpec(p=spec0.p, q=q, r=spec0.r, beta=beta)


def tent_real_interp_check(
    F: HalfSpaceField,
    theta: float,
    q: float,
    spec0: SpaceSpec,
    spec1: SpaceSpec,
    field_id: str = "field",
) -> EquivalenceReport:
    """Interpolation sum with tent-norm endpoints against the blended-weight
    space norm; one ratio row per call."""
    _check_theta(theta)
    profile = k_profile(F, spec0, spec1, norm_fn=t_norm)
    lhs = interp_sum(profile, theta, q)
    rhs = z_norm(F, _theta_spec(spec0, spec1, theta, q))
    rep = EquivalenceReport(name="tent-real-interp")
    rep.add(
        spec_label=f"theta={theta:g}, q={spec0.label()} -> {spec1.label()}",
        field_id=field_id,
        lhs=lhs,
        rhs=rhs,
    )
    return rep


def nesting_check(
    F: HalfSpaceField,
    p: float,
    q: float,
    r: float,
    beta: float,
    field_id: str = "field",
) -> EquivalenceReport:
    """Tent norm sits between the outer-scale norms at q -> min(p,q) and
    q -> max(p,q).

    The direction whose mixed-norm interchange moves the larger exponent
    outside holds with constant 1 (checked to 1e-10); the other direction
    carries a genuine constant and is only recorded.
    """
    if math.isinf(p):
        raise ValueError("nesting check needs finite p")
    lo_spec = SpaceSpec(p=p, q=min(p, q), r=r, beta=beta)
    hi_spec = SpaceSpec(p=p, q=max(p, q), r=r, beta=beta)
    t_val = t_norm(F, SpaceSpec(p=p, q=q, r=r, beta=beta))
    z_lo = z_norm(F, lo_spec)
    z_hi = z_norm(F, hi_spec)
    rep = EquivalenceReport(name="nesting")
    rep.add(
        spec_label=f"(p={p:g}, q={q:g}, r={r:g}, beta={beta:g}) low side",
        field_id=f"{field_id}:tent_vs_low",
        lhs=t_val,
        rhs=z_lo,
    )
    rep.add(
        spec_label=f"(p={p:g}, q={q:g}, r={r:g}, beta={beta:g}) high side",
        field_id=f"{field_id}:high_vs_tent",
        lhs=z_hi,
        rhs=t_val,
    )
    # One of the two inclusions is a pure exponent interchange with the
    # larger exponent outside; that one cannot exceed 1.
    tol = 1.0 + 1e-10
    if q <= p and t_val > z_lo * tol:
        raise RuntimeError("constant-one nesting direction violated (low side)")
    if q >= p and z_hi > t_val * tol:
        raise RuntimeError("constant-one nesting direction violated (high side)")
    return rep


def embedding_check(
    F: HalfSpaceField,
    spec0: SpaceSpec,
    spec1: SpaceSpec,
    field_id: str = "field",
) -> EquivalenceReport:
    """Norm in the target space against the source space norm, after
    validating the weight/exponent relations that make the inclusion hold:
    beta0 - beta1 = d (1/p0 - 1/p1), p0 <= p1, q0 <= q1, r1 <= r0."""
    d = F.grid.d

    def inv(x: float) -> float:
        return 0.0 if math.isinf(x) else 1.0 / x

    gap = (spec0.beta - spec1.beta) - d * (inv(spec0.p) - inv(spec1.p))
    if abs(gap) > 1e-12:
        raise ValueError(
            "embedding parameter relation violated: beta0 - beta1 must equal "
            "d*(1/p0 - 1/p1)"
        )
    if inv(spec0.p) < inv(spec1.p) - 1e-15:
        raise ValueError("embedding parameter relation violated: need p0 <= p1")
    if inv(spec0.q) < inv(spec1.q) - 1e-15:
        raise ValueError("embedding parameter relation violated: need q0 <= q1")
    if inv(spec1.r) < inv(spec0.r) - 1e-15:
        raise ValueError("embedding parameter relation violated: need r1 <= r0")
    lhs = z_norm(F, spec1)
    rhs = z_norm(F, spec0)
    rep = EquivalenceReport(name="embedding")
    rep.add(
        spec_label=f"{spec0.label()} -> {spec1.label()}",
        field_id=field_id,
        lhs=lhs,
        rhs=rhs,
    )
    return rep


def convexity_check(
    fields: list[HalfSpaceField],
    alpha: float,
    spec: SpaceSpec,
) -> EquivalenceReport:
    """Power-sum triangle bound and the power-reparametrization identity.

    Checks norm((sum |F_i|^alpha)^(1/alpha)) <= (sum norm(F_i)^alpha)^(1/alpha)
    up to 1e-10 absolute slack, and for each field that the norm equals the
    norm of |F|^alpha in the (p/alpha, q/alpha, r/alpha, alpha*beta) space,
    raised to 1/alpha, within 1e-12 relative.
    """
    limit = min(spec.p, spec.q, spec.r)
    if not (0.0 < alpha < limit):
        raise ValueError(
            f"alpha out of range: need 0 < alpha < min(p, q, r) = {limit:g}, "
            f"got {alpha!r}"
        )
    if not fields:
        raise ValueError("need at least one field")
    g = fields[0].grid
    conv_spec = SpaceSpec(
        p=spec.p / alpha, q=spec.q / alpha, r=spec.r / alpha, beta=alpha * spec.beta
    )
    rep = EquivalenceReport(name="alpha-convexity")
    norms = []
    for i, F in enumerate(fields):
        val = z_norm(F, spec)
        norms.append(val)
        powered = HalfSpaceField(grid=F.grid, values=np.abs(F.values) ** alpha)
        back = z_norm(powered, conv_spec) ** (1.0 / alpha)
        if abs(back - val) > 1e-12 * max(1.0, val):
            raise RuntimeError(
                f"power-reparametrization identity violated on field {i}: "
                f"{val!r} vs {back!r}"
            )
        rep.add(
            spec_label=f"{spec.label()} identity, alpha={alpha:g}",
            field_id=f"field{i}:identity",
            lhs=back,
            rhs=val,
        )
    combined = HalfSpaceField(
        grid=g,
        values=sum(np.abs(F.values) ** alpha for F in fields) ** (1.0 / alpha),
    )
    lhs = z_norm(combined, spec)
    rhs = float(sum(v**alpha for v in norms) ** (1.0 / alpha))
    if lhs > rhs + 1e-10:
        raise RuntimeError(f"alpha-convexity violated: {lhs!r} > {rhs!r}")
    rep.add(
        spec_label=f"{spec.label()} triangle, alpha={alpha:g}",
        field_id=f"combined[{len(fields)}]",
        lhs=lhs,
        rhs=rhs,
    )
    return rep


def _blend(x0: float, x1: float, theta: float) -> float:
    i = (1.0 - theta) * (0.0 if math.isinf(x0) else 1.0 / x0)
    i += theta * (0.0 if math.isinf(x1) else 1.0 / x1)
    return math.inf if i == 0.0 else 1.0 / i


def log_convexity_check(
    F: HalfSpaceField,
    theta: float,
    spec0: SpaceSpec,
    spec1: SpaceSpec,
    field_id: str = "field",
) -> EquivalenceReport:
    """Blended-space norm against the geometric mean of the endpoint norms.

    The blend inverts exponents affinely (1/p_theta = (1-theta)/p0 +
    theta/p1, same for q and r) and blends the weight affinely.
    """
    _check_theta(theta)
    spec_t = SpaceSpec(
        p=_blend(spec0.p, spec1.p, theta),
        q=_blend(spec0.q, spec1.q, theta),
        r=_blend(spec0.r, spec1.r, theta),
        beta=(1.0 - theta) * spec0.beta + theta * spec1.beta,
    )
    lhs = z_norm(F, spec_t)
    rhs = z_norm(F, spec0) ** (1.0 - theta) * z_norm(F, spec1) ** theta
    rep = EquivalenceReport(name="log-convexity")
    rep.add(
        spec_label=f"theta={theta:g}: {spec0.label()} x {spec1.label()}",
        field_id=field_id,
        lhs=lhs,
        rhs=rhs,
    )
    return rep
