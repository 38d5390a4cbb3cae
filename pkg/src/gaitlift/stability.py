"""Analytic transverse-stability conditions evaluated along a CPG orbit.

All conditions report a signed margin (positive means satisfied) so that
parameter sweeps can measure distance to the boundary, never a bare bool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EpsilonOutOfRange, UnresolvedSymbol
from .floquet import two_node_block
from .orbit import PeriodicOrbit
from .ratemodel import gain_prime

SAFETY = 0.01


@dataclass(frozen=True)
class EtaBounds:
    """Bounds on the gain-slope signal eta(t) along the orbit: 0 <= d0 <= d."""

    d0: float
    d: float
    n_samples: int

    def __post_init__(self):
        if not (0.0 <= self.d0 <= self.d):
            raise ValueError(f"bounds must satisfy 0 <= d0 <= d, got {self.d0}, {self.d}")


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one analytic condition; holds iff margin > 0."""

    condition: str
    holds: bool
    margin: float
    inputs: dict

    def __post_init__(self):
        if self.holds != (self.margin > 0.0):
            raise ValueError("holds must match the sign of the margin")

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "margin": self.margin,
            "inputs": self.inputs,
        }


def eta_series(orbit: PeriodicOrbit, system=None, counterpart: int = 1) -> np.ndarray:
    """eta(t) = G'(gain argument of the chain node's CPG counterpart) per sample."""
    sys_ = system if system is not None else orbit.system
    args = np.array(
        [sys_.gain_argument(s)[counterpart - 1] for s in orbit.samples]
    )
    return gain_prime(args, sys_.params.gain)


def eta_bounds(
    orbit: PeriodicOrbit,
    system=None,
    counterpart: int = 1,
    safety: float = SAFETY,
) -> EtaBounds:
    """Numeric infimum/supremum of eta(t) with a small safety widening.

    The supremum is capped at the analytic gain-slope maximum a*b/4, which
    no sample can exceed.
    """
    sys_ = system if system is not None else orbit.system
    e = eta_series(orbit, sys_, counterpart)
    cap = sys_.params.gain.max_slope
    d0 = max(float(e.min()) * (1.0 - safety), 0.0)
    d = min(float(e.max()) * (1.0 + safety), cap)
    return EtaBounds(d0, d, e.size)


def check_liap1(g: float, bounds: EtaBounds) -> ConditionReport:
    """Quadratic-form condition gD <= 3 for transverse Liapunov stability."""
    if g < 0:
        raise ValueError("g must be >= 0")
    margin = float(3.0 - g * bounds.d)
    return ConditionReport(
        "liap1", margin > 0.0, margin, {"g": g, "D": bounds.d, "threshold": 3.0}
    )


def floquet_bound_interval(epsilon: float) -> tuple[float, float]:
    """Zeros 1 -/+ sqrt(3(4-eps))/2 of the exponential-decay discriminant.

    The transverse Floquet bound holds while zeta(t) = g*eta(t) stays
    inside this interval; defined for 0 < eps <= 4.
    """
    if not (0.0 < epsilon <= 4.0):
        raise EpsilonOutOfRange(f"interval defined for 0 < eps <= 4, got {epsilon}")
    r = float(np.sqrt(3.0 * (4.0 - epsilon)) / 2.0)
    return (1.0 - r, 1.0 + r)


def check_floquet_bound(g: float, epsilon: float, bounds: EtaBounds) -> ConditionReport:
    """Exponential (Floquet) sufficiency: g*eta(t) inside the decay interval.

    Since zeta >= 0 always exceeds the lower endpoint for eps < 4, it is
    enough that g*D stays below the upper endpoint.  The supremum D is
    used (the pointwise condition must hold for all t).
    """
    if g < 0:
        raise ValueError("g must be >= 0")
    if epsilon > 4.0:
        margin = 4.0 - epsilon  # negative: bound not applicable
        return ConditionReport(
            "floquet_bound",
            False,
            margin,
            {"g": g, "epsilon": epsilon, "D": bounds.d, "note": "eps > 4"},
        )
    lo, hi = floquet_bound_interval(epsilon)
    margin = float(hi - g * bounds.d)
    return ConditionReport(
        "floquet_bound",
        margin > 0.0,
        margin,
        {"g": g, "epsilon": epsilon, "D": bounds.d, "interval": [lo, hi]},
    )


def liap2_interval(epsilon: float) -> tuple[float, float]:
    """Zeros (1 -/+ 2 sqrt(eps))/eps of the discriminant (eps*zeta - 1)^2 - 4 eps."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    r = float(2.0 * np.sqrt(epsilon))
    return ((1.0 - r) / epsilon, (1.0 + r) / epsilon)


def check_liap2(g: float, epsilon: float, bounds: EtaBounds) -> ConditionReport:
    """Second quadratic-form condition: (eps*zeta - 1)^2 < 4*eps over the orbit.

    Checked at zeta = g*D; when the lower interval endpoint is positive
    (eps < 1/4) the condition is two-sided and g*D0 must clear it too.
    """
    if g < 0:
        raise ValueError("g must be >= 0")
    lo, hi = liap2_interval(epsilon)
    margin = float(hi - g * bounds.d)
    if lo > 0.0:
        margin = float(min(margin, g * bounds.d0 - lo))
    return ConditionReport(
        "liap2",
        margin > 0.0,
        margin,
        {"g": g, "epsilon": epsilon, "D0": bounds.d0, "D": bounds.d, "interval": [lo, hi]},
    )


def refined_liap1_bound(orbit: PeriodicOrbit, system=None) -> dict:
    """Refined fatigue-strength bound from the orbit's activity envelope.

    When the activity oscillations stay below the gain midpoint c, the
    gain slope over the activity range is bounded by G'(max activity),
    which can be far below the global maximum a*b/4; the quadratic-form
    condition g*D <= 3 then allows g up to 3 / G'(max activity).  This is
    an estimate on the activity range, not a certificate on the gain
    argument (see eta_bounds for the conservative version).
    """
    sys_ = system if system is not None else orbit.system
    n = sys_.n
    x_max = float(orbit.samples[:, :n].max())
    d_act = float(gain_prime(x_max, sys_.params.gain))
    return {
        "activity_max": x_max,
        "gain_slope_at_max": d_act,
        "g_bound": 3.0 / d_act,
        "monotone": x_max <= sys_.params.gain.c,
    }


@dataclass(frozen=True)
class EigSeries:
    """Per-sample eigenvalues plus trace/determinant of a transverse block."""

    times: np.ndarray
    eigs: np.ndarray  # (m, k) complex
    trace: np.ndarray
    det: np.ndarray

    def unstable_samples(self) -> np.ndarray:
        return np.nonzero(self.det <= 0.0)[0]


def transverse_eigs_1node(
    orbit: PeriodicOrbit,
    system=None,
    g: float | None = None,
    epsilon: float | None = None,
    counterpart: int = 1,
) -> EigSeries:
    """Eigenvalues, trace, det of the 2x2 block [[-1/eps, -(g/eps) eta], [1, -1]].

    The closed-form quadratic is used; trace = -1/eps - 1 and
    det = (1 + g*eta)/eps are positive-stability certificates at every
    sample for every rate model.
    """
    sys_ = system if system is not None else orbit.system
    eps = sys_.params.epsilon if epsilon is None else epsilon
    gg = sys_.params.g if g is None else g
    e = eta_series(orbit, sys_, counterpart)
    tr = np.full(e.size, -1.0 / eps - 1.0)
    det = (1.0 + gg * e) / eps
    disc = tr * tr - 4.0 * det
    sq = np.sqrt(disc.astype(complex))
    eigs = np.stack([(tr + sq) / 2.0, (tr - sq) / 2.0], axis=1)
    return EigSeries(orbit.times(), eigs, tr, det)


def transverse_eigs_2node(
    orbit: PeriodicOrbit,
    system=None,
    h: float | None = None,
    module: tuple[int, int] = (1, 3),
) -> EigSeries:
    """Eigenvalues of the lateral module's 4x4 block J, with trace/det of eps*J.

    det(eps*J) = eps^2 [(1+g G1)(1+g G2) - h^2 G1 G2] changes sign exactly
    at the lateral stability boundary; samples with det <= 0 show up in
    ``unstable_samples``.
    """
    sys_ = system if system is not None else orbit.system
    eps = sys_.params.epsilon
    from .floquet import resolve_h

    h_val = resolve_h(sys_, h)
    block = two_node_block(sys_, module, h_val)
    mats = np.array([block(s) for s in orbit.samples])
    eJ = mats if sys_.fast else mats * eps
    J = mats if not sys_.fast else mats / eps
    eigs = np.linalg.eigvals(J)
    order = np.argsort(-eigs.real, axis=1)
    eigs = np.take_along_axis(eigs, order, axis=1)
    tr = np.einsum("kii->k", eJ)
    det = np.linalg.det(eJ)
    return EigSeries(orbit.times(), eigs, tr, det)


def lateral_boundary_series(
    orbit: PeriodicOrbit, system=None, module: tuple[int, int] = (1, 3)
) -> np.ndarray:
    """sqrt((g + 1/G1)(g + 1/G2)) per sample: the critical |h| at each point."""
    sys_ = system if system is not None else orbit.system
    g = sys_.params.g
    e1 = eta_series(orbit, sys_, module[0])
    e2 = eta_series(orbit, sys_, module[1])
    return np.sqrt((g + 1.0 / e1) * (g + 1.0 / e2))


def lateral_margin(
    orbit: PeriodicOrbit,
    system=None,
    h: float | None = None,
    module: tuple[int, int] = (1, 3),
) -> ConditionReport:
    """Distance of |h| to the lateral instability boundary along the orbit.

    Holds iff |h| < min over samples of sqrt((g + 1/G1)(g + 1/G2)); strong
    lateral coupling destabilises the synchrony subspace.
    """
    sys_ = system if system is not None else orbit.system
    from .floquet import resolve_h

    h_val = resolve_h(sys_, h)
    boundary = float(lateral_boundary_series(orbit, sys_, module).min())
    margin = float(boundary - abs(h_val))
    return ConditionReport(
        "lateral",
        margin > 0.0,
        margin,
        {"g": sys_.params.g, "h": h_val, "boundary": boundary},
    )


def stability_report(
    orbit: PeriodicOrbit,
    system=None,
    counterpart: int = 1,
    module: tuple[int, int] = (1, 3),
    h: float | None = None,
) -> tuple[EtaBounds, list[ConditionReport]]:
    """Run every applicable analytic condition for one orbit.

    The lateral condition is skipped when no lateral strength is
    resolvable (networks without a beta binding) or the module nodes do
    not exist.
    """
    sys_ = system if system is not None else orbit.system
    g = sys_.params.g
    eps = sys_.params.epsilon
    bounds = eta_bounds(orbit, sys_, counterpart)
    reports = [
        check_liap1(g, bounds),
        check_liap2(g, eps, bounds),
        check_floquet_bound(g, eps, bounds),
    ]
    if max(module) <= sys_.n:
        try:
            reports.append(lateral_margin(orbit, sys_, h, module))
        except UnresolvedSymbol:
            pass
    return bounds, reports
