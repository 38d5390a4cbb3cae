"""Periodic orbit detection, phase patterns, and biped gait classification."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from . import odeint
from .errors import ClosureFailure, IrregularPeriod, NoOscillation
from .netgraph import Coloring
from .odeint import IntegratorConfig, Trajectory, settle  # re-exported

AMPLITUDE_FLOOR = 1e-4
GAIT_TOL = 0.02
WAVE_TOL = 1e-4

GAIT_TEMPLATES = {
    "hop": (0.0, 0.0, 0.0, 0.0),
    "walk": (0.0, 0.5, 0.5, 0.0),
    "jump": (0.0, 0.5, 0.0, 0.5),
    "run": (0.0, 0.0, 0.5, 0.5),
}


@dataclass(frozen=True)
class PeriodicOrbit:
    """Period T plus m uniformly spaced samples over one period.

    samples[k] is the state at t = k*T/m from the base state; the base
    state is repeated conceptually at t = T (closure_defect measures how
    well it actually returns).
    """

    period: float
    samples: np.ndarray  # (m, dim)
    system: object
    closure_defect: float

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    @property
    def base_state(self) -> np.ndarray:
        return self.samples[0]

    def times(self) -> np.ndarray:
        return self.period * np.arange(self.m) / self.m

    def interpolator(self) -> CubicSpline:
        """Periodic cubic interpolant of the full state over one period."""
        t = np.concatenate([self.times(), [self.period]])
        y = np.vstack([self.samples, self.samples[:1]])
        return CubicSpline(t, y, bc_type="periodic")


@dataclass(frozen=True)
class PhasePattern:
    """Synchrony clusters plus per-node phase shifts as fractions of the period."""

    clusters: tuple[tuple[int, ...], ...]
    shifts: dict[int, float]
    period: float


@dataclass(frozen=True)
class OrbitConfig:
    """Pipeline settings for locating an attracting periodic orbit."""

    seed: int = 0
    transient: float = 300.0
    step: float | None = None  # None: odeint.default_step(epsilon)
    transient_step: float | None = None  # None: max(step, 4e-3)
    samples: int = 512
    window: float = 150.0
    probe: int = 1
    closure_tol: float = 1e-6
    amp_floor: float = AMPLITUDE_FLOOR

    def resolved_step(self, epsilon: float) -> float:
        return self.step if self.step is not None else odeint.default_step(epsilon)

    def resolved_transient_step(self, epsilon: float) -> float:
        if self.transient_step is not None:
            return self.transient_step
        return max(self.resolved_step(epsilon), 4e-3)


def random_state(n_nodes: int, seed: int) -> np.ndarray:
    """Uniform random initial state in [0,1]^(2n) from a pinned seed."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 1.0, 2 * n_nodes)


def _refine_crossing(t: np.ndarray, x: np.ndarray, k: int) -> float:
    """Crossing time of x=0 between samples k and k+1, by local cubic fit."""
    lo = max(0, k - 1)
    hi = min(len(t), k + 3)
    tt, xx = t[lo:hi], x[lo:hi]
    coeffs = np.polyfit(tt - tt[0], xx, min(3, len(tt) - 1))
    roots = np.roots(coeffs) + tt[0]
    real = roots[np.abs(roots.imag) < 1e-9].real
    inside = real[(real >= t[k] - 1e-12) & (real <= t[k + 1] + 1e-12)]
    if inside.size == 0:
        # fall back to the linear estimate
        return t[k] + (t[k + 1] - t[k]) * x[k] / (x[k] - x[k + 1])
    # closest root to the bracketing interval midpoint
    mid = 0.5 * (t[k] + t[k + 1])
    return float(inside[np.argmin(np.abs(inside - mid))])


def upward_crossings(traj: Trajectory, probe_node: int = 1) -> np.ndarray:
    """Refined times where the probe activity crosses its temporal mean upward."""
    x = traj.samples[:, probe_node - 1].astype(float)
    t = traj.times
    d = x - x.mean()
    idx = np.nonzero((d[:-1] < 0.0) & (d[1:] >= 0.0))[0]
    return np.array([_refine_crossing(t, d, k) for k in idx])


def detect_period(
    traj: Trajectory, probe_node: int = 1, amp_floor: float = AMPLITUDE_FLOOR
) -> float:
    """Period from mean-crossing gaps of the probe node's activity.

    Raises NoOscillation when the peak-to-peak amplitude is below the
    floor, and IrregularPeriod when the crossing gaps scatter by more
    than 1% of their mean.
    """
    x = traj.samples[:, probe_node - 1]
    if np.ptp(x) < amp_floor:
        raise NoOscillation(
            f"probe node {probe_node} peak-to-peak {np.ptp(x):.3g} below floor {amp_floor:g}"
        )
    crossings = upward_crossings(traj, probe_node)
    if crossings.size < 6:
        raise NoOscillation(
            f"only {crossings.size} mean crossings in window; need at least 6"
        )
    gaps = np.diff(crossings)
    T = (crossings[-1] - crossings[0]) / (crossings.size - 1)
    if np.std(gaps) > 0.01 * T:
        raise IrregularPeriod(
            f"crossing gap spread {np.std(gaps):.3g} exceeds 1% of mean gap {T:.6g}"
        )
    return float(T)


def sample_orbit(
    s_on_orbit,
    system,
    T: float,
    m: int = 512,
    step: float | None = None,
    closure_tol: float = 1e-6,
) -> PeriodicOrbit:
    """Sample one period into m uniform states, checking that the loop closes."""
    if m < 256:
        raise ValueError("orbit sampling needs m >= 256")
    h = step if step is not None else odeint.default_step(system.params.epsilon)
    seg = T / m
    samples = np.empty((m, system.dim))
    y = np.array(s_on_orbit, dtype=float)
    for k in range(m):
        samples[k] = y
        y = odeint.flow(y, system, seg, h)
    defect = float(np.linalg.norm(y - samples[0]))
    scale = max(np.linalg.norm(samples[0]), 1.0)
    if defect > closure_tol * scale:
        raise ClosureFailure(
            f"orbit closure defect {defect:.3g} exceeds {closure_tol:g} * state norm"
        )
    return PeriodicOrbit(float(T), samples, system, defect)


def find_periodic_orbit(system, cfg: OrbitConfig = OrbitConfig()) -> PeriodicOrbit:
    """Settle a random initial state, detect the period, and sample the orbit."""
    eps = system.params.epsilon
    h = cfg.resolved_step(eps)
    s0 = random_state(system.n, cfg.seed)
    s1 = settle(s0, system, cfg.transient, cfg.resolved_transient_step(eps))
    traj = odeint.integrate(s1, system, IntegratorConfig(h), 0.0, cfg.window)
    T = detect_period(traj, cfg.probe, cfg.amp_floor)
    return sample_orbit(
        traj.samples[-1], system, T, cfg.samples, h, cfg.closure_tol
    )


def _circular_shift(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction s in [0,1) such that a(t) is approximately b(t + s*T).

    Uses the argmax of the circular cross-correlation of the mean-free
    waveforms, refined by quadratic interpolation of the correlation peak.
    """
    m = a.size
    fa = np.fft.rfft(a - a.mean())
    fb = np.fft.rfft(b - b.mean())
    c = np.fft.irfft(fa * np.conj(fb), n=m)
    k = int(np.argmax(c))
    cm, c0, cp = c[(k - 1) % m], c[k], c[(k + 1) % m]
    denom = cm - 2.0 * c0 + cp
    delta = 0.0 if denom == 0.0 else 0.5 * (cm - cp) / denom
    return float(((-(k + delta)) % m) / m)


def _circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def phase_shifts(
    orbit: PeriodicOrbit,
    reference_node: int = 1,
    wave_tol: float = WAVE_TOL,
    shift_tol: float = GAIT_TOL,
) -> PhasePattern:
    """Per-node phase shift relative to the reference node, plus synchrony clusters.

    Nodes land in one cluster when their shifts agree and their activity
    waveforms match in sup norm (relative to the waveform amplitude).
    """
    n = orbit.system.n
    waves = orbit.samples[:, :n].T  # (n, m) activity waveforms
    ref = waves[reference_node - 1]
    shifts = {
        i: (0.0 if i == reference_node else _circular_shift(waves[i - 1], ref))
        for i in range(1, n + 1)
    }
    amp = max(float(np.ptp(ref)), 1e-12)
    clusters: list[list[int]] = []
    for i in range(1, n + 1):
        placed = False
        for cluster in clusters:
            j = cluster[0]
            if _circ_dist(shifts[i], shifts[j]) <= shift_tol:
                if float(np.max(np.abs(waves[i - 1] - waves[j - 1]))) <= wave_tol * amp:
                    cluster.append(i)
                    placed = True
                    break
        if not placed:
            clusters.append([i])
    return PhasePattern(
        tuple(tuple(c) for c in clusters), shifts, orbit.period
    )


def classify_gait(pattern: PhasePattern, tol: float = GAIT_TOL) -> str:
    """Match 4-node phase shifts against the primary biped gait templates.

    Classification is invariant under re-referencing (adding a constant
    to all shifts): shifts are first normalised to node 1.
    """
    nodes = sorted(pattern.shifts)
    if len(nodes) != 4:
        return "other"
    base = pattern.shifts[nodes[0]]
    s = [(pattern.shifts[i] - base) % 1.0 for i in nodes]
    for name, tmpl in GAIT_TEMPLATES.items():
        if all(_circ_dist(si, ti) <= tol for si, ti in zip(s, tmpl)):
            return name
    return "other"


def synchrony_check(
    traj: Trajectory, col: Coloring, tol: float
) -> tuple[bool, float]:
    """Whether same-coloured nodes agree (full state, sup norm) on the tail.

    The tail is the last 25% of the trajectory.  Returns (ok, max defect).
    """
    n_nodes = traj.samples.shape[1] // 2
    if len(col.colors) != n_nodes:
        raise ValueError("colouring does not match the trajectory dimension")
    tail = traj.samples[3 * traj.samples.shape[0] // 4 :]
    defect = 0.0
    for cluster in col.clusters():
        if len(cluster) < 2:
            continue
        rep = cluster[0]
        rep_cols = [rep - 1, n_nodes + rep - 1]
        for i in cluster[1:]:
            cols = [i - 1, n_nodes + i - 1]
            d = float(np.max(np.abs(tail[:, cols] - tail[:, rep_cols])))
            defect = max(defect, d)
    return defect < tol, defect
