"""Deterministic fixed-step RK4 integration of the rate ODE and its variational flow."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFinite

_FINITE_CHECK_EVERY = 200


def default_step(epsilon: float) -> float:
    """Default integration step: small enough to resolve the fast subsystem."""
    return min(1e-3, epsilon / 20.0)


@dataclass(frozen=True)
class IntegratorConfig:
    h_int: float
    method: str = "rk4"
    max_time: float = 1e5

    def __post_init__(self):
        if self.h_int <= 0:
            raise ValueError("step must be positive")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled trajectory; samples[k] is the state at t0 + k*step."""

    t0: float
    t1: float
    step: float
    samples: np.ndarray  # (k+1, dim)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(self.samples.shape[0])


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(s0, system, cfg: IntegratorConfig, t0: float, t1: float) -> Trajectory:
    """Classical RK4 on the uniform grid t0 + k*h; deterministic for fixed inputs.

    The trajectory ends at the last grid point not beyond t1.
    """
    if t1 <= t0:
        raise ValueError("t1 must exceed t0")
    if t1 - t0 > cfg.max_time:
        raise ValueError(f"integration span exceeds max_time={cfg.max_time}")
    h = cfg.h_int
    n_steps = int(np.floor((t1 - t0) / h + 1e-9))
    y = np.array(s0, dtype=float)
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    f = system.rhs
    for k in range(n_steps):
        y = _rk4_step(f, t0 + k * h, y, h)
        out[k + 1] = y
        if (k + 1) % _FINITE_CHECK_EVERY == 0 and not np.all(np.isfinite(y)):
            raise NonFinite(f"non-finite state at t={t0 + (k + 1) * h}")
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"non-finite state at t={t0 + n_steps * h}")
    return Trajectory(t0, t0 + n_steps * h, h, out)


def settle(s0, system, t_transient: float, step: float | None = None) -> np.ndarray:
    """Integrate for t_transient without storing samples; returns the final state."""
    if t_transient < 0:
        raise ValueError("transient must be >= 0")
    if step is None:
        eps = getattr(getattr(system, "params", None), "epsilon", None)
        step = default_step(eps) if eps is not None else 1e-3
    y = np.array(s0, dtype=float)
    n_steps = int(round(t_transient / step))
    f = system.rhs
    for k in range(n_steps):
        y = _rk4_step(f, k * step, y, step)
        if (k + 1) % (5 * _FINITE_CHECK_EVERY) == 0 and not np.all(np.isfinite(y)):
            raise NonFinite(f"non-finite state at t={(k + 1) * step}")
    if not np.all(np.isfinite(y)):
        raise NonFinite("non-finite state after transient")
    return y


def flow(s0, system, T: float, step: float) -> np.ndarray:
    """State after time exactly T (the step is shrunk to divide T evenly)."""
    n_steps = max(1, int(np.ceil(T / step - 1e-9)))
    h = T / n_steps
    y = np.array(s0, dtype=float)
    f = system.rhs
    for k in range(n_steps):
        y = _rk4_step(f, k * h, y, h)
    if not np.all(np.isfinite(y)):
        raise NonFinite("non-finite state in flow")
    return y


def flow_with_variational(s0, V0, system, step: float, t0: float, t1: float):
    """Integrate x' = f(x) together with V' = Df(x) V using shared RK4 stages.

    V0 may be square or a rectangular block of columns.  The step is shrunk
    so the integration lands exactly on t1.  Returns (x(t1), V(t1)).
    """
    T = t1 - t0
    if T < 0:
        raise ValueError("t1 must be >= t0")
    if T == 0:
        return np.array(s0, dtype=float), np.array(V0, dtype=float)
    n_steps = max(1, int(np.ceil(T / step - 1e-9)))
    h = T / n_steps
    x = np.array(s0, dtype=float)
    V = np.array(V0, dtype=float)
    if V.shape[0] != x.size:
        raise ValueError("V0 row count must match the state dimension")
    f, jac = system.rhs, system.jacobian

    def stage(t, x, V):
        return f(t, x), jac(x) @ V

    for k in range(n_steps):
        t = t0 + k * h
        kx1, kV1 = stage(t, x, V)
        kx2, kV2 = stage(t + 0.5 * h, x + 0.5 * h * kx1, V + 0.5 * h * kV1)
        kx3, kV3 = stage(t + 0.5 * h, x + 0.5 * h * kx2, V + 0.5 * h * kV2)
        kx4, kV4 = stage(t + h, x + h * kx3, V + h * kV3)
        x = x + (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4)
        V = V + (h / 6.0) * (kV1 + 2.0 * kV2 + 2.0 * kV3 + kV4)
        if (k + 1) % _FINITE_CHECK_EVERY == 0 and not (
            np.all(np.isfinite(x)) and np.all(np.isfinite(V))
        ):
            raise NonFinite(f"non-finite variational state at t={t + h}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(V))):
        raise NonFinite("non-finite variational state")
    return x, V


def write_trajectory_csv(traj: Trajectory, path, n_nodes: int) -> None:
    """CSV export: header t,x1E,...,xnE,x1H,...,xnH, full double precision."""
    cols = (
        ["t"]
        + [f"x{i}E" for i in range(1, n_nodes + 1)]
        + [f"x{i}H" for i in range(1, n_nodes + 1)]
    )
    times = traj.times
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for t, row in zip(times, traj.samples):
            fh.write(",".join(repr(float(v)) for v in (t, *row)) + "\n")
