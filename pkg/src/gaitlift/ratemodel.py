"""Wilson-Cowan rate model bound to a network: gain, RHS, and analytic Jacobian.

Each node carries an activity variable x^E and a fatigue variable x^H.
State layout is [x^E_1..n, x^H_1..n].  In the standard time convention

    eps * dx^E_i/dt = -x^E_i + G(-g x^H_i + sum_j A_ij x^E_j + I_i)
          dx^H_i/dt =  x^E_i - x^H_i

The "fast" convention is the same vector field multiplied by eps
(activity relaxes on unit time, fatigue at rate eps).  Both produce the
same orbits as curves and the same Floquet multipliers; only reported
periods differ by the factor 1/eps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import DimensionMismatch, UnresolvedSymbol
from .netgraph import Network

STANDARD_TIME = "standard"
FAST_TIME = "fast"


@dataclass(frozen=True)
class GainParams:
    """Logistic gain G(x) = a / (1 + exp(-b (x - c)))."""

    a: float = 1.0
    b: float = 8.0
    c: float = 1.0

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("gain amplitude and steepness must be positive")

    @property
    def max_slope(self) -> float:
        return self.a * self.b / 4.0


def gain(x, gp: GainParams = GainParams()):
    """Saturating gain; expit keeps the exponentials overflow-free."""
    return gp.a * expit(gp.b * (np.asarray(x, dtype=float) - gp.c))


def gain_prime(x, gp: GainParams = GainParams()):
    """Derivative of the gain; positive, maximal (= a*b/4) at x = c."""
    s = expit(gp.b * (np.asarray(x, dtype=float) - gp.c))
    return gp.a * gp.b * s * (1.0 - s)


@dataclass(frozen=True)
class RateParams:
    """Rate-model parameters plus the symbol bindings for network weights.

    ``I`` may be a scalar (broadcast over nodes) or a per-node tuple.
    ``h`` is the lateral-module coupling; None means "use beta".
    """

    epsilon: float
    g: float
    I: float | tuple[float, ...]
    gain: GainParams = GainParams()
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    h: float | None = None
    time: str = STANDARD_TIME

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.g < 0:
            raise ValueError("fatigue strength g must be >= 0")
        if self.time not in (STANDARD_TIME, FAST_TIME):
            raise ValueError(f"unknown time convention {self.time!r}")

    def lateral_strength(self) -> float:
        """Resolved h: explicit value, else beta."""
        if self.h is not None:
            return float(self.h)
        if self.beta is None:
            raise UnresolvedSymbol("h defaults to beta, but beta is unset")
        return float(self.beta)


def resolve_weight(w, params: RateParams) -> float:
    if isinstance(w, str):
        if w == "h":
            return params.lateral_strength()
        v = getattr(params, w, None)
        if w not in ("alpha", "beta", "gamma") or v is None:
            raise UnresolvedSymbol(f"weight symbol {w!r} has no binding")
        return float(v)
    return float(w)


def connection_matrix(net: Network, params: RateParams) -> np.ndarray:
    """Resolved numeric matrix A with A[i,j] = total weight of arrows j -> i."""
    A = np.zeros((net.n, net.n))
    for a in net.arrows:
        A[a.head - 1, a.tail - 1] += resolve_weight(a.weight, params)
    return A


def input_vector(net: Network, params: RateParams) -> np.ndarray:
    if np.isscalar(params.I):
        return np.full(net.n, float(params.I))
    I = np.asarray(params.I, dtype=float)
    if I.shape != (net.n,):
        raise DimensionMismatch(f"I has {I.size} entries for {net.n} nodes")
    return I


class RateSystem:
    """A network bound to rate parameters; provides rhs and Jacobian.

    Immutable once built; safe to share across threads.
    """

    def __init__(self, net: Network, params: RateParams):
        self.net = net
        self.params = params
        self.n = net.n
        self.dim = 2 * net.n
        self.A = connection_matrix(net, params)
        self.I = input_vector(net, params)
        self.fast = params.time == FAST_TIME
        self._gp = params.gain

    def split(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        s = np.asarray(s, dtype=float)
        if s.shape != (self.dim,):
            raise DimensionMismatch(f"state has shape {s.shape}, expected ({self.dim},)")
        return s[: self.n], s[self.n :]

    def gain_argument(self, s: np.ndarray) -> np.ndarray:
        """Per-node argument of the gain: -g x^H + A x^E + I."""
        xE, xH = self.split(s)
        return self.A @ xE - self.params.g * xH + self.I

    def rhs(self, t: float, s: np.ndarray) -> np.ndarray:
        xE, xH = self.split(s)
        y = self.A @ xE - self.params.g * xH + self.I
        dE = -xE + gain(y, self._gp)
        dH = xE - xH
        if self.fast:
            return np.concatenate([dE, self.params.epsilon * dH])
        return np.concatenate([dE / self.params.epsilon, dH])

    def jacobian(self, s: np.ndarray) -> np.ndarray:
        """Exact Jacobian of the rhs at state s."""
        eps = self.params.epsilon
        gp = gain_prime(self.gain_argument(s), self._gp)
        n = self.n
        J = np.zeros((self.dim, self.dim))
        J[:n, :n] = gp[:, None] * self.A
        J[:n, :n] -= np.eye(n)
        J[:n, n:] = np.diag(-self.params.g * gp)
        J[n:, :n] = np.eye(n)
        J[n:, n:] = -np.eye(n)
        if self.fast:
            J[n:, :] *= eps
        else:
            J[:n, :] /= eps
        return J

    def trace_jacobian(self) -> float:
        """State-independent trace of the Jacobian (no self-coupling)."""
        n, eps = self.n, self.params.epsilon
        if self.fast:
            return -n * (1.0 + eps)
        return -n * (1.0 / eps + 1.0)


def rhs(t: float, s, net: Network, params: RateParams) -> np.ndarray:
    """Functional form of the rate equations (builds the system on the fly)."""
    return RateSystem(net, params).rhs(t, np.asarray(s, dtype=float))


def jacobian(s, net: Network, params: RateParams) -> np.ndarray:
    """Functional form of the analytic Jacobian."""
    return RateSystem(net, params).jacobian(np.asarray(s, dtype=float))


# --- parameter files -----------------------------------------------------------


def params_from_dict(doc: dict) -> RateParams:
    gd = doc.get("gain") or {}
    gainp = GainParams(
        a=float(gd.get("a", 1.0)), b=float(gd.get("b", 8.0)), c=float(gd.get("c", 1.0))
    )
    I = doc["I"]
    if isinstance(I, (list, tuple)):
        I = tuple(float(v) for v in I)
    else:
        I = float(I)

    def opt(key):
        v = doc.get(key)
        return None if v is None else float(v)

    return RateParams(
        epsilon=float(doc["epsilon"]),
        g=float(doc["g"]),
        I=I,
        gain=gainp,
        alpha=opt("alpha"),
        beta=opt("beta"),
        gamma=opt("gamma"),
        h=opt("h"),
        time=doc.get("time", STANDARD_TIME),
    )


def params_to_dict(p: RateParams) -> dict:
    return {
        "epsilon": p.epsilon,
        "g": p.g,
        "I": list(p.I) if isinstance(p.I, tuple) else p.I,
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma": p.gamma,
        "h": p.h,
        "gain": {"a": p.gain.a, "b": p.gain.b, "c": p.gain.c},
        "time": p.time,
    }


def load_params(path) -> RateParams:
    with open(path, "r", encoding="utf-8") as fh:
        return params_from_dict(json.load(fh))
