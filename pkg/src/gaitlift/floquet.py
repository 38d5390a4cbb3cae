"""Monodromy matrices and Floquet multipliers: full lifts, CPG, and transverse blocks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import odeint
from .errors import NoConvergence, StructureMismatch
from .netgraph import Lift
from .orbit import PeriodicOrbit
from .ratemodel import gain_prime

UNIT_TOL = 0.02
_EIG_LIMIT = 64


@dataclass(frozen=True)
class MonodromyResult:
    """Fundamental matrix over one period, with optional block annotation.

    ``blocks`` maps a tag ("cpg", "transverse:1", ...) to the state indices
    of the corresponding diagonal block.
    """

    matrix: np.ndarray
    period: float
    blocks: dict | None = None


@dataclass(frozen=True)
class MultiplierSet:
    """Floquet multipliers sorted by decreasing modulus, each with a block tag."""

    entries: tuple[tuple[complex, str], ...]

    @classmethod
    def build(cls, tagged) -> "MultiplierSet":
        ordered = sorted(tagged, key=lambda e: -abs(e[0]))
        return cls(tuple((complex(v), t) for v, t in ordered))

    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.entries])

    def moduli(self) -> np.ndarray:
        return np.abs(self.values())

    def tags(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.entries)

    def by_tag(self, tag: str) -> np.ndarray:
        return np.array([v for v, t in self.entries if t == tag])

    def to_json(self) -> list[dict]:
        return [
            {"re": v.real, "im": v.imag, "abs": abs(v), "block": t}
            for v, t in self.entries
        ]


def eig(M: np.ndarray) -> np.ndarray:
    """Eigenvalues of a real dense matrix, sorted by decreasing modulus."""
    M = np.asarray(M, dtype=float)
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if M.shape[0] > _EIG_LIMIT:
        raise ValueError(f"dense eigensolve limited to {_EIG_LIMIT}x{_EIG_LIMIT}")
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return vals[np.argsort(-np.abs(vals))]


def monodromy(
    orbit: PeriodicOrbit, system=None, step: float | None = None
) -> MonodromyResult:
    """Variational flow over one period with V0 = identity.

    The nonlinear state is re-integrated in lockstep from the orbit base
    point so the linearisation is evaluated on a consistent trajectory.
    """
    sys_ = system if system is not None else orbit.system
    h = step if step is not None else odeint.default_step(sys_.params.epsilon)
    V0 = np.eye(sys_.dim)
    _, V = odeint.flow_with_variational(
        orbit.base_state, V0, sys_, h, 0.0, orbit.period
    )
    return MonodromyResult(V, orbit.period)


def _flow_with_block(system, x0, block_fn, dim_block, T, step):
    """Integrate x' = f(x) in lockstep with V' = B(x) V; V0 = identity."""
    n_steps = max(1, int(np.ceil(T / step - 1e-9)))
    h = T / n_steps
    x = np.array(x0, dtype=float)
    V = np.eye(dim_block)
    f = system.rhs

    def stage(t, x, V):
        return f(t, x), block_fn(x) @ V

    for k in range(n_steps):
        t = k * h
        kx1, kV1 = stage(t, x, V)
        kx2, kV2 = stage(t + 0.5 * h, x + 0.5 * h * kx1, V + 0.5 * h * kV1)
        kx3, kV3 = stage(t + 0.5 * h, x + 0.5 * h * kx2, V + 0.5 * h * kV2)
        kx4, kV4 = stage(t + h, x + h * kx3, V + h * kV3)
        x = x + (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4)
        V = V + (h / 6.0) * (kV1 + 2.0 * kV2 + 2.0 * kV3 + kV4)
    return x, V


def eta_at(system, state, node: int) -> float:
    """Gain-slope of one CPG node at a state: G'(-g x^H + A x^E + I)."""
    y = system.gain_argument(state)
    return float(gain_prime(y[node - 1], system.params.gain))


def one_node_block(system, counterpart: int):
    """Coefficient matrix of the transverse deviation of a single chain node.

    The node replicates the inputs of ``counterpart`` in the CPG, so its
    linearised deviation (u, v) = (activity, fatigue) satisfies
    u' = (-u - g*eta(t)*v)/eps, v' = u - v in standard time, with the
    whole matrix scaled by eps in the fast convention.
    """
    eps = system.params.epsilon
    g = system.params.g

    if system.fast:

        def block(x):
            e = eta_at(system, x, counterpart)
            return np.array([[-1.0, -g * e], [eps, -eps]])

    else:

        def block(x):
            e = eta_at(system, x, counterpart)
            return np.array([[-1.0 / eps, -(g / eps) * e], [1.0, -1.0]])

    return block


def two_node_block(system, module: tuple[int, int], h: float):
    """Coefficient matrix of a laterally coupled 2-node module's deviation.

    State order (u1, u2, v1, v2): activities of the two module nodes, then
    fatigues.  G1, G2 are the gain slopes of the two CPG counterparts
    along the orbit; h is the lateral coupling between the module nodes.
    """
    eps = system.params.epsilon
    g = system.params.g
    c1, c2 = module

    def block(x):
        y = system.gain_argument(x)
        gp = gain_prime(y, system.params.gain)
        G1, G2 = float(gp[c1 - 1]), float(gp[c2 - 1])
        eJ = np.array(
            [
                [-1.0, h * G1, -g * G1, 0.0],
                [h * G2, -1.0, 0.0, -g * G2],
                [eps, 0.0, -eps, 0.0],
                [0.0, eps, 0.0, -eps],
            ]
        )
        return eJ if system.fast else eJ / eps

    return block


def resolve_h(system, h: float | None) -> float:
    return system.params.lateral_strength() if h is None else float(h)


def transverse_monodromy_1node(
    orbit: PeriodicOrbit,
    system=None,
    counterpart: int = 1,
    step: float | None = None,
) -> MonodromyResult:
    """Monodromy of the 2x2 transverse system of a single-node chain module."""
    sys_ = system if system is not None else orbit.system
    h_int = step if step is not None else odeint.default_step(sys_.params.epsilon)
    _, V = _flow_with_block(
        sys_, orbit.base_state, one_node_block(sys_, counterpart), 2, orbit.period, h_int
    )
    return MonodromyResult(V, orbit.period, {"transverse:1": (0, 1)})


def transverse_monodromy_2node(
    orbit: PeriodicOrbit,
    system=None,
    module: tuple[int, int] = (1, 3),
    h: float | None = None,
    step: float | None = None,
) -> MonodromyResult:
    """Monodromy of the 4x4 transverse system of a two-node lateral module.

    ``module`` names the two CPG nodes the module nodes are synchronous
    with; ``h`` defaults to the parameters' lateral strength (beta).
    """
    sys_ = system if system is not None else orbit.system
    h_val = resolve_h(sys_, h)
    h_int = step if step is not None else odeint.default_step(sys_.params.epsilon)
    _, V = _flow_with_block(
        sys_, orbit.base_state, two_node_block(sys_, module, h_val), 4, orbit.period, h_int
    )
    return MonodromyResult(V, orbit.period, {"transverse:1": (0, 1, 2, 3)})


def lift_blocks(lift: Lift) -> dict:
    """State-index blocks (activities then fatigues) of a lift's node groups."""
    n = lift.network.n
    idx = lambda nodes: tuple([i - 1 for i in nodes] + [n + i - 1 for i in nodes])
    blocks = {"cpg": idx(lift.cpg_nodes)}
    for k, mod in enumerate(lift.modules, start=1):
        blocks[f"transverse:{k}"] = idx(mod)
    return blocks


def split_multipliers(
    full: MonodromyResult, lift: Lift, repeat_tol: float | None = 0.01
) -> MultiplierSet:
    """Partition a full-lift monodromy's multipliers into CPG and module blocks.

    Feedforward order makes the monodromy block-triangular, so each
    diagonal block carries its own multipliers.  Module blocks must repeat
    along the chain (same module size implies same multipliers up to
    ``repeat_tol`` relative modulus); a violation means the matrix did not
    come from a converged lift orbit.
    """
    n = lift.network.n
    if full.matrix.shape != (2 * n, 2 * n):
        raise StructureMismatch(
            f"monodromy is {full.matrix.shape}, lift needs {(2 * n, 2 * n)}"
        )
    blocks = lift_blocks(lift)
    tagged = []
    per_module: list[np.ndarray] = []
    for tag, idx in blocks.items():
        sub = full.matrix[np.ix_(idx, idx)]
        vals = eig(sub)
        tagged.extend((v, tag) for v in vals)
        if tag.startswith("transverse:"):
            per_module.append(np.sort(np.abs(vals)))
    if repeat_tol is not None and len(per_module) > 1:
        first = per_module[0]
        for k, mods in enumerate(per_module[1:], start=2):
            if mods.shape != first.shape:
                continue  # mixed module sizes repeat per size class
            scale = np.maximum(first, 1e-300)
            if np.max(np.abs(mods - first) / scale) > repeat_tol:
                raise StructureMismatch(
                    f"module {k} transverse multipliers do not repeat module 1's"
                )
    return MultiplierSet.build(tagged)


def stability_verdict(ms: MultiplierSet, unit_tol: float = UNIT_TOL) -> str:
    """stable / unstable / marginal from the multiplier moduli.

    Stable requires exactly one multiplier (the trivial one, CPG-tagged)
    within ``unit_tol`` of modulus 1 and everything else below 1 - unit_tol.
    """
    mods = ms.moduli()
    if np.any(mods > 1.0 + unit_tol):
        return "unstable"
    in_band = [
        (m, t) for m, (v, t) in zip(mods, ms.entries) if abs(m - 1.0) <= unit_tol
    ]
    rest_ok = np.sum(mods < 1.0 - unit_tol) == len(mods) - len(in_band)
    if len(in_band) == 1 and in_band[0][1] == "cpg" and rest_ok:
        return "stable"
    return "marginal"


def liouville_product(orbit: PeriodicOrbit, system=None) -> float:
    """exp of the period integral of trace(Df) along the orbit (trapezoid rule)."""
    sys_ = system if system is not None else orbit.system
    traces = np.array([np.trace(sys_.jacobian(s)) for s in orbit.samples])
    # periodic trapezoid: uniform samples, wrap point equals the base point
    return float(np.exp(traces.mean() * orbit.period))


def conjugate_pairing_defect(values: np.ndarray, atol_scale: float = 1.0) -> float:
    """Max distance from each non-real eigenvalue to its nearest conjugate."""
    vals = np.asarray(values, dtype=complex)
    defect = 0.0
    for v in vals:
        if abs(v.imag) > 0:
            defect = max(defect, float(np.min(np.abs(vals - np.conj(v)))))
    return defect
