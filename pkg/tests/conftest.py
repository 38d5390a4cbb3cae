"""Shared fixtures: expensive converged orbits are computed once per session."""

from __future__ import annotations

import numpy as np
import pytest

import gaitlift as gl
from gaitlift import tables
from gaitlift.netgraph import Arrow, LiftSpec, Network, build_lift, builtin, quotient
from gaitlift.orbit import OrbitConfig, find_periodic_orbit
from gaitlift.ratemodel import RateSystem, params_from_dict


def deck_system(net, deck) -> RateSystem:
    return RateSystem(net, params_from_dict(deck["params"]))


def deck_orbit(system, deck):
    cfg = OrbitConfig(seed=deck["seed"], transient=deck["transient"], window=deck["window"])
    return find_periodic_orbit(system, cfg)


def random_cpg(rng: np.random.Generator, n_nodes: int) -> Network:
    """Small random CPG: 1-3 typed input arrows per node, no self-arrows."""
    kinds = ("a", "b", "c")
    arrows = []
    for head in range(1, n_nodes + 1):
        n_in = int(rng.integers(1, 4))
        tails = rng.choice([t for t in range(1, n_nodes + 1) if t != head],
                           size=min(n_in, n_nodes - 1), replace=False)
        for tail in tails:
            kind = kinds[int(rng.integers(0, len(kinds)))]
            weight = float(np.round(rng.uniform(-2.0, 2.0), 3))
            arrows.append(Arrow(int(tail), head, kind, weight))
    return Network(("std",) * n_nodes, tuple(arrows))


RUN_PARAMS = {"epsilon": 0.67, "g": 1.8, "I": 1.1, "alpha": -0.5, "beta": -0.6, "gamma": 0.8}


@pytest.fixture(scope="session")
def chain7_cpg():
    net, col = builtin("chain7")
    cpg, _ = quotient(net, col)
    return cpg


@pytest.fixture(scope="session")
def chain7_orbits(chain7_cpg):
    """CPG orbits for the four chain parameter decks, keyed by deck name."""
    out = {}
    for deck in tables.CHAIN7_DECKS:
        system = deck_system(chain7_cpg, deck)
        out[deck["name"]] = (system, deck_orbit(system, deck))
    return out


@pytest.fixture(scope="session")
def biped_net():
    net, _ = builtin("biped4")
    return net


@pytest.fixture(scope="session")
def biped42_orbits(biped_net):
    """Gait orbits at eps=0.67, g=1.8, I=1.1, keyed by gait name."""
    out = {}
    for deck in tables.BIPED_GAIT_DECKS:
        system = deck_system(biped_net, deck)
        out[deck["name"]] = (system, deck_orbit(system, deck))
    return out


@pytest.fixture(scope="session")
def biped48_orbits(biped_net):
    """Gait orbits at g=1.4, eps=0.5 (hop at I=0.7), keyed by gait name."""
    out = {}
    for deck in tables.GAIT_CLASS_DECKS:
        system = deck_system(biped_net, deck)
        out[deck["name"]] = (system, deck_orbit(system, deck))
    return out


def _lift_orbit(name: str):
    lift = gl.builtin_lift(name)
    system = RateSystem(lift.network, params_from_dict(RUN_PARAMS))
    cfg = OrbitConfig(seed=1, transient=600.0, window=120.0)
    return lift, system, find_periodic_orbit(system, cfg)


@pytest.fixture(scope="session")
def ff1_run():
    return _lift_orbit("biped-ff(1)")


@pytest.fixture(scope="session")
def ff2_run():
    return _lift_orbit("biped-ff(2)")


@pytest.fixture(scope="session")
def lateral1_run():
    return _lift_orbit("biped-lateral(1)")
