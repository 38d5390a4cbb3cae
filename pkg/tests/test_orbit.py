import numpy as np
import pytest

from gaitlift.errors import ClosureFailure, IrregularPeriod, NoOscillation
from gaitlift.netgraph import Coloring, builtin
from gaitlift.odeint import IntegratorConfig, Trajectory, integrate
from gaitlift.orbit import (
    GAIT_TEMPLATES,
    OrbitConfig,
    PeriodicOrbit,
    PhasePattern,
    classify_gait,
    detect_period,
    find_periodic_orbit,
    phase_shifts,
    random_state,
    sample_orbit,
    settle,
    synchrony_check,
)
from gaitlift.ratemodel import RateParams, RateSystem


def synthetic_trajectory(fn, t1=50.0, step=1e-3, cols=1):
    t = np.arange(0.0, t1 + step / 2, step)
    data = np.stack([fn(t, k) for k in range(cols)], axis=1)
    return Trajectory(0.0, t[-1], step, data)


def synthetic_orbit(shifts, T=5.0, m=512, waveform=None):
    """Fabricated 4-node orbit whose activities are shifted copies of one waveform."""
    wf = waveform or (lambda s: np.sin(2 * np.pi * s) + 0.3 * np.sin(4 * np.pi * s))
    grid = np.arange(m) / m
    samples = np.zeros((m, 8))
    for i, s in enumerate(shifts):
        samples[:, i] = wf((grid + s) % 1.0)
        samples[:, 4 + i] = 0.5 * wf((grid + s) % 1.0)

    class Stub:
        n = 4
        dim = 8

    orb = PeriodicOrbit(T, samples, Stub(), 0.0)
    return orb


class TestDetectPeriod:
    def test_synthetic_sine(self):
        T = 3.7
        traj = synthetic_trajectory(lambda t, k: np.sin(2 * np.pi * t / T))
        assert detect_period(traj) == pytest.approx(T, rel=1e-6)

    def test_constant_trajectory_no_oscillation(self):
        traj = synthetic_trajectory(lambda t, k: np.full_like(t, 0.25))
        with pytest.raises(NoOscillation):
            detect_period(traj)

    def test_tiny_amplitude_below_floor(self):
        traj = synthetic_trajectory(lambda t, k: 5e-5 * np.sin(t))
        with pytest.raises(NoOscillation):
            detect_period(traj)

    def test_chirp_is_irregular(self):
        traj = synthetic_trajectory(lambda t, k: np.sin(0.1 * t * t + 2 * t))
        with pytest.raises(IrregularPeriod):
            detect_period(traj)

    def test_too_few_crossings(self):
        traj = synthetic_trajectory(lambda t, k: np.sin(2 * np.pi * t / 30.0), t1=60.0)
        with pytest.raises(NoOscillation, match="crossings"):
            detect_period(traj)

    def test_probe_node_invariance_within_cluster(self, chain7_orbits):
        system, orb = chain7_orbits["set1"]
        traj = integrate(orb.base_state, system, IntegratorConfig(5e-3), 0.0, 60.0)
        t1 = detect_period(traj, probe_node=1)
        t4 = detect_period(traj, probe_node=4)
        assert t4 == pytest.approx(t1, rel=5e-3)


class TestSettle:
    def test_zero_transient_returns_input(self):
        net, _ = builtin("biped4")
        system = RateSystem(net, RateParams(epsilon=0.5, g=1.4, I=0.7,
                                            alpha=0.5, beta=0.6, gamma=0.8))
        s0 = random_state(4, 0)
        np.testing.assert_array_equal(settle(s0, system, 0.0, 1e-3), s0)

    def test_equilibrium_is_fixed(self):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.5, g=0.0, I=0.3, alpha=0.0, beta=0.0, gamma=0.0)
        system = RateSystem(net, p)
        from gaitlift.ratemodel import gain

        v = float(gain(0.3, p.gain))
        s = np.full(8, v)
        np.testing.assert_allclose(settle(s, system, 10.0, 1e-3), s, atol=1e-12)


class TestSampleOrbit:
    def test_m_floor(self, chain7_orbits):
        system, orb = chain7_orbits["set1"]
        with pytest.raises(ValueError, match="m >= 256"):
            sample_orbit(orb.base_state, system, orb.period, m=100)

    def test_equilibrium_fails_closure(self):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.5, g=1.4, I=0.7, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        s = settle(random_state(4, 0), system, 5.0, 1e-3)  # far from the attractor
        with pytest.raises(ClosureFailure):
            sample_orbit(s, system, 8.18, m=256)

    def test_refinement_consistency(self, chain7_orbits):
        system, orb = chain7_orbits["set1"]
        o256 = sample_orbit(orb.base_state, system, orb.period, m=256)
        o512 = sample_orbit(orb.base_state, system, orb.period, m=512)
        # every second 512-sample sits on the 256-sample grid
        assert np.max(np.abs(o512.samples[::2] - o256.samples)) < 1e-6

    def test_resampling_step_consistency(self, chain7_orbits):
        system, orb = chain7_orbits["set1"]
        from gaitlift.odeint import flow

        k = 37
        seg = orb.period / orb.m
        step_to = flow(orb.samples[k], system, seg, 5e-3)
        assert np.max(np.abs(step_to - orb.samples[k + 1])) < 1e-9

    def test_interpolator_periodic(self, chain7_orbits):
        _, orb = chain7_orbits["set1"]
        f = orb.interpolator()
        np.testing.assert_allclose(f(0.0), f(orb.period), atol=1e-12)
        mid = f(orb.period * (3 / orb.m))
        np.testing.assert_allclose(mid, orb.samples[3], atol=1e-10)


class TestPhaseShifts:
    def test_recovers_known_shifts(self):
        orb = synthetic_orbit([0.0, 0.25, 0.5, 0.75])
        pat = phase_shifts(orb)
        for i, s in zip((1, 2, 3, 4), (0.0, 0.25, 0.5, 0.75)):
            d = abs(pat.shifts[i] - s) % 1.0
            assert min(d, 1.0 - d) < 1e-3

    def test_all_synchronous_single_cluster(self):
        orb = synthetic_orbit([0.0, 0.0, 0.0, 0.0])
        pat = phase_shifts(orb)
        assert pat.clusters == ((1, 2, 3, 4),)
        assert all(abs(s) < 1e-9 for s in pat.shifts.values())

    def test_walk_pattern_clusters(self):
        orb = synthetic_orbit([0.0, 0.5, 0.5, 0.0])
        pat = phase_shifts(orb)
        assert sorted(map(sorted, pat.clusters)) == [[1, 4], [2, 3]]

    def test_antisymmetry_of_pairwise_shifts(self):
        orb = synthetic_orbit([0.0, 0.3, 0.6, 0.85])
        p1 = phase_shifts(orb, reference_node=1)
        p3 = phase_shifts(orb, reference_node=3)
        s13 = p1.shifts[3]
        s31 = p3.shifts[1]
        d = (s13 + s31) % 1.0
        assert min(d, 1.0 - d) < 2e-3


class TestClassifyGait:
    @pytest.mark.parametrize("name,shifts", list(GAIT_TEMPLATES.items()))
    def test_templates(self, name, shifts):
        pat = PhasePattern(((1,), (2,), (3,), (4,)), dict(zip((1, 2, 3, 4), shifts)), 5.0)
        assert classify_gait(pat) == name

    def test_quarter_shifts_are_other(self):
        pat = PhasePattern(((1,), (2,), (3,), (4,)),
                           {1: 0.0, 2: 0.25, 3: 0.5, 4: 0.75}, 5.0)
        assert classify_gait(pat) == "other"

    def test_rereferencing_invariance(self):
        rng = np.random.default_rng(0)
        for name, shifts in GAIT_TEMPLATES.items():
            c = float(rng.uniform(0, 1))
            pat = PhasePattern(
                ((1,), (2,), (3,), (4,)),
                {i: (s + c) % 1.0 for i, s in zip((1, 2, 3, 4), shifts)},
                5.0,
            )
            assert classify_gait(pat) == name

    def test_non_four_node_is_other(self):
        pat = PhasePattern(((1,), (2,)), {1: 0.0, 2: 0.5}, 5.0)
        assert classify_gait(pat) == "other"

    def test_tolerance_boundary(self):
        pat = PhasePattern(((1,), (2,), (3,), (4,)),
                           {1: 0.0, 2: 0.515, 3: 0.5, 4: 0.0}, 5.0)
        assert classify_gait(pat) == "walk"       # within 0.02
        assert classify_gait(pat, tol=0.01) == "other"


class TestSynchronyCheck:
    def test_identical_constant_trajectory(self):
        data = np.tile(np.array([0.2, 0.2, 0.7, 0.7]), (100, 1))
        traj = Trajectory(0.0, 9.9, 0.1, data)
        ok, defect = synchrony_check(traj, Coloring((1, 1)), 1e-9)
        assert ok and defect == 0.0

    def test_desynchronised_pair_detected(self):
        data = np.tile(np.array([0.2, 0.3, 0.7, 0.7]), (100, 1))
        traj = Trajectory(0.0, 9.9, 0.1, data)
        ok, defect = synchrony_check(traj, Coloring((1, 1)), 1e-3)
        assert not ok and defect == pytest.approx(0.1)

    def test_chain7_converged_synchrony(self, chain7_orbits):
        system, orb = chain7_orbits["set1"]
        net, col = builtin("chain7")
        lift_system = RateSystem(net, system.params)
        s0 = settle(random_state(7, 1), lift_system, 300.0, 4e-3)
        traj = integrate(s0, lift_system, IntegratorConfig(5e-3), 0.0, 40.0)
        ok, defect = synchrony_check(traj, col, 1e-6)
        assert ok, f"defect {defect}"

    def test_transient_segment_can_break_synchrony(self):
        net, col = builtin("chain7")
        p = RateParams(epsilon=0.1, g=2.0, I=2.0, alpha=-5.0, time="fast")
        system = RateSystem(net, p)
        traj = integrate(random_state(7, 5), system, IntegratorConfig(5e-3), 0.0, 8.0)
        ok, defect = synchrony_check(traj, col, 1e-6)
        assert not ok and defect > 1e-3


class TestPipeline:
    def test_find_periodic_orbit_deterministic(self, chain7_cpg):
        p = RateParams(epsilon=0.1, g=2.0, I=2.0, alpha=-5.0, time="fast")
        system = RateSystem(chain7_cpg, p)
        cfg = OrbitConfig(seed=1, transient=150.0, window=60.0)
        a = find_periodic_orbit(system, cfg)
        b = find_periodic_orbit(system, cfg)
        assert a.period == b.period
        assert np.array_equal(a.samples, b.samples)

    def test_biped_from_random_state_detects_hop(self, biped48_orbits):
        system, orb = biped48_orbits["hop"]
        assert orb.closure_defect < 1e-6 * np.linalg.norm(orb.base_state)
        assert classify_gait(phase_shifts(orb)) == "hop"
