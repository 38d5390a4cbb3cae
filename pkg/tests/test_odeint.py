import numpy as np
import pytest
from scipy.linalg import expm

from gaitlift.errors import NonFinite
from gaitlift.netgraph import builtin
from gaitlift.odeint import (
    IntegratorConfig,
    default_step,
    flow,
    flow_with_variational,
    integrate,
    settle,
    write_trajectory_csv,
)
from gaitlift.ratemodel import RateParams, RateSystem


class FnSystem:
    """Adapter: plain rhs (and optional Jacobian) as an integrable system."""

    def __init__(self, rhs, jacobian=None):
        self.rhs = rhs
        if jacobian is not None:
            self.jacobian = jacobian


def lti(J):
    J = np.asarray(J, dtype=float)
    return FnSystem(lambda t, y: J @ y, lambda y: J)


class TestIntegrate:
    def test_scalar_linear_decay(self):
        sys_ = FnSystem(lambda t, y: -y)
        traj = integrate(np.array([1.0]), sys_, IntegratorConfig(0.01), 0.0, 1.0)
        assert traj.samples.shape == (101, 1)
        assert abs(traj.samples[-1, 0] - np.exp(-1.0)) < 1e-9

    def test_harmonic_energy_drift(self):
        sys_ = FnSystem(lambda t, y: np.array([y[1], -y[0]]))
        T = 2 * np.pi * 100
        y = flow(np.array([1.0, 0.0]), sys_, T, 1e-3)
        energy = 0.5 * (y[0] ** 2 + y[1] ** 2)
        assert abs(energy - 0.5) < 1e-7

    def test_rk4_order(self):
        sys_ = FnSystem(lambda t, y: -y)
        errs = []
        for h in (0.02, 0.01):
            traj = integrate(np.array([1.0]), sys_, IntegratorConfig(h), 0.0, 2.0)
            errs.append(abs(traj.samples[-1, 0] - np.exp(-2.0)))
        factor = errs[0] / errs[1]
        assert 12.0 <= factor <= 20.0

    def test_determinism(self):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.67, g=1.8, I=1.1, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        s0 = np.random.default_rng(3).uniform(0, 1, 8)
        a = integrate(s0, system, IntegratorConfig(1e-3), 0.0, 2.0).samples
        b = integrate(s0, system, IntegratorConfig(1e-3), 0.0, 2.0).samples
        assert np.array_equal(a, b)

    def test_sample_count_and_times(self):
        sys_ = FnSystem(lambda t, y: -y)
        traj = integrate(np.array([1.0]), sys_, IntegratorConfig(0.3), 0.0, 1.0)
        # floor((t1-t0)/h) + 1 samples on the grid
        assert traj.samples.shape[0] == 4
        np.testing.assert_allclose(traj.times, [0.0, 0.3, 0.6, 0.9])

    def test_invalid_span(self):
        sys_ = FnSystem(lambda t, y: -y)
        with pytest.raises(ValueError):
            integrate(np.array([1.0]), sys_, IntegratorConfig(0.1), 1.0, 1.0)
        with pytest.raises(ValueError):
            integrate(np.array([1.0]), sys_, IntegratorConfig(0.1, max_time=5.0), 0.0, 10.0)

    def test_non_finite_detected(self):
        sys_ = FnSystem(lambda t, y: y * y)  # blows up in finite time
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(NonFinite):
                integrate(np.array([1.0]), sys_, IntegratorConfig(0.01), 0.0, 10.0)

    def test_settle_matches_integrate_endpoint(self):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.67, g=1.8, I=1.1, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        s0 = np.random.default_rng(1).uniform(0, 1, 8)
        end = integrate(s0, system, IntegratorConfig(1e-2), 0.0, 5.0).samples[-1]
        np.testing.assert_array_equal(settle(s0, system, 5.0, 1e-2), end)

    def test_boundedness_of_saturating_dynamics(self):
        # started inside [0,1]^8, the biped stays there over a long horizon
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.67, g=1.8, I=1.1, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        s0 = np.random.default_rng(11).uniform(0, 1, 8)
        traj = integrate(s0, system, IntegratorConfig(0.01, max_time=2e3), 0.0, 1e3)
        assert traj.samples.min() > -1e-9
        assert traj.samples.max() < 1.0 + 1e-9


class TestVariational:
    @pytest.mark.parametrize("dim", [2, 4, 6])
    def test_lti_flow_matches_matrix_exponential(self, dim):
        rng = np.random.default_rng(dim)
        J = rng.normal(0, 1, (dim, dim))
        x0 = rng.normal(0, 1, dim)
        x, V = flow_with_variational(x0, np.eye(dim), lti(J), 1e-3, 0.0, 1.0)
        eJ = expm(J)
        assert np.max(np.abs(V - eJ)) < 1e-8
        assert np.max(np.abs(x - eJ @ x0)) < 1e-8

    def test_zero_span_is_identity(self):
        x, V = flow_with_variational(np.ones(2), np.eye(2), lti(-np.eye(2)), 1e-3, 1.0, 1.0)
        np.testing.assert_array_equal(V, np.eye(2))

    def test_liouville_for_trace_free_system(self):
        J = np.array([[0.0, 1.0], [4.0, 0.0]])  # trace-free
        _, V = flow_with_variational(np.zeros(2), np.eye(2), lti(J), 1e-3, 0.0, 1.0)
        assert abs(np.linalg.det(V) - 1.0) < 1e-6

    def test_rectangular_block(self):
        J = np.diag([-1.0, -2.0, -3.0])
        V0 = np.eye(3)[:, :2]
        _, V = flow_with_variational(np.zeros(3), V0, lti(J), 1e-3, 0.0, 1.0)
        assert V.shape == (3, 2)
        np.testing.assert_allclose(V, expm(J) @ V0, atol=1e-9)

    def test_columns_match_flow_differences(self):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.67, g=1.8, I=1.1, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        s0 = np.random.default_rng(8).uniform(0.2, 0.8, 8)
        T, h, d = 1.0, 1e-3, 1e-5
        _, V = flow_with_variational(s0, np.eye(8), system, h, 0.0, T)
        for k in range(8):
            e = np.zeros(8)
            e[k] = d
            col = (flow(s0 + e, system, T, h) - flow(s0 - e, system, T, h)) / (2 * d)
            assert np.max(np.abs(V[:, k] - col)) / max(np.max(np.abs(col)), 1.0) < 1e-4


class TestCsv:
    def test_header_and_values(self, tmp_path):
        net, _ = builtin("biped4")
        p = RateParams(epsilon=0.67, g=1.8, I=1.1, alpha=0.5, beta=0.6, gamma=0.8)
        system = RateSystem(net, p)
        traj = integrate(np.full(8, 0.3), system, IntegratorConfig(0.1), 0.0, 0.5)
        path = tmp_path / "traj.csv"
        write_trajectory_csv(traj, path, 4)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "t,x1E,x2E,x3E,x4E,x1H,x2H,x3H,x4H"
        assert len(lines) == 1 + traj.samples.shape[0]
        # full double precision round trip
        back = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        np.testing.assert_array_equal(back[:, 1:], traj.samples)


def test_default_step():
    assert default_step(0.67) == pytest.approx(1e-3)
    assert default_step(0.01) == pytest.approx(0.0005)
