"""gaitlift: rate-model dynamics, gaits, and Floquet stability on coupled-cell networks."""

__version__ = "0.1.0"

from .netgraph import (
    Arrow,
    Coloring,
    Lift,
    LiftSpec,
    Network,
    NodeMap,
    builtin,
    builtin_lift,
    build_lift,
    check_fibration,
    feedforward_lift,
    is_balanced,
    is_isomorphic,
    quotient,
)
from .ratemodel import GainParams, RateParams, RateSystem, gain, gain_prime
from .odeint import IntegratorConfig, Trajectory, integrate, flow_with_variational
from .orbit import (
    OrbitConfig,
    PeriodicOrbit,
    PhasePattern,
    classify_gait,
    detect_period,
    find_periodic_orbit,
    phase_shifts,
    sample_orbit,
    settle,
    synchrony_check,
)
from .floquet import (
    MonodromyResult,
    MultiplierSet,
    eig,
    monodromy,
    split_multipliers,
    stability_verdict,
    transverse_monodromy_1node,
    transverse_monodromy_2node,
)
from .stability import (
    ConditionReport,
    EtaBounds,
    check_floquet_bound,
    check_liap1,
    check_liap2,
    eta_bounds,
    floquet_bound_interval,
    lateral_margin,
    transverse_eigs_1node,
    transverse_eigs_2node,
)
