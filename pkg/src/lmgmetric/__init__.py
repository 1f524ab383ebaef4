"""Fidelity metric, phase structure and curvature of thermal states of the
isotropic Lipkin-Meshkov-Glick model, at finite N and in the
thermodynamic limit."""

from .errors import (
    BracketError,
    DomainError,
    LMGError,
    ResourceError,
    SingularPointError,
    UsageError,
)
from .limit import (
    LimitMetric,
    Phase,
    PhasePoint,
    ReducedMetric1D,
    RicciMethod,
    Variant,
    classify,
    critical_beta,
    free_energy_limit,
    magnetization_z,
    metric_limit,
    metric_limit_numeric,
    reduced_metric,
    ricci_limit,
    solve_r,
)
from .metric_finite import (
    MetricSplit,
    MetricTensor2,
    bures_dense,
    metric_fd_free_energy,
    metric_fluctuations,
)
from .spectrum import (
    GroundState,
    ModelParams,
    SectorSpectrum,
    dense_hamiltonian,
    energy_level,
    ground_state,
    level_crossing_fields,
    multiplicity,
)
from .thermal import (
    ThermalEnsemble,
    ThermalMoments,
    free_energy_per_spin_finite,
    log_partition,
    moments,
)

__version__ = "0.1.0"
