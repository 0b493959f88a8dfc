"""Limits of noisy quantum optimizers: entropy budgets, depth ceilings,
Gibbs-state equivalents and variational energy floors, cross-checked by
exact small-system simulation and classical Gibbs-sampling baselines."""

__version__ = "0.1.0"

from noisebounds.instances import (
    IsingInstance,
    energy,
    from_json,
    generate_regular,
    generate_sk,
    instance_digest,
    spectral_norm,
    to_json,
)
from noisebounds.bounds import (
    DiscreteNoise,
    EntropyBudget,
    LatticeSpec,
    beta_equivalent,
    correlation_thresholds,
    dmax_ising,
    dmax_lattice,
    entropy_budget,
    qaoa_thresholds,
    trace_mixing_depth,
)
from noisebounds.partition import (
    GibbsSpec,
    PartitionSummary,
    crossing_depth,
    enumerate_gibbs,
    variational_lower_bound,
)
from noisebounds.sampler import estimate_energy, glauber_run, rapid_mixing_check
from noisebounds.baselines import (
    AnnealSchedule,
    OptimizationResult,
    burer_monteiro_round,
    simulated_annealing,
)
from noisebounds.annealer import (
    ContinuousNoise,
    Schedule,
    classical_realm_time,
    fixed_point,
    linear_path_bound,
    schedule_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
