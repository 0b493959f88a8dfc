"""Classical competitors: simulated annealing and low-rank cut relaxation.

The relaxation works on the MAXCUT form of an instance: an edge of
coupling a_ij carries cut weight w_ij = -a_ij (an antiferromagnetic unit
edge is a unit cut weight), and cut(s) = sum_edges w_ij (1 - s_i s_j) / 2,
so E(s) = sum_edges w_ij - 2 cut(s) and minimizing E maximizes the cut.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from noisebounds import _kernels
from noisebounds.instances import IsingInstance, energy
from noisebounds.sampler import rapid_mixing_check

__all__ = [
    "AnnealSchedule",
    "OptimizationResult",
    "RelaxationResult",
    "burer_monteiro_round",
    "cut_value",
    "simulated_annealing",
]


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric inverse-temperature ladder over a fixed sweep budget."""

    beta_start: float
    beta_end: float
    sweeps: int

    def __post_init__(self):
        if not 0 < self.beta_start <= self.beta_end:
            raise ValueError("need 0 < beta_start <= beta_end")
        if self.sweeps < 1:
            raise ValueError("need at least one sweep")

    def ladder(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.beta_end])
        ratio = (self.beta_end / self.beta_start) ** (1.0 / (self.sweeps - 1))
        return self.beta_start * ratio ** np.arange(self.sweeps)


@dataclass(frozen=True)
class OptimizationResult:
    best_config: np.ndarray
    best_energy: float
    iterations: int
    wall_time: float


@dataclass(frozen=True)
class RelaxationResult:
    """Continuous relaxation value plus the rounded configuration."""

    relaxation_value: float
    mean_rounded_cut: float
    best_cut: float
    rounded: OptimizationResult


def simulated_annealing(
    instance: IsingInstance,
    schedule: AnnealSchedule,
    restarts: int = 1,
    seed: int = 0,
    enforce_certified: bool = False,
) -> OptimizationResult:
    """Best-ever energy over geometric heat-bath anneals.

    With ``enforce_certified`` the final inverse temperature must pass the
    rapid-mixing check, keeping the run inside the provably-polynomial
    regime. Deterministic per seed.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    if enforce_certified and not rapid_mixing_check(instance, schedule.beta_end).ok:
        raise ValueError("schedule leaves the certified rapid-mixing regime")
    start = time.perf_counter()
    rng = np.random.default_rng(np.random.PCG64(seed))
    indptr, indices, data = instance.coupling_csr()
    fields = instance.field_array()
    betas = schedule.ladder()
    best_e = math.inf
    best_s = np.ones(instance.n, dtype=np.int8)
    sweeps_done = 0
    for _ in range(restarts):
        s = rng.choice(np.array([-1, 1], dtype=np.int8), size=instance.n)
        e0 = energy(instance, s)
        uniforms = rng.random((len(betas), instance.n))
        trial_best = s.copy()  # best tracking starts at the initial config
        _, e_best = _kernels.heat_bath_sweeps(
            indptr, indices, data, fields, betas, 0.0, s, uniforms, e0, trial_best, e0
        )
        if e_best < best_e:
            best_e = e_best
            best_s = trial_best.copy()
        sweeps_done += len(betas)
    best_e = energy(instance, best_s)
    return OptimizationResult(
        best_config=best_s,
        best_energy=best_e,
        iterations=sweeps_done,
        wall_time=time.perf_counter() - start,
    )


def cut_weights(instance: IsingInstance) -> np.ndarray:
    """Symmetric cut-weight matrix w = -a; requires zero fields."""
    if any(b != 0.0 for b in instance.fields):
        raise ValueError("cut relaxation is defined for zero-field instances")
    w = np.zeros((instance.n, instance.n))
    for i, j, a in instance.edges:
        w[i, j] = w[j, i] = -a
    return w


def cut_value(weights: np.ndarray, config: np.ndarray) -> float:
    s = np.asarray(config, dtype=np.float64)
    return float((weights.sum() - s @ weights @ s) / 4.0)


def burer_monteiro_round(
    instance: IsingInstance,
    rank: int | None = None,
    iterations: int = 200000,
    rounding_draws: int = 100,
    seed: int = 0,
) -> RelaxationResult:
    """Low-rank cut relaxation by projected gradient ascent, then
    random-hyperplane rounding.

    Maximizes sum_edges w_ij (1 - v_i . v_j) / 2 over unit rows v_i in R^k
    with fixed step 1/(2 * max_degree * max|w|), stopping when the relative
    objective change drops below 1e-9. The default rank ceil(sqrt(2n)) is
    generically enough for the relaxation optimum to be attained.
    """
    w = cut_weights(instance)
    n = instance.n
    if rank is None:
        rank = math.ceil(math.sqrt(2.0 * n))
    if rank < 2:
        raise ValueError("rank must be at least 2")
    start = time.perf_counter()
    rng = np.random.default_rng(np.random.PCG64(seed))
    v = rng.standard_normal((n, rank))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    w_abs_max = np.abs(w).max() if instance.edges else 0.0
    # F(V) = sum_edges w (1 - v_i.v_j)/2 = sum_edges(w)/2 - (1/4) sum_ij W_ij v_i.v_j
    const = w.sum() / 4.0

    def objective(vecs: np.ndarray) -> float:
        return const - 0.25 * float(np.sum(vecs * (w @ vecs)))

    if w_abs_max == 0.0:
        relax = 0.0
        used = 0
    else:
        step = 1.0 / (2.0 * instance.max_degree * w_abs_max)
        prev = None
        used = iterations
        for t in range(iterations):
            v = v - step * 0.5 * (w @ v)
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            obj = objective(v)
            if prev is not None and abs(obj - prev) <= 1e-9 * max(1.0, abs(obj)):
                used = t + 1
                break
            prev = obj
        relax = objective(v)
    best_cut = -math.inf
    best_s = np.ones(n, dtype=np.int8)
    cuts = np.empty(rounding_draws)
    for d in range(rounding_draws):
        r = rng.standard_normal(rank)
        s = np.where(v @ r >= 0.0, 1, -1).astype(np.int8)
        c = cut_value(w, s)
        cuts[d] = c
        if c > best_cut:
            best_cut = c
            best_s = s
    rounded = OptimizationResult(
        best_config=best_s,
        best_energy=energy(instance, best_s),
        iterations=used,
        wall_time=time.perf_counter() - start,
    )
    return RelaxationResult(
        relaxation_value=relax,
        mean_rounded_cut=float(cuts.mean()),
        best_cut=best_cut,
        rounded=rounded,
    )
