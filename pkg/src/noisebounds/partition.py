"""Exact partition functions and the variational floor on noisy-device energy.

Everything here treats the diagonal ensemble with weights
exp(-beta * E(s) + gamma * sum_i s_i). ``enumerate_gibbs`` streams the full
2^n sum in Gray-code order; ``EnergyTable`` materializes the spectrum once
so that many inverse temperatures can be swept cheaply.

log-partition values are in nats; entropy budgets are in bits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from noisebounds import _kernels
from noisebounds.bounds import DiscreteNoise, entropy_budget
from noisebounds.instances import IsingInstance

__all__ = [
    "BetaGrid",
    "EnergyTable",
    "FloorEvaluator",
    "GibbsSpec",
    "PartitionSummary",
    "beta_curve",
    "crossing_depth",
    "enumerate_gibbs",
    "variational_lower_bound",
]

ENUM_CAP = 30
SWEEP_CAP = 26
LN2 = math.log(2.0)


@dataclass(frozen=True)
class GibbsSpec:
    """Diagonal Gibbs state proportional to exp(-beta*H + gamma*sum Z_i)."""

    instance: IsingInstance
    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("inverse temperature must be non-negative")


@dataclass(frozen=True)
class PartitionSummary:
    """Exact scalars of one Gibbs ensemble.

    log_z is ln tr exp(-beta*H + gamma*sum Z) in nats; hnorm is the largest
    |E(s)| over configurations, i.e. the operator norm of the diagonal cost.
    """

    log_z: float
    mean_energy: float
    ground_energy: float
    hnorm: float


@dataclass(frozen=True)
class BetaGrid:
    """Logarithmically spaced inverse-temperature search grid."""

    lo: float = 1e-3
    hi: float = 1e2
    points: int = 400

    def values(self) -> np.ndarray:
        if not (0 < self.lo < self.hi) or self.points < 2:
            raise ValueError("grid needs 0 < lo < hi and at least two points")
        return np.logspace(math.log10(self.lo), math.log10(self.hi), self.points)


def _merge(a, b):
    ma, wa, wea, ga, ha = a
    mb, wb, web, gb, hb = b
    if ma >= mb:
        scale = math.exp(mb - ma) if mb != -math.inf else 0.0
        return ma, wa + wb * scale, wea + web * scale, min(ga, gb), max(ha, hb)
    scale = math.exp(ma - mb) if ma != -math.inf else 0.0
    return mb, wa * scale + wb, wea * scale + web, min(ga, gb), max(ha, hb)


def _reduce_tree(blocks):
    # Fixed pairwise reduction independent of evaluation order.
    while len(blocks) > 1:
        merged = []
        for i in range(0, len(blocks) - 1, 2):
            merged.append(_merge(blocks[i], blocks[i + 1]))
        if len(blocks) % 2 == 1:
            merged.append(blocks[-1])
        blocks = merged
    return blocks[0]


def enumerate_gibbs(spec: GibbsSpec, cap: int = ENUM_CAP, threads: int = 1) -> PartitionSummary:
    """Exact log-partition, mean energy, ground energy and |H| by full 2^n sum.

    The walk visits configurations in Gray-code order with O(degree)
    incremental updates, accumulates within fixed 2^20-configuration blocks
    and merges block summaries along a fixed binary tree, so the result is
    bit-stable for any thread count.
    """
    inst = spec.instance
    if inst.n > cap:
        raise ValueError(f"n={inst.n} exceeds enumeration cap {cap}")
    indptr, indices, data = inst.coupling_csr()
    fields = inst.field_array()
    total = 1 << inst.n
    block = 1 << _kernels.BLOCK_BITS
    starts = list(range(0, total, block))

    def run(start):
        count = min(block, total - start)
        return _kernels.gray_partition_block(
            indptr, indices, data, fields, spec.beta, spec.gamma, start, count
        )

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(run, starts))
    else:
        blocks = [run(s) for s in starts]

    m, w, we, ground, habs = _reduce_tree(blocks)
    log_z = m + math.log(w)
    return PartitionSummary(
        log_z=log_z,
        mean_energy=we / w,
        ground_energy=ground,
        hnorm=habs,
    )


class EnergyTable:
    """Materialized spectrum (E(s), magnetization) for fast beta sweeps."""

    def __init__(self, instance: IsingInstance, cap: int = SWEEP_CAP):
        if instance.n > cap:
            raise ValueError(f"n={instance.n} exceeds spectrum-sweep cap {cap}")
        self.instance = instance
        self.n = instance.n
        total = 1 << instance.n
        indptr, indices, data = instance.coupling_csr()
        fields = instance.field_array()
        self.energies = np.empty(total, dtype=np.float64)
        self.mags = np.empty(total, dtype=np.int8)
        block = 1 << _kernels.BLOCK_BITS
        for start in range(0, total, block):
            count = min(block, total - start)
            _kernels.gray_spectrum_block(
                indptr, indices, data, fields, start, count, self.energies, self.mags, start
            )
        self.ground = float(self.energies.min())
        self.hnorm = float(np.abs(self.energies).max())

    def _exponent(self, beta: float, gamma: float) -> np.ndarray:
        x = -beta * self.energies
        if gamma != 0.0:
            x = x + gamma * self.mags.astype(np.float64)
        return x

    def log_z(self, beta: float, gamma: float = 0.0) -> float:
        x = self._exponent(beta, gamma)
        m = x.max()
        return float(m + np.log(np.exp(x - m).sum()))

    def mean_energy(self, beta: float, gamma: float = 0.0) -> float:
        x = self._exponent(beta, gamma)
        w = np.exp(x - x.max())
        return float((self.energies * w).sum() / w.sum())


def beta_curve(
    instance: IsingInstance, betas, gamma: float = 0.0, cap: int = SWEEP_CAP
) -> list[tuple[float, float, float]]:
    """Rows (beta, logZ_nats, mean_energy) for CSV emission."""
    table = EnergyTable(instance, cap=cap)
    return [(float(b), table.log_z(b, gamma), table.mean_energy(b, gamma)) for b in betas]


class FloorEvaluator:
    """Energy-floor evaluator with the log-partition grid computed once.

    The floor at entropy budget B is
        sup_beta  (n ln(2 cosh gamma) - ln Z(beta, gamma) - B ln 2) / beta,
    and the ln Z grid does not depend on B, so sweeping many budgets against
    one instance costs one grid evaluation. Grid suprema never exceed the
    true supremum: every returned value is a valid floor.
    """

    def __init__(
        self,
        instance: IsingInstance,
        gamma: float = 0.0,
        grid: BetaGrid | None = None,
        cap: int = SWEEP_CAP,
        table: EnergyTable | None = None,
    ):
        self.table = table if table is not None else EnergyTable(instance, cap=cap)
        self.gamma = gamma
        self.n = instance.n
        self.betas = (grid or BetaGrid()).values()
        self.log_zs = np.array([self.table.log_z(b, gamma) for b in self.betas])
        self.base = self.n * math.log(2.0 * math.cosh(gamma))
        self.budget_limit = self.n * math.log2(2.0 * math.cosh(gamma))

    def bound(self, budget_bits: float, refine: bool = True) -> tuple[float, float]:
        """(floor value, argmax beta); refinement is golden-section around
        the grid argmax to relative tolerance 1e-6."""
        if budget_bits < 0:
            raise ValueError("budget must be non-negative")
        if budget_bits > self.budget_limit + 1e-12:
            raise ValueError(
                f"budget {budget_bits} bits exceeds initial entropy {self.budget_limit}"
            )
        offset = self.base - budget_bits * LN2
        vals = (offset - self.log_zs) / self.betas
        k = int(vals.argmax())
        best_beta, best_val = float(self.betas[k]), float(vals[k])
        strict_peak = (
            0 < k < len(self.betas) - 1 and vals[k] > vals[k - 1] and vals[k] > vals[k + 1]
        )
        if refine and strict_peak:
            def neg(beta: float) -> float:
                return -(offset - self.table.log_z(beta, self.gamma)) / beta

            res = minimize_scalar(
                neg,
                bracket=(self.betas[k - 1], self.betas[k], self.betas[k + 1]),
                method="golden",
                options={"xtol": 1e-6},
            )
            if res.x > 0 and -res.fun > best_val:
                best_beta, best_val = float(res.x), float(-res.fun)
        return best_val, best_beta


def variational_lower_bound(
    instance: IsingInstance,
    budget_bits: float,
    gamma: float = 0.0,
    grid: BetaGrid | None = None,
    refine: bool = True,
    cap: int = SWEEP_CAP,
    table: EnergyTable | None = None,
) -> tuple[float, float]:
    """Energy floor for any state whose relative entropy to the fixed point
    is at most ``budget_bits``.

    Maximizes beta^{-1} (n ln(2 cosh gamma) - ln Z(beta, gamma) - budget)
    over a log-spaced grid, then refines around the grid argmax by
    golden-section search. Returns (bound, argmax beta). For many budgets
    against one instance, build a FloorEvaluator instead.
    """
    return FloorEvaluator(instance, gamma=gamma, grid=grid, cap=cap, table=table).bound(
        budget_bits, refine=refine
    )


def crossing_depth(
    instance: IsingInstance,
    noise: DiscreteNoise,
    e_c: float,
    gamma: float = 0.0,
    include_measurement: bool = False,
    grid: BetaGrid | None = None,
    cap: int = SWEEP_CAP,
    max_depth: int = 10**6,
) -> int | None:
    """Smallest circuit depth at which the energy floor reaches ``e_c``.

    The floor is evaluated at the depth-D entropy budget of ``noise`` and is
    monotone non-decreasing in D, so integer bisection applies. Returns None
    when even the vanishing-budget limit stays below ``e_c`` ("never");
    rejects ``e_c`` below the ground energy, which no state can reach.
    """
    evaluator = FloorEvaluator(instance, gamma=gamma, grid=grid, cap=cap)
    if e_c < evaluator.table.ground:
        raise ValueError(
            f"target energy {e_c} is below the ground energy {evaluator.table.ground}"
        )
    n = instance.n

    def bound_of_depth(depth: int) -> float:
        budget = entropy_budget(noise, depth, n, include_measurement)
        return evaluator.bound(budget.value, refine=False)[0]

    if evaluator.bound(0.0, refine=False)[0] < e_c:
        return None
    if bound_of_depth(0) >= e_c:
        return 0
    hi = 1
    while bound_of_depth(hi) < e_c:
        hi *= 2
        if hi > max_depth:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound_of_depth(mid) >= e_c:
            hi = mid
        else:
            lo = mid
    return hi
