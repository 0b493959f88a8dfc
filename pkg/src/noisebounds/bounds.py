"""Closed-form limits for noisy circuits: entropy budgets, depth ceilings,
equivalent Gibbs temperatures, mixing depths and depth/noise thresholds.

Convention: entropy budgets are in bits (a depolarizing circuit on n qubits
starts at most n bits away from the maximally mixed state); conversions to
nats happen at the boundary of each formula that needs them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DiscreteNoise",
    "EntropyBudget",
    "LatticeSpec",
    "beta_equivalent",
    "correlation_thresholds",
    "dmax_ising",
    "dmax_lattice",
    "entropy_budget",
    "qaoa_thresholds",
    "trace_mixing_depth",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class DiscreteNoise:
    """Per-layer depolarizing rates of a gate-model device.

    p1/p2 apply after one-/two-qubit gate layers occurring with fractions
    f1/f2 of the depth; pm is the terminal measurement depolarizing rate.
    """

    p1: float
    p2: float
    pm: float = 0.0
    f1: float = 0.5
    f2: float = 0.5

    def __post_init__(self):
        for name in ("p1", "p2", "pm"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name}={v} must be in [0, 1)")
        if self.f1 < 0 or self.f2 < 0 or abs(self.f1 + self.f2 - 1.0) > 1e-12:
            raise ValueError("layer fractions must be non-negative and sum to 1")

    @property
    def effective_rate(self) -> float:
        return self.f1 * self.p1 + self.f2 * self.p2


@dataclass(frozen=True)
class EntropyBudget:
    """Upper bound on the relative entropy to the noise fixed point, in bits."""

    value: float
    provenance: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("entropy budget cannot be negative")

    @property
    def nats(self) -> float:
        return self.value * LN2


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry of a local Hamiltonian: lattice dimension, interaction
    locality and maximum interaction strength."""

    dim: int
    locality: int
    strength: float = 1.0

    def __post_init__(self):
        if self.dim < 1 or self.locality < 1 or self.strength <= 0:
            raise ValueError("need dim >= 1, locality >= 1, strength > 0")


def entropy_budget(
    noise: DiscreteNoise, depth: float, n: int, include_measurement: bool = False
) -> EntropyBudget:
    """Entropy remaining after ``depth`` noisy layers, in bits.

    Exact product form: n * (1-p1)^(2*depth*f1) * (1-p2)^(2*depth*f2),
    with a further (1-pm)^2 factor when the measurement error is included.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    value = n * (1.0 - noise.p1) ** (2.0 * depth * noise.f1)
    value *= (1.0 - noise.p2) ** (2.0 * depth * noise.f2)
    tag = "depolarizing-product-contraction"
    if include_measurement:
        value *= (1.0 - noise.pm) ** 2
        tag += "-with-measurement"
    return EntropyBudget(value=value, provenance=tag)


def dmax_ising(
    noise: DiscreteNoise,
    eps: float,
    log_term: float = 0.0,
    include_measurement: bool = False,
    exact: bool = False,
) -> float:
    """Depth ceiling past which a certified Gibbs sampler matches the device.

    Linearized form: (ln(1/eps) + log_term [- pm]) / (2 (f1 p1 + f2 p2)).
    ``log_term`` is ln(|A| n / |H|), zero when the interaction norm saturates
    its spectral bound. ``exact=True`` replaces each rate p by -ln(1-p)
    (and pm by -2 ln(1-pm)), which is never smaller in the denominator and
    therefore strictly safer. Returns inf when the effective noise is zero;
    results are clamped below at 0.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    if exact:
        denom = 2.0 * (
            noise.f1 * -math.log1p(-noise.p1) + noise.f2 * -math.log1p(-noise.p2)
        )
        meas = -2.0 * math.log1p(-noise.pm)
    else:
        denom = 2.0 * noise.effective_rate
        meas = noise.pm
    if denom == 0.0:
        return math.inf
    numer = math.log(1.0 / eps) + log_term
    if include_measurement:
        numer -= meas
    return max(numer / denom, 0.0)


def dmax_lattice(spec: LatticeSpec, eps: float, p: float) -> tuple[float, float]:
    """Depth ceiling for local-Hamiltonian eigensolvers, plus the inverse
    temperature below which the quasi-polynomial partition-function method
    applies.

    Returns (ln(20 e / (d^kappa eps)) / (2 p), 1 / (5 e kappa d^kappa J));
    the depth is inf at p = 0.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    if not 0.0 <= p < 1.0:
        raise ValueError("p must be in [0, 1)")
    cells = float(spec.dim) ** spec.locality
    beta_c = 1.0 / (5.0 * math.e * spec.locality * cells * spec.strength)
    if p == 0.0:
        return math.inf, beta_c
    depth = max(math.log(20.0 * math.e / (cells * eps)) / (2.0 * p), 0.0)
    return depth, beta_c


def beta_equivalent(
    budget: EntropyBudget | float, hnorm: float, eps: float, generalized: bool = False
) -> float:
    """Inverse temperature of a Gibbs state matching the device energy to
    within eps * |H|.

    budget/( |H| eps ) for a maximally mixed fixed point; four times that for
    an arbitrary fixed point. Budgets in bits are converted to nats first.
    """
    if hnorm <= 0 or eps <= 0:
        raise ValueError("need hnorm > 0 and eps > 0")
    nats = budget.nats if isinstance(budget, EntropyBudget) else budget * LN2
    beta = nats / (hnorm * eps)
    return 4.0 * beta if generalized else beta


def trace_mixing_depth(alpha: float, eps: float, d0_bits: float) -> int:
    """Layers until every input is within trace distance eps of the fixed
    point, via entropy contraction plus Pinsker.

    Smallest integer N with (1-alpha)^N * D0 <= 2 eps^2 (D0 in nats).
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    if d0_bits <= 0:
        raise ValueError("initial entropy must be positive")
    d0 = d0_bits * LN2
    if d0 <= 2.0 * eps * eps:
        return 0
    if alpha == 1.0:
        return 1
    return max(math.ceil(math.log(d0 / (2.0 * eps * eps)) / math.log(1.0 / (1.0 - alpha))), 0)


def qaoa_thresholds(n: int, degree: int, eps: float) -> tuple[float, float]:
    """Minimum alternating-operator rounds to beat hyperplane rounding on
    hard regular instances, and the noise rate at which that many rounds
    already forfeit the advantage.

    Returns (ln n / ln(degree-1), ln(1/eps) ln(degree-1) / (2 ln n)).
    """
    if degree < 3:
        raise ValueError("degree must be at least 3")
    if n < degree + 1:
        raise ValueError("need n >= degree + 1")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    d_min = math.log(n) / math.log(degree - 1)
    p_threshold = math.log(1.0 / eps) * math.log(degree - 1) / (2.0 * math.log(n))
    return d_min, p_threshold


def correlation_thresholds(xi: float, spec: LatticeSpec, eps: float) -> tuple[float, float]:
    """Depth needed to build correlations of length xi, and the noise rate
    above which that depth is already classically matchable.

    Returns (xi / 2, 2 ln(20 e d^kappa / eps) / xi).
    """
    if xi <= 0:
        raise ValueError("correlation length must be positive")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    cells = float(spec.dim) ** spec.locality
    return xi / 2.0, 2.0 * math.log(20.0 * math.e * cells / eps) / xi
