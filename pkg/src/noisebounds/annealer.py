"""Continuous-time limits for noisy annealing: noise fixed point, entropy
decay rate, relative-entropy evolution bounds and the time past which the
device output is matched by polynomial-time classical sampling.

Rates are per unit time with the maximum interaction strength J = 1, so
times are in units of 1/J. On hardware where the relevant products of
modulation and control-noise scales sit at the MHz scale, 1/J is of order
a microsecond; the conversion is the caller's to document, not hard-coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from noisebounds.bounds import EntropyBudget, LN2
from noisebounds.instances import IsingInstance

__all__ = [
    "ContinuousNoise",
    "FixedPointParams",
    "Modulation",
    "Schedule",
    "classical_realm_time",
    "fixed_point",
    "linear_path_bound",
    "linear_path_density",
    "schedule_bound",
]


@dataclass(frozen=True)
class ContinuousNoise:
    """Per-qubit noise rates: amplitude damping r1, dephasing r2 and
    control-error (white-noise) rate r3, each in units of 1/time."""

    r1: float
    r2: float = 0.0
    r3: float = 0.0

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0 or self.r3 < 0:
            raise ValueError("noise rates must be non-negative")

    @property
    def rate(self) -> float:
        """Entropy contraction rate r1 + 2 r3 (dephasing does not help)."""
        return self.r1 + 2.0 * self.r3


@dataclass(frozen=True)
class FixedPointParams:
    """Product fixed point sigma_gamma^(x n) of the noise generator.

    gamma = (1/2) ln(1 + r1/r3) biases each qubit toward 0; alpha is the
    exponential decay rate of relative entropy toward the fixed point.
    """

    gamma: float
    alpha: float
    p0: float
    p1: float


def fixed_point(noise: ContinuousNoise) -> FixedPointParams:
    """Single-qubit fixed point and entropy decay rate of the noise."""
    if noise.rate <= 0:
        raise ValueError("need r1 + 2*r3 > 0 for a contraction")
    if noise.r3 == 0.0:
        return FixedPointParams(gamma=math.inf, alpha=noise.rate, p0=1.0, p1=0.0)
    gamma = 0.5 * math.log1p(noise.r1 / noise.r3)
    p0 = (noise.r1 + noise.r3) / noise.rate
    return FixedPointParams(gamma=gamma, alpha=noise.rate, p0=p0, p1=1.0 - p0)


@dataclass(frozen=True)
class Modulation:
    """Piecewise-linear modulation of a Hamiltonian term over [0, T]."""

    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.knots) != len(self.values) or len(self.knots) < 2:
            raise ValueError("need matching knots/values, at least two points")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise ValueError("knots must be strictly increasing")

    @classmethod
    def ramp(cls, total_time: float, v0: float, v1: float) -> "Modulation":
        return cls(knots=(0.0, total_time), values=(v0, v1))

    @classmethod
    def constant(cls, total_time: float, v: float) -> "Modulation":
        return cls(knots=(0.0, total_time), values=(v, v))

    def __call__(self, s):
        return np.interp(s, self.knots, self.values)


@dataclass(frozen=True)
class Schedule:
    """Annealing path g_I(s) H_problem + g_0(s) H_transverse over [0, T].

    transverse field strengths are per qubit; the instance is optional and
    only needed when the problem Hamiltonian itself must be materialized.
    """

    total_time: float
    g0: Modulation
    g_problem: Modulation
    transverse: tuple[float, ...]
    instance: IsingInstance | None = None
    paper_standard: bool = False

    def __post_init__(self):
        if self.total_time <= 0:
            raise ValueError("total time must be positive")
        if float(self.g0(0.0)) <= 0.0:
            raise ValueError("g0 must start positive")
        if self.paper_standard and abs(float(self.g_problem(0.0))) > 1e-12:
            raise ValueError("standard convention requires g_problem(0) = 0")

    @classmethod
    def linear(
        cls, total_time: float, transverse: tuple[float, ...], instance: IsingInstance | None = None
    ) -> "Schedule":
        return cls(
            total_time=total_time,
            g0=Modulation.ramp(total_time, 1.0, 0.0),
            g_problem=Modulation.ramp(total_time, 0.0, 1.0),
            transverse=tuple(transverse),
            instance=instance,
            paper_standard=True,
        )

    @property
    def gamma_bar(self) -> float:
        return float(np.mean(self.transverse))


def _ramp_integral(x: float) -> float:
    """(1 - e^-x (1 + x)) / x^2, the aged linear-ramp weight, stable at small x."""
    if x < 1e-4:
        # avoids the 1 - e^-x(1+x) cancellation; next term is x^4/144
        return 0.5 - x / 3.0 + x * x / 8.0 - x**3 / 30.0
    return (1.0 - math.exp(-x) * (1.0 + x)) / (x * x)


def linear_path_density(noise: ContinuousNoise, gamma_bar: float, total_time: float) -> float:
    """Per-qubit entropy bound f (in nats) for the linear ramp at time T:

    f = e^{-rT} ln(2 cosh gamma) + 2 sinh(gamma) * (1 - e^{-rT}(1+rT)) / (r^2 T) * gamma_bar
    """
    if total_time < 0:
        raise ValueError("time must be non-negative")
    fp = fixed_point(noise)
    if math.isinf(fp.gamma):
        raise ValueError("pure amplitude damping (r3 = 0) admits no finite entropy bound")
    r = fp.alpha
    first = math.exp(-r * total_time) * math.log(2.0 * math.cosh(fp.gamma))
    if total_time == 0.0:
        return first
    drive = 2.0 * math.sinh(fp.gamma) * gamma_bar
    return first + drive * total_time * _ramp_integral(r * total_time)


def linear_path_bound(
    noise: ContinuousNoise, gamma_bar: float, total_time: float, n: int
) -> EntropyBudget:
    """Entropy budget n*f/ln2 bits for the linear ramp from the all-plus state."""
    f = linear_path_density(noise, gamma_bar, total_time)
    return EntropyBudget(value=n * f / LN2, provenance="linear-path-entropy-bound")


def schedule_bound(schedule: Schedule, noise: ContinuousNoise, step: float) -> EntropyBudget:
    """Entropy budget for an arbitrary modulation by Simpson quadrature.

    e^{-alpha T} D0 plus the integral of e^{-alpha(T-tau)} g0(tau) times the
    transverse-term commutator bound 2 sinh(gamma) sum_i Gamma_i; the
    diagonal problem terms commute with the fixed point and contribute
    nothing. D0 = n ln(2 cosh gamma) is the all-plus initial entropy.
    """
    if step <= 0:
        raise ValueError("quadrature step must be positive")
    fp = fixed_point(noise)
    if math.isinf(fp.gamma):
        raise ValueError("pure amplitude damping (r3 = 0) admits no finite entropy bound")
    n = len(schedule.transverse)
    t_total = schedule.total_time
    d0 = n * math.log(2.0 * math.cosh(fp.gamma))
    segments = max(2, 2 * math.ceil(t_total / (2.0 * step)))
    taus = np.linspace(0.0, t_total, segments + 1)
    drive = 2.0 * math.sinh(fp.gamma) * float(np.sum(np.abs(schedule.transverse)))
    integrand = np.exp(-fp.alpha * (t_total - taus)) * schedule.g0(taus) * drive
    integral = float(simpson(integrand, x=taus))
    nats = math.exp(-fp.alpha * t_total) * d0 + integral
    return EntropyBudget(value=nats / LN2, provenance="schedule-quadrature-entropy-bound")


def classical_realm_time(
    noise: ContinuousNoise,
    gamma_bar: float,
    n: int,
    threshold_nats: float | None = None,
    instance: IsingInstance | None = None,
    eps: float = 0.1,
    spectral: float | None = None,
    hnorm: float | None = None,
    rel_tol: float = 1e-6,
) -> float:
    """Smallest ramp time T at which n*f fits under the sampling threshold.

    The threshold eps*|H|/(4|A|) nats is where the equivalent-Gibbs inverse
    temperature enters the rapid-mixing regime; it can be given directly or
    derived from an instance (|A| from the coupling spectrum, |H| from the
    interaction-strength upper bound unless overridden). Returns 0.0 when
    already satisfied at T = 0. Bisection to relative tolerance 1e-6 after
    bracketing by doubling.
    """
    if threshold_nats is None:
        if spectral is None or hnorm is None:
            if instance is None:
                raise ValueError("need threshold_nats, or an instance, or spectral and hnorm")
            from noisebounds.instances import spectral_norm

            spectral = spectral_norm(instance) if spectral is None else spectral
            hnorm = instance.interaction_upper_bound() if hnorm is None else hnorm
        threshold_nats = eps * hnorm / (4.0 * spectral)
    if threshold_nats <= 0:
        raise ValueError("threshold must be positive")

    def total(t: float) -> float:
        return n * linear_path_density(noise, gamma_bar, t)

    if total(0.0) <= threshold_nats:
        return 0.0
    lo, hi = 0.0, 1.0
    while total(hi) > threshold_nats:
        lo, hi = hi, hi * 2.0
        if hi > 2**60:
            return math.inf
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if total(mid) <= threshold_nats:
            hi = mid
        else:
            lo = mid
    return hi
