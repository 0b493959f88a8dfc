"""Heat-bath Gibbs sampling with a rapid-mixing certificate.

Dynamics: site k is resampled to +1 with probability
1/(1 + exp(-2 beta h_k - 2 gamma)), h_k the local field, sweeping sites in
fixed order 0..n-1. The stationary law is proportional to
exp(-beta E(s) + gamma sum_i s_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from noisebounds import _kernels
from noisebounds.instances import IsingInstance, energy
from noisebounds.partition import GibbsSpec

__all__ = [
    "ChainState",
    "MixingCertificate",
    "SampleSet",
    "estimate_energy",
    "glauber_run",
    "rapid_mixing_check",
]


@dataclass(frozen=True)
class MixingCertificate:
    """Outcome of the polynomial-time-sampling check.

    ``criteria`` lists every applicable certificate as (name, ok, margin);
    the headline ok/margin reports the loosest of them.
    """

    ok: bool
    margin: float
    criteria: tuple[tuple[str, bool, float], ...]


@dataclass
class ChainState:
    """Mutable single-chain state with an incrementally tracked energy."""

    config: np.ndarray
    energy: float
    sweep_count: int
    rng: np.random.Generator


@dataclass(frozen=True)
class SampleSet:
    """Thinned post-burn-in samples plus the certificate that applied."""

    configs: np.ndarray  # (samples, n) int8
    energies: np.ndarray
    certified: bool


def rapid_mixing_check(
    instance: IsingInstance, beta: float, sk: bool | None = None, spectral: float | None = None
) -> MixingCertificate:
    """Certify that single-site dynamics mix rapidly at ``beta``.

    The spectral criterion requires beta * |A| < 1. Fully connected
    Gaussian instances additionally mix for beta < 1/4 regardless of |A|;
    that looser certificate is consulted when the instance carries the
    "sk" tag (or ``sk`` is forced). ``spectral`` overrides the computed
    coupling-matrix norm, e.g. with the max-degree bound.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    from noisebounds.instances import spectral_norm

    norm = spectral_norm(instance) if spectral is None else spectral
    margin_spec = 1.0 - beta * norm
    criteria = [("spectral", margin_spec > 0.0, margin_spec)]
    if sk is None:
        sk = instance.tag == "sk"
    if sk:
        margin_sk = 1.0 - 4.0 * beta
        criteria.append(("sk-quarter", margin_sk > 0.0, margin_sk))
    margin = max(m for _, _, m in criteria)
    return MixingCertificate(ok=any(ok for _, ok, _ in criteria), margin=margin, criteria=tuple(criteria))


def default_burn_in(certificate: MixingCertificate) -> int:
    """Heuristic burn-in for the certified regime: 100 * ceil(1/margin)."""
    if not certificate.ok or certificate.margin <= 0:
        raise ValueError("no certified margin; supply burn_in explicitly")
    return 100 * math.ceil(1.0 / certificate.margin)


def _run_sweeps(state: ChainState, spec: GibbsSpec, arrays, n_sweeps: int) -> None:
    if n_sweeps <= 0:
        return
    indptr, indices, data, fields = arrays
    betas = np.full(n_sweeps, spec.beta)
    uniforms = state.rng.random((n_sweeps, spec.instance.n))
    scratch = state.config.copy()
    e, _ = _kernels.heat_bath_sweeps(
        indptr, indices, data, fields, betas, spec.gamma, state.config, uniforms, state.energy,
        scratch, math.inf,
    )
    state.energy = e
    state.sweep_count += n_sweeps


def glauber_run(
    spec: GibbsSpec,
    sweeps: int,
    seed: int,
    burn_in: int | None = None,
    thin: int = 1,
) -> SampleSet:
    """Sample the Gibbs ensemble of ``spec`` by sequential heat-bath sweeps.

    Records one configuration every ``thin`` sweeps after ``burn_in``
    discarded sweeps, for sweeps//thin samples total. burn_in defaults to
    the certified-regime heuristic and must be given explicitly outside the
    certified regime. Deterministic per seed.
    """
    if sweeps <= 0 or thin <= 0:
        raise ValueError("sweeps and thin must be positive")
    inst = spec.instance
    cert = rapid_mixing_check(inst, spec.beta)
    if burn_in is None:
        burn_in = default_burn_in(cert)
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    rng = np.random.default_rng(np.random.PCG64(seed))
    config = rng.choice(np.array([-1, 1], dtype=np.int8), size=inst.n)
    state = ChainState(config=config, energy=energy(inst, config), sweep_count=0, rng=rng)
    arrays = (*inst.coupling_csr(), inst.field_array())
    _run_sweeps(state, spec, arrays, burn_in)
    count = sweeps // thin
    configs = np.empty((count, inst.n), dtype=np.int8)
    energies = np.empty(count)
    for t in range(count):
        _run_sweeps(state, spec, arrays, thin)
        configs[t] = state.config
        energies[t] = state.energy
    return SampleSet(configs=configs, energies=energies, certified=cert.ok)


def estimate_energy(
    samples: SampleSet | np.ndarray, instance: IsingInstance, batches: int = 16
) -> tuple[float, float]:
    """Sample mean of the energy and its batch-means standard error."""
    if isinstance(samples, SampleSet):
        energies = samples.energies
    else:
        energies = np.array([energy(instance, s) for s in samples])
    m = len(energies)
    if m < 2:
        raise ValueError("need at least two samples")
    mean = float(energies.mean())
    b = min(batches, m)
    per = m // b
    means = energies[: b * per].reshape(b, per).mean(axis=1)
    stderr = float(means.std(ddof=1) / math.sqrt(b))
    return mean, stderr
