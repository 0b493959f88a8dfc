import math

import numpy as np
import pytest

from noisebounds.instances import IsingInstance, config_from_int, energy, generate_regular, generate_sk
from noisebounds.partition import GibbsSpec, enumerate_gibbs
from noisebounds.sampler import (
    default_burn_in,
    estimate_energy,
    glauber_run,
    rapid_mixing_check,
)


class TestRapidMixingCheck:
    def test_zero_beta(self):
        cert = rapid_mixing_check(generate_regular(8, 3, -1, 0), 0.0)
        assert cert.ok and cert.margin == 1.0

    def test_regular_half_inverse_degree(self):
        # |A| <= degree, so beta = 1/(2*degree) is always certified
        inst = generate_regular(12, 3, -1, 1)
        cert = rapid_mixing_check(inst, 1.0 / 6.0)
        assert cert.ok and cert.margin >= 0.5 - 1e-9

    def test_k4_hot(self):
        cert = rapid_mixing_check(generate_regular(4, 3, -1, 0), 0.5)
        assert not cert.ok
        assert cert.margin == pytest.approx(-0.5, abs=1e-9)

    def test_sk_quarter_rule_is_reported(self):
        inst = generate_sk(6, seed=0)
        cert = rapid_mixing_check(inst, 0.2)
        names = [name for name, _, _ in cert.criteria]
        assert "sk-quarter" in names and "spectral" in names
        sk_margin = dict((name, m) for name, _, m in cert.criteria)["sk-quarter"]
        assert sk_margin == pytest.approx(1.0 - 0.8)

    def test_sk_flag_override(self):
        inst = generate_regular(8, 3, -1, 0)
        assert all(
            name != "sk-quarter" for name, _, _ in rapid_mixing_check(inst, 0.1).criteria
        )
        forced = rapid_mixing_check(inst, 0.1, sk=True)
        assert any(name == "sk-quarter" for name, _, _ in forced.criteria)

    def test_looser_margin_wins(self):
        # fully connected unit couplings: |A| = n-1 kills the spectral
        # criterion, the quarter rule still certifies small beta
        edges = tuple((i, j, 1.0) for i in range(6) for j in range(i + 1, 6))
        inst = IsingInstance(6, edges, (0.0,) * 6, tag="sk")
        cert = rapid_mixing_check(inst, 0.21)
        assert cert.ok
        assert cert.margin == pytest.approx(1.0 - 4 * 0.21)


def heat_bath_site_kernel(instance, beta, gamma, k):
    """Exact single-site transition matrix over all configurations."""
    n = instance.n
    dim = 2**n
    p = np.zeros((dim, dim))
    a = instance.coupling_matrix()
    b = np.asarray(instance.fields)
    for code in range(dim):
        s = config_from_int(code, n).astype(float)
        h = a[k] @ s + b[k]
        p_up = 1.0 / (1.0 + math.exp(-2.0 * beta * h - 2.0 * gamma))
        up = code & ~(1 << k)
        down = code | (1 << k)
        p[code, up] = p_up
        p[code, down] = 1.0 - p_up
    return p


class TestDetailedBalance:
    @pytest.mark.parametrize("beta,gamma", [(0.3, 0.0), (0.9, 0.4), (2.0, -0.3)])
    def test_exact_on_small_instances(self, beta, gamma):
        for n, seed in [(3, 1), (4, 2)]:
            inst = generate_sk(n, seed=seed)
            codes = np.arange(2**n)
            spins = 1.0 - 2.0 * ((codes[:, None] >> np.arange(n)[None, :]) & 1)
            e = np.array([energy(inst, config_from_int(c, n)) for c in codes])
            log_pi = -beta * e + gamma * spins.sum(axis=1)
            pi = np.exp(log_pi - log_pi.max())
            pi /= pi.sum()
            for k in range(n):
                p = heat_bath_site_kernel(inst, beta, gamma, k)
                flux = pi[:, None] * p
                assert np.abs(flux - flux.T).max() < 1e-12

    def test_stationarity_of_full_sweep(self):
        inst = generate_sk(4, seed=3)
        beta = 0.5
        e = np.array([energy(inst, config_from_int(c, 4)) for c in range(16)])
        pi = np.exp(-beta * e)
        pi /= pi.sum()
        sweep = np.eye(16)
        for k in range(4):
            sweep = sweep @ heat_bath_site_kernel(inst, beta, 0.0, k)
        assert np.abs(pi @ sweep - pi).max() < 1e-12


class TestGlauberRun:
    def test_infinite_temperature_symmetry(self):
        inst = generate_regular(8, 3, -1, 2)
        samples = glauber_run(GibbsSpec(inst, beta=0.0), sweeps=10_000, seed=5)
        mean, se = estimate_energy(samples, inst)
        assert abs(mean) <= 3.0 * se

    def test_single_site_magnetization(self):
        inst = IsingInstance(1, (), (1.0,))
        samples = glauber_run(GibbsSpec(inst, beta=0.7), sweeps=20_000, seed=11)
        m = samples.configs.astype(float).mean()
        se = samples.configs.astype(float).std() / math.sqrt(len(samples.configs) / 10)
        assert abs(m - math.tanh(0.7)) <= 3.0 * max(se, 1e-3)

    def test_matches_exact_mean_energy(self):
        inst = generate_regular(16, 3, -1, 4)
        spec = GibbsSpec(inst, beta=1.0 / 6.0)
        samples = glauber_run(spec, sweeps=10_000, seed=17)
        mean, se = estimate_energy(samples, inst)
        exact = enumerate_gibbs(spec).mean_energy
        assert abs(mean - exact) <= 3.0 * se

    def test_reproducible_stream(self):
        inst = generate_sk(8, seed=1)
        spec = GibbsSpec(inst, beta=0.2)
        a = glauber_run(spec, sweeps=200, seed=42, thin=2)
        b = glauber_run(spec, sweeps=200, seed=42, thin=2)
        assert (a.configs == b.configs).all()
        assert (a.energies == b.energies).all()
        c = glauber_run(spec, sweeps=200, seed=43, thin=2)
        assert (a.configs != c.configs).any()

    def test_incremental_energy_consistency(self):
        inst = generate_sk(10, seed=6)
        samples = glauber_run(GibbsSpec(inst, beta=0.2), sweeps=500, seed=3)
        recomputed = np.array([energy(inst, s) for s in samples.configs])
        assert np.abs(recomputed - samples.energies).max() < 1e-9

    def test_uncertified_requires_burn_in(self):
        inst = generate_regular(4, 3, -1, 0)
        with pytest.raises(ValueError, match="burn_in"):
            glauber_run(GibbsSpec(inst, beta=2.0), sweeps=100, seed=0)
        samples = glauber_run(GibbsSpec(inst, beta=2.0), sweeps=100, seed=0, burn_in=50)
        assert not samples.certified

    def test_marginals_match_exact_gibbs(self):
        # per-site magnetizations against the exact ensemble, n = 10
        inst = generate_sk(10, seed=12)
        beta = 0.15
        spec = GibbsSpec(inst, beta=beta, gamma=0.2)
        samples = glauber_run(spec, sweeps=40_000, seed=8, thin=4)
        e = np.array([energy(inst, config_from_int(c, 10)) for c in range(2**10)])
        codes = np.arange(2**10)
        spins = 1.0 - 2.0 * ((codes[:, None] >> np.arange(10)[None, :]) & 1)
        logw = -beta * e + 0.2 * spins.sum(axis=1)
        w = np.exp(logw - logw.max())
        w /= w.sum()
        exact_mag = w @ spins
        sample_mag = samples.configs.astype(float).mean(axis=0)
        batch = samples.configs.astype(float)[: 16 * (len(samples.configs) // 16)]
        per_batch = batch.reshape(16, -1, 10).mean(axis=1)
        se = per_batch.std(axis=0, ddof=1) / math.sqrt(16)
        assert (np.abs(sample_mag - exact_mag) <= 3.0 * np.maximum(se, 5e-3)).all()


class TestEstimateEnergy:
    def test_identical_samples_zero_stderr(self):
        inst = generate_regular(4, 3, -1, 0)
        configs = np.tile(np.array([1, 1, -1, -1], dtype=np.int8), (32, 1))
        mean, se = estimate_energy(configs, inst)
        assert mean == -2.0
        assert se == 0.0

    def test_two_samples_mean(self):
        inst = IsingInstance(2, ((0, 1, 1.0),), (0.0, 0.0))
        configs = np.array([[1, 1], [1, -1]], dtype=np.int8)
        mean, _ = estimate_energy(configs, inst)
        assert mean == 0.0  # energies -1 and +1

    def test_rejects_single_sample(self):
        inst = IsingInstance(2, ((0, 1, 1.0),), (0.0, 0.0))
        with pytest.raises(ValueError):
            estimate_energy(np.array([[1, 1]], dtype=np.int8), inst)


def test_default_burn_in_scales_with_margin():
    inst = generate_regular(8, 3, -1, 0)
    tight = default_burn_in(rapid_mixing_check(inst, 0.3))
    loose = default_burn_in(rapid_mixing_check(inst, 0.01))
    assert tight >= loose
    with pytest.raises(ValueError):
        default_burn_in(rapid_mixing_check(inst, 5.0))
