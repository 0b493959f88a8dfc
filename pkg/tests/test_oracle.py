import math

import numpy as np
import pytest

from noisebounds.annealer import ContinuousNoise, Modulation, Schedule, fixed_point, schedule_bound
from noisebounds.instances import IsingInstance, generate_sk
from noisebounds.oracle import (
    CircuitSpec,
    DensityMatrix,
    Gate,
    Layer,
    ising_diagonal,
    lindblad_evolve,
    low_energy_pair,
    max_relative_entropy_nats,
    maximally_mixed,
    mirror_descent_trace,
    plus_state,
    product_gibbs,
    random_circuit,
    random_density,
    random_unitary,
    relative_entropy,
    relative_entropy_nats,
    run_noisy_circuit,
    verify_contraction,
    von_neumann_entropy,
    zero_state,
)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class TestCircuitSimulation:
    def test_empty_circuit_identity(self):
        circ = CircuitSpec(n=3, layers=())
        rho = run_noisy_circuit(circ, 0.2)
        assert np.allclose(rho, zero_state(3))

    def test_idle_layer_depolarizes_ground_state(self):
        circ = CircuitSpec(n=1, layers=(Layer(gates=()),))
        rho = run_noisy_circuit(circ, 0.3)
        assert np.allclose(np.diag(rho).real, [1 - 0.15, 0.15])
        assert abs(rho[0, 1]) == 0.0

    def test_bell_state_noiseless(self):
        circ = CircuitSpec(
            n=2,
            layers=(
                Layer(gates=(Gate(wires=(0,), matrix=HADAMARD.astype(complex)),)),
                Layer(gates=(Gate(wires=(1, 0), matrix=CNOT),), tag="f2"),
            ),
        )
        rho = run_noisy_circuit(circ, 0.0)
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
        assert np.allclose(rho, np.outer(psi, psi.conj()), atol=1e-12)

    def test_unitary_preserves_purity(self):
        for seed in (0, 1):
            circ = random_circuit(5, 10, seed)
            rho = run_noisy_circuit(circ, 0.0)
            purity = float(np.trace(rho @ rho).real)
            assert purity == pytest.approx(1.0, abs=1e-12)

    def test_noise_respects_density_invariants(self):
        circ = random_circuit(4, 8, 3)
        rho = run_noisy_circuit(circ, 0.1)
        DensityMatrix(n=4, mat=rho).validate()

    def test_layer_tagged_rates(self):
        circ = random_circuit(3, 12, 5)
        uniform = run_noisy_circuit(circ, 0.05)
        tagged = run_noisy_circuit(circ, {"f1": 0.05, "f2": 0.05})
        assert np.allclose(uniform, tagged, atol=1e-14)

    def test_contraction_toward_maximally_mixed(self):
        # one hundred layers of strong noise leave nearly no information
        circ = random_circuit(3, 100, 9)
        rho = run_noisy_circuit(circ, 0.2)
        assert relative_entropy(rho, maximally_mixed(3)) < (1 - 0.2) ** 200 * 3 + 1e-12

    def test_cap_enforced(self):
        with pytest.raises(ValueError, match="cap"):
            run_noisy_circuit(CircuitSpec(n=11, layers=()), 0.1)

    def test_wire_validation(self):
        with pytest.raises(ValueError):
            CircuitSpec(n=2, layers=(Layer(gates=(Gate(wires=(0, 0), matrix=CNOT),)),))
        with pytest.raises(ValueError):
            CircuitSpec(n=2, layers=(Layer(gates=(Gate(wires=(2,), matrix=HADAMARD),)),))


class TestRelativeEntropy:
    def test_self_entropy_zero(self):
        rng = np.random.default_rng(0)
        rho = random_density(3, rng)
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_pure_state_against_uniform(self):
        for n in (1, 3, 5):
            assert relative_entropy(zero_state(n), maximally_mixed(n)) == pytest.approx(
                float(n), abs=1e-10
            )

    def test_plus_state_against_biased_product(self):
        for gamma in (0.1, 0.3, 1.0):
            expected = math.log2(2.0 * math.cosh(gamma))
            measured = relative_entropy(plus_state(1), product_gibbs(1, gamma))
            assert measured == pytest.approx(expected, abs=1e-12)
        # tensor powers add
        measured3 = relative_entropy(plus_state(3), product_gibbs(3, 0.3))
        assert measured3 == pytest.approx(3 * math.log2(2.0 * math.cosh(0.3)), abs=1e-11)

    def test_entropy_complement_identity(self):
        rng = np.random.default_rng(7)
        for n in (2, 4):
            rho = random_density(n, rng)
            total = relative_entropy(rho, maximally_mixed(n)) + von_neumann_entropy(rho)
            assert total == pytest.approx(float(n), abs=1e-9)

    def test_singular_second_argument_rejected(self):
        with pytest.raises(ValueError, match="singular"):
            relative_entropy(maximally_mixed(1), zero_state(1))

    def test_max_relative_entropy_dominates(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            rho = random_density(3, rng)
            sigma = random_density(3, rng)
            assert max_relative_entropy_nats(rho, sigma) >= relative_entropy_nats(
                rho, sigma
            ) - 1e-10

    def test_unitary_of_sigma_bound(self):
        # D_inf(U sigma U* || sigma) <= ln(|sigma^-1| |sigma|)
        rng = np.random.default_rng(5)
        sigma = product_gibbs(2, 0.4)
        vals = np.diag(sigma).real
        cap = math.log(vals.max() / vals.min())
        for _ in range(5):
            u = random_unitary(4, rng)
            rotated = u @ sigma @ u.conj().T
            assert max_relative_entropy_nats(rotated, sigma) <= cap + 1e-10


class TestLemma1Style:
    def test_margins_positive_on_random_circuits(self):
        worst = math.inf
        for seed in range(15):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(2, 5))
            depth = int(rng.integers(1, 12))
            p = float(rng.choice([0.01, 0.05, 0.2]))
            circ = random_circuit(n, depth, seed)
            rho = run_noisy_circuit(circ, p)
            measured = relative_entropy(rho, maximally_mixed(n))
            bound = (1.0 - p) ** (2 * depth) * n
            worst = min(worst, bound - measured)
        assert worst >= -1e-9


class TestLindblad:
    def drive_free(self, n, t_total):
        return Schedule(
            total_time=t_total,
            g0=Modulation.constant(t_total, 1.0),
            g_problem=Modulation.constant(t_total, 0.0),
            transverse=(0.0,) * n,
        )

    def test_amplitude_damping_decay(self):
        rho1 = np.zeros((2, 2), dtype=complex)
        rho1[1, 1] = 1.0
        noise = ContinuousNoise(r1=0.5, r3=0.0)
        res = lindblad_evolve(self.drive_free(1, 20.0), noise, dt=0.01, rho0=rho1)
        final = res.states[-1]
        assert final[1, 1].real == pytest.approx(math.exp(-0.5 * 20.0), rel=1e-6)
        assert final[0, 0].real == pytest.approx(1.0 - math.exp(-10.0), rel=1e-6)

    def test_fixed_point_convergence(self):
        noise = ContinuousNoise(r1=0.3, r2=0.1, r3=0.2)
        fp = fixed_point(noise)
        res = lindblad_evolve(self.drive_free(2, 40.0), noise, dt=0.005, rho0=plus_state(2))
        target = product_gibbs(2, fp.gamma)
        assert np.abs(res.states[-1] - target).max() < 1e-8

    def test_dephasing_rate_off_diagonal(self):
        # L = r2 (Z rho Z - rho)/2 damps coherences by exp(-r2 t)
        noise = ContinuousNoise(r1=0.0, r2=0.4, r3=0.0)
        res = lindblad_evolve(self.drive_free(1, 5.0), noise, dt=0.002, rho0=plus_state(1))
        coh = abs(res.states[-1][0, 1])
        assert coh == pytest.approx(0.5 * math.exp(-0.4 * 5.0), rel=1e-6)

    def test_entropy_bound_never_violated(self):
        # drive with a real schedule and compare against the quadrature bound
        inst = IsingInstance(2, ((0, 1, 1.0),), (0.3, -0.2))
        noise = ContinuousNoise(r1=0.02, r2=0.05, r3=0.08)
        fp = fixed_point(noise)
        sigma = product_gibbs(2, fp.gamma)
        for t_total in (2.0, 8.0, 20.0):
            sch = Schedule.linear(t_total, (0.7, 1.3), instance=inst)
            res = lindblad_evolve(sch, noise, dt=0.002, rho0=plus_state(2))
            measured = relative_entropy_nats(res.states[-1], sigma)
            budget = schedule_bound(sch, noise, step=t_total / 2e4).nats
            assert budget - measured >= -1e-6

    def test_instability_rejected(self):
        inst = IsingInstance(1, (), (50.0,))
        sch = Schedule(
            total_time=10.0,
            g0=Modulation.constant(10.0, 1.0),
            g_problem=Modulation.constant(10.0, 1.0),
            transverse=(40.0,),
            instance=inst,
        )
        with pytest.raises(ValueError, match="dt"):
            lindblad_evolve(sch, ContinuousNoise(r1=0.1, r3=0.1), dt=0.5, rho0=plus_state(1))

    def test_trajectory_recording(self):
        noise = ContinuousNoise(r1=0.1, r3=0.1)
        res = lindblad_evolve(
            self.drive_free(1, 1.0), noise, dt=0.01, rho0=plus_state(1), record_every=25
        )
        assert len(res.states) == len(res.times)
        assert len(res.states) == 2 + 3  # initial, 3 interior records, final
        assert res.error_estimate is not None and res.error_estimate < 1e-8


class TestMirrorDescent:
    def test_already_converged_at_origin(self):
        h = np.diag([1.0, -1.0, 0.5, -0.5]).astype(complex)
        trace = mirror_descent_trace(maximally_mixed(2), h, 0.1, maximally_mixed(2))
        assert trace.converged
        assert len(trace.rows) == 1
        assert trace.rows[0].gap == pytest.approx(0.0, abs=1e-12)

    def test_gibbs_target_energy_matched(self):
        inst = generate_sk(4, seed=3)
        h = np.diag(ising_diagonal(inst)).astype(complex)
        beta = 0.8
        e = ising_diagonal(inst)
        w = np.exp(-beta * e - (-beta * e).max())
        rho = np.diag(w / w.sum()).astype(complex)
        eps = 0.05
        trace = mirror_descent_trace(rho, h, eps, maximally_mixed(4))
        assert trace.converged
        final = trace.rows[-1]
        target = float(np.sum(e * np.diag(rho).real))
        assert final.sigma_energy - target <= eps * trace.hnorm + 1e-12

    def test_per_step_decrease(self):
        for seed in range(6):
            rng = np.random.default_rng(seed)
            rho, h = low_energy_pair(3, rng)
            trace = mirror_descent_trace(rho, h, 0.1, maximally_mixed(3))
            assert trace.converged
            assert len(trace.rows) - 1 <= trace.step_limit
            drops = [
                a.rel_entropy_nats - b.rel_entropy_nats
                for a, b in zip(trace.rows, trace.rows[1:])
            ]
            assert all(d >= 0.1**2 / 4.0 - 1e-9 for d in drops)

    def test_biased_fixed_point(self):
        rng = np.random.default_rng(11)
        rho, h = low_energy_pair(3, rng)
        sigma = product_gibbs(3, 0.3)
        trace = mirror_descent_trace(rho, h, 0.1, sigma)
        assert trace.converged
        drops = [
            a.rel_entropy_nats - b.rel_entropy_nats
            for a, b in zip(trace.rows, trace.rows[1:])
        ]
        assert all(d >= 0.1**2 / 4.0 - 1e-9 for d in drops)


class TestContraction:
    def test_maximally_mixed_reduces_to_product_bound(self):
        rng = np.random.default_rng(2)
        rho = random_density(3, rng)
        circ = random_circuit(3, 8, 21)
        report = verify_contraction(rho, circ, 0.05)
        assert report.mode == "per-qubit-depolarizing"
        assert report.min_margin >= -1e-9

    def test_diagonal_layers_commute_with_biased_product(self):
        sigma = product_gibbs(2, 0.5)
        phase = np.diag(np.exp(1j * np.array([0.1, 0.7, -0.4, 0.9])))
        circ = CircuitSpec(n=2, layers=(Layer(gates=(Gate(wires=(0, 1), matrix=phase),), tag="f2"),))
        rho = random_density(2, np.random.default_rng(4))
        report = verify_contraction(rho, circ, 0.1, sigma)
        assert report.mode == "reset-to-sigma"
        assert report.min_margin >= -1e-9

    def test_random_circuits_biased_fixed_point(self):
        worst = math.inf
        for seed in range(10):
            rng = np.random.default_rng(seed)
            rho = random_density(3, rng)
            circ = random_circuit(3, int(rng.integers(1, 8)), seed + 100)
            report = verify_contraction(rho, circ, 0.05, product_gibbs(3, 0.2))
            worst = min(worst, report.min_margin)
        assert worst >= -1e-9


def test_ising_diagonal_convention():
    inst = IsingInstance(2, ((0, 1, 1.0),), (0.5, -0.25))
    diag = ising_diagonal(inst)
    # code 0 -> (+,+): -1 - 0.5 + 0.25 ; code 1 -> (-,+) flips spin 0
    assert diag[0] == pytest.approx(-1.0 - 0.5 + 0.25)
    assert diag[1] == pytest.approx(1.0 + 0.5 + 0.25)
    assert diag[2] == pytest.approx(1.0 - 0.5 - 0.25)
    assert diag[3] == pytest.approx(-1.0 + 0.5 - 0.25)


def test_density_matrix_validation():
    good = DensityMatrix(1, np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex))
    good.validate()
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(1, np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex)).validate()
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(1, np.eye(2, dtype=complex)).validate()
    with pytest.raises(ValueError, match="eigenvalue"):
        DensityMatrix(1, np.array([[1.2, 0], [0, -0.2]], dtype=complex)).validate()
