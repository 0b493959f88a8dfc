"""Exact density-matrix and Lindblad simulation at small qubit counts.

This is the independent truth source for every inequality in the package:
noisy circuits are simulated exactly, relative entropies are computed from
eigendecompositions, and the continuous-time noise model is integrated
with RK4. Basis convention: computational index c has qubit k at bit k,
so the diagonal of an Ising cost operator at index c is the energy of the
configuration with s_k = 1 - 2*bit_k(c).

Public entropy values are in bits; the *_nats helpers are the raw forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from noisebounds.annealer import ContinuousNoise, Schedule, fixed_point
from noisebounds.instances import IsingInstance

__all__ = [
    "CircuitSpec",
    "ContractionReport",
    "DensityMatrix",
    "Gate",
    "Layer",
    "LindbladResult",
    "MirrorDescentTrace",
    "ising_diagonal",
    "lindblad_evolve",
    "low_energy_pair",
    "max_relative_entropy_nats",
    "mirror_descent_trace",
    "plus_state",
    "product_gibbs",
    "random_circuit",
    "random_density",
    "random_unitary",
    "relative_entropy",
    "run_noisy_circuit",
    "verify_contraction",
    "von_neumann_entropy",
    "zero_state",
]

LN2 = math.log(2.0)
CIRCUIT_CAP = 10
LINDBLAD_CAP = 6
MIRROR_CAP = 8
_EIG_FLOOR = 1e-12
_LOG_CLAMP = 1e-30

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """Dense 2^n x 2^n state with invariant checks."""

    n: int
    mat: np.ndarray = field(repr=False)

    def validate(self) -> "DensityMatrix":
        dim = 1 << self.n
        if self.mat.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {self.mat.shape}")
        if np.abs(self.mat - self.mat.conj().T).max() > 1e-12:
            raise ValueError("matrix is not Hermitian to 1e-12")
        if abs(np.trace(self.mat).real - 1.0) > 1e-12:
            raise ValueError("trace differs from 1 by more than 1e-12")
        if float(np.linalg.eigvalsh(self.mat).min()) < -1e-10:
            raise ValueError("negative eigenvalue below -1e-10")
        return self


@dataclass(frozen=True)
class Gate:
    wires: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Layer:
    gates: tuple[Gate, ...]
    tag: str = "f1"


@dataclass(frozen=True)
class CircuitSpec:
    """Layered circuit; gates within a layer act on disjoint wires.

    For multi-qubit gates the first wire is the high bit of the gate's own
    basis index.
    """

    n: int
    layers: tuple[Layer, ...]

    def __post_init__(self):
        for layer in self.layers:
            used: set[int] = set()
            for gate in layer.gates:
                if len(set(gate.wires)) != len(gate.wires):
                    raise ValueError("gate wires must be distinct")
                for w in gate.wires:
                    if not 0 <= w < self.n:
                        raise ValueError(f"wire {w} out of range for n={self.n}")
                    if w in used:
                        raise ValueError(f"wire {w} used twice in one layer")
                    used.add(w)
                dim = 1 << len(gate.wires)
                if gate.matrix.shape != (dim, dim):
                    raise ValueError("gate matrix shape does not match wire count")


def zero_state(n: int) -> np.ndarray:
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def plus_state(n: int) -> np.ndarray:
    dim = 1 << n
    return np.full((dim, dim), 1.0 / dim, dtype=complex)


def maximally_mixed(n: int) -> np.ndarray:
    dim = 1 << n
    return np.eye(dim, dtype=complex) / dim


def product_gibbs(n: int, gamma: float) -> np.ndarray:
    """sigma_gamma^(x n): per-qubit diag(e^gamma, e^-gamma)/(2 cosh gamma)."""
    z = 2.0 * math.cosh(gamma)
    one = np.array([math.exp(gamma) / z, math.exp(-gamma) / z])
    diag = np.ones(1)
    for _ in range(n):
        diag = np.kron(one, diag)  # qubit k occupies bit k
    return np.diag(diag).astype(complex)


def ising_diagonal(instance: IsingInstance) -> np.ndarray:
    """Energies of all configurations, indexed by the basis convention."""
    n = instance.n
    codes = np.arange(1 << n)
    spins = 1.0 - 2.0 * ((codes[:, None] >> np.arange(n)[None, :]) & 1)
    e = -spins @ instance.field_array()
    for i, j, w in instance.edges:
        e -= w * spins[:, i] * spins[:, j]
    return e


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a complex Ginibre."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density(n: int, rng: np.random.Generator) -> np.ndarray:
    dim = 1 << n
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def low_energy_pair(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random Hermitian cost plus a full-rank state biased toward its low
    end, so the state's energy sits well below the trace average and a
    Gibbs-update walk has real work to do."""
    dim = 1 << n
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    h = (g + g.conj().T) / 2.0
    hnorm = float(np.abs(np.linalg.eigvalsh(h)).max())
    beta = float(rng.uniform(1.0, 3.0)) / hnorm
    vals, vecs = np.linalg.eigh(h)
    w = np.exp(-beta * (vals - vals.min()))
    gibbs = (vecs * w) @ vecs.conj().T
    gibbs /= np.trace(gibbs).real
    mix = float(rng.uniform(0.05, 0.3))
    rho = (1.0 - mix) * gibbs + mix * random_density(n, rng)
    return rho, h


def random_circuit(
    n: int, depth: int, seed: int, two_qubit_fraction: float = 0.5
) -> CircuitSpec:
    """Seeded random circuit: Haar 1q rotations on every qubit, or bricks of
    Haar 2q gates on adjacent pairs, one layer per depth unit."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    layers = []
    for _ in range(depth):
        if n >= 2 and rng.random() < two_qubit_fraction:
            offset = int(rng.integers(0, 2)) if n > 2 else 0
            gates = tuple(
                Gate(wires=(k, k + 1), matrix=random_unitary(4, rng))
                for k in range(offset, n - 1, 2)
            )
            layers.append(Layer(gates=gates, tag="f2"))
        else:
            gates = tuple(Gate(wires=(k,), matrix=random_unitary(2, rng)) for k in range(n))
            layers.append(Layer(gates=gates, tag="f1"))
    return CircuitSpec(n=n, layers=tuple(layers))


def _apply_unitary(rho: np.ndarray, u: np.ndarray, wires: tuple[int, ...], n: int) -> np.ndarray:
    m = len(wires)
    t = rho.reshape((2,) * (2 * n))
    u_t = u.reshape((2,) * (2 * m))
    row_axes = [n - 1 - w for w in wires]
    t = np.tensordot(u_t, t, axes=(list(range(m, 2 * m)), row_axes))
    t = np.moveaxis(t, list(range(m)), row_axes)
    col_axes = [2 * n - 1 - w for w in wires]
    t = np.tensordot(u_t.conj(), t, axes=(list(range(m, 2 * m)), col_axes))
    t = np.moveaxis(t, list(range(m)), col_axes)
    return np.ascontiguousarray(t).reshape(1 << n, 1 << n)


def _depolarize_qubit(rho: np.ndarray, p: float, k: int, n: int) -> np.ndarray:
    """rho -> (1-p) rho + p (I_k/2 x tr_k rho)."""
    t = rho.reshape((2,) * (2 * n))
    ra, ca = n - 1 - k, 2 * n - 1 - k
    partial = np.trace(t, axis1=ra, axis2=ca)
    out = np.zeros_like(t)
    view = np.moveaxis(out, (ra, ca), (0, 1))
    view[0, 0] = partial / 2.0
    view[1, 1] = partial / 2.0
    return (1.0 - p) * rho + p * out.reshape(rho.shape)


def _apply_layer(rho: np.ndarray, layer: Layer, n: int) -> np.ndarray:
    for gate in layer.gates:
        rho = _apply_unitary(rho, gate.matrix, gate.wires, n)
    return rho


def run_noisy_circuit(
    circuit: CircuitSpec, p: float | dict[str, float], rho0: np.ndarray | None = None
) -> np.ndarray:
    """Exact output of the circuit with every qubit depolarized after every
    layer; ``p`` is a rate or a {layer tag: rate} map. Starts from |0...0>."""
    if circuit.n > CIRCUIT_CAP:
        raise ValueError(f"n={circuit.n} exceeds circuit-simulation cap {CIRCUIT_CAP}")
    rho = zero_state(circuit.n) if rho0 is None else rho0.astype(complex)
    for layer in circuit.layers:
        rho = _apply_layer(rho, layer, circuit.n)
        rate = p[layer.tag] if isinstance(p, dict) else p
        if rate:
            for k in range(circuit.n):
                rho = _depolarize_qubit(rho, rate, k, circuit.n)
    return rho


def _clamped_eigh(mat: np.ndarray, floor: float):
    vals, vecs = np.linalg.eigh(mat)
    return np.clip(vals, floor, None), vecs


def relative_entropy_nats(rho: np.ndarray, sigma: np.ndarray) -> float:
    svals, svecs = np.linalg.eigh(sigma)
    if svals.min() <= _EIG_FLOOR:
        raise ValueError("second argument is singular (eigenvalue <= 1e-12)")
    rvals, rvecs = np.linalg.eigh(rho)
    rvals = np.clip(rvals, 0.0, None)
    ent = float(np.sum(rvals[rvals > 0] * np.log(rvals[rvals > 0])))
    log_sigma = (svecs * np.log(svals)) @ svecs.conj().T
    cross = float(np.einsum("ij,ji->", rho, log_sigma).real)
    return ent - cross


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """D(rho || sigma) in bits, exact via eigendecompositions."""
    return relative_entropy_nats(rho, sigma) / LN2


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) in bits, eigenvalues clamped at zero."""
    vals = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    pos = vals[vals > 0]
    return float(-np.sum(pos * np.log(pos)) / LN2)


def max_relative_entropy_nats(rho: np.ndarray, sigma: np.ndarray) -> float:
    """ln of the top eigenvalue of sigma^{-1/2} rho sigma^{-1/2}."""
    svals, svecs = np.linalg.eigh(sigma)
    if svals.min() <= _EIG_FLOOR:
        raise ValueError("second argument is singular (eigenvalue <= 1e-12)")
    inv_sqrt = (svecs / np.sqrt(svals)) @ svecs.conj().T
    m = inv_sqrt @ rho @ inv_sqrt
    top = float(np.linalg.eigvalsh(m).max())
    return math.log(max(top, _LOG_CLAMP))


# --- continuous-time noise -------------------------------------------------


def _local_noise_action(rho: np.ndarray, noise: ContinuousNoise, n: int) -> np.ndarray:
    """Sum over qubits of the single-qubit noise generator.

    Per-qubit action on blocks (a b; c d): diagonal relaxation toward the
    amplitude/control fixed point, off-diagonals damped at 3 r3 + r2 + r1/2
    with an r3 off-diagonal exchange.
    """
    r1, r2, r3 = noise.r1, noise.r2, noise.r3
    damp = 3.0 * r3 + r2 + 0.5 * r1
    t = rho.reshape((2,) * (2 * n))
    out = np.zeros_like(t)
    for k in range(n):
        ra, ca = n - 1 - k, 2 * n - 1 - k
        v = np.moveaxis(t, (ra, ca), (0, 1))
        o = np.moveaxis(out, (ra, ca), (0, 1))
        a, b, c, d = v[0, 0], v[0, 1], v[1, 0], v[1, 1]
        o[0, 0] += r1 * d + r3 * (d - a)
        o[1, 1] += -r1 * d + r3 * (a - d)
        o[0, 1] += -damp * b + r3 * c
        o[1, 0] += -damp * c + r3 * b
    return out.reshape(rho.shape)


@dataclass(frozen=True)
class LindbladResult:
    times: np.ndarray
    states: tuple[np.ndarray, ...]
    max_trace_drift: float
    error_estimate: float | None


def _integrate(schedule: Schedule, noise: ContinuousNoise, dt: float, rho0, record_every):
    n = len(schedule.transverse)
    t_total = schedule.total_time
    steps = max(1, math.ceil(t_total / dt))
    h = t_total / steps
    if schedule.instance is not None:
        diag = ising_diagonal(schedule.instance).astype(complex)
    else:
        diag = np.zeros(1 << n, dtype=complex)
    if rho0.shape != (1 << n, 1 << n):
        raise ValueError(f"initial state shape {rho0.shape} does not match n={n}")
    h0 = np.zeros((1 << n, 1 << n), dtype=complex)
    for k, strength in enumerate(schedule.transverse):
        op = np.ones((1, 1), dtype=complex)
        for q in range(n - 1, -1, -1):
            op = np.kron(op, PAULI_X if q == k else np.eye(2, dtype=complex))
        h0 -= strength * op

    def rhs(t, rho):
        g0 = float(schedule.g0(t))
        gi = float(schedule.g_problem(t))
        out = _local_noise_action(rho, noise, n)
        if g0 != 0.0:
            hm = g0 * h0
            out += -1j * (hm @ rho - rho @ hm)
        if gi != 0.0:
            out += -1j * gi * (diag[:, None] * rho - rho * diag[None, :])
        return out

    rho = rho0.astype(complex).copy()
    times = [0.0]
    states = [rho.copy()]
    drift = 0.0
    for step in range(steps):
        t = step * h
        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        drift = max(drift, abs(tr - 1.0))
        if abs(tr - 1.0) > 1e-6:
            raise ValueError(
                f"integration unstable (trace drift {abs(tr - 1.0):.2e}); try dt={dt / 10:g}"
            )
        rho = rho / tr
        if record_every and (step + 1) % record_every == 0 and step != steps - 1:
            times.append((step + 1) * h)
            states.append(rho.copy())
    times.append(t_total)
    states.append(rho.copy())
    return np.asarray(times), states, drift


def lindblad_evolve(
    schedule: Schedule,
    noise: ContinuousNoise,
    dt: float,
    rho0: np.ndarray,
    record_every: int | None = None,
    error_estimate: bool = True,
) -> LindbladResult:
    """RK4 integration of the noisy annealing master equation.

    Traces are renormalized each step with the drift logged; a step-halving
    rerun provides the reported error estimate. Rejects unstable runs with
    a suggested smaller dt.
    """
    n = len(schedule.transverse)
    if n > LINDBLAD_CAP:
        raise ValueError(f"n={n} exceeds Lindblad-simulation cap {LINDBLAD_CAP}")
    if dt <= 0:
        raise ValueError("dt must be positive")
    times, states, drift = _integrate(schedule, noise, dt, rho0, record_every)
    err = None
    if error_estimate:
        _, states_half, _ = _integrate(schedule, noise, dt / 2.0, rho0, None)
        err = float(np.abs(states[-1] - states_half[-1]).max())
    return LindbladResult(
        times=times, states=tuple(states), max_trace_drift=drift, error_estimate=err
    )


# --- mirror descent --------------------------------------------------------


@dataclass(frozen=True)
class MirrorStep:
    step: int
    coefficient: float
    sigma_energy: float
    gap: float
    rel_entropy_nats: float


@dataclass(frozen=True)
class MirrorDescentTrace:
    rows: tuple[MirrorStep, ...]
    converged: bool
    step_limit: int
    hnorm: float


def mirror_descent_trace(
    rho: np.ndarray, hmat: np.ndarray, eps: float, sigma: np.ndarray
) -> MirrorDescentTrace:
    """Gibbs-update walk toward the target state's energy.

    Iterates sigma_t ~ exp(log sigma - t (eps / 2|H|) H), recording the
    exact energy gap and D(rho || sigma_t) in nats, and stops once the gap
    drops to eps |H|. The relative entropy must fall by at least eps^2/4
    per executed step, so exceeding ceil(4 D(rho||sigma)/eps^2) steps is
    reported as a violation.
    """
    n = int(round(math.log2(rho.shape[0])))
    if n > MIRROR_CAP:
        raise ValueError(f"n={n} exceeds mirror-descent cap {MIRROR_CAP}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    hnorm = float(np.abs(np.linalg.eigvalsh(hmat)).max())
    if hnorm == 0.0:
        raise ValueError("cost operator is zero")
    svals, svecs = _clamped_eigh(sigma, _LOG_CLAMP)
    log_sigma = (svecs * np.log(svals)) @ svecs.conj().T
    target_energy = float(np.einsum("ij,ji->", rho, hmat).real)
    d0 = relative_entropy_nats(rho, sigma)
    step_limit = math.ceil(4.0 * d0 / (eps * eps))
    coeff = eps / (2.0 * hnorm)
    rows = []
    converged = False
    for t in range(step_limit + 2):
        m = log_sigma - (t * coeff) * hmat
        vals, vecs = np.linalg.eigh(m)
        w = np.exp(vals - vals.max())
        sigma_t = (vecs * w) @ vecs.conj().T
        sigma_t /= np.trace(sigma_t).real
        e_sigma = float(np.einsum("ij,ji->", sigma_t, hmat).real)
        gap = e_sigma - target_energy
        d_t = relative_entropy_nats(rho, sigma_t)
        rows.append(
            MirrorStep(step=t, coefficient=t * coeff, sigma_energy=e_sigma, gap=gap,
                       rel_entropy_nats=d_t)
        )
        if gap <= eps * hnorm:
            converged = True
            break
        if t >= step_limit:
            break
    return MirrorDescentTrace(
        rows=tuple(rows), converged=converged, step_limit=step_limit, hnorm=hnorm
    )


# --- layered contraction check ---------------------------------------------


@dataclass(frozen=True)
class ContractionReport:
    margins: tuple[float, ...]
    min_margin: float
    mode: str


def verify_contraction(
    rho: np.ndarray, circuit: CircuitSpec, p: float, sigma: np.ndarray | None = None
) -> ContractionReport:
    """Check the layered entropy bound against exact simulation.

    With the maximally mixed fixed point (sigma=None) the noise is per-qubit
    depolarizing with layer contraction (1-p)^2 and the unitary correction
    terms vanish identically. For a general full-rank sigma the noise is the
    global reset-to-sigma channel with contraction (1-p), and each layer adds
    the exact max-relative-entropy correction of its unitaries. Margins are
    bound minus measured, in nats, per layer prefix.
    """
    n = circuit.n
    if n > MIRROR_CAP:
        raise ValueError(f"n={n} exceeds verification cap {MIRROR_CAP}")
    if sigma is None:
        sigma = maximally_mixed(n)
        factor = (1.0 - p) ** 2
        mode = "per-qubit-depolarizing"
    else:
        factor = 1.0 - p
        mode = "reset-to-sigma"
    rhs = relative_entropy_nats(rho, sigma)
    margins = []
    for layer in circuit.layers:
        if mode == "per-qubit-depolarizing":
            for k in range(n):
                rho = _depolarize_qubit(rho, p, k, n)
        else:
            rho = (1.0 - p) * rho + p * sigma
        rho = _apply_layer(rho, layer, n)
        rhs = factor * rhs + max_relative_entropy_nats(_apply_layer(sigma.copy(), layer, n), sigma)
        lhs = relative_entropy_nats(rho, sigma)
        margins.append(rhs - lhs)
    return ContractionReport(
        margins=tuple(margins), min_margin=min(margins) if margins else math.inf, mode=mode
    )
