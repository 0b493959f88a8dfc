"""Classical Ising problem instances and cheap spectral/energy utilities.

An instance is a graph with real couplings a_ij on its edges and local
fields b_i; the cost of a spin configuration s in {-1,+1}^n is

    E(s) = - sum_{i<j} a_ij s_i s_j - sum_i b_i s_i.

Configurations convert to integers via bit k = (1 - s_k) / 2, so bit 0 of
the integer is spin 0 and the all-up configuration is integer 0.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "IsingInstance",
    "config_from_int",
    "config_to_int",
    "energy",
    "from_json",
    "generate_regular",
    "generate_sk",
    "instance_digest",
    "spectral_norm",
    "to_json",
]

# Fixed internal seed for the power-iteration start vector; results must not
# depend on caller RNG state.
_POWER_SEED = 0x5EED

SpinConfig = np.ndarray


@dataclass(frozen=True)
class IsingInstance:
    """Immutable Ising problem: couplings on edges plus local fields.

    Edges are stored as (i, j, a_ij) with i < j, sorted lexicographically
    and free of duplicates. ``tag`` marks the generating family (for
    example "sk") and is not part of the serialized form.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    fields: tuple[float, ...]
    tag: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instance needs at least one site")
        if len(self.fields) != self.n:
            raise ValueError(f"expected {self.n} fields, got {len(self.fields)}")
        seen = set()
        for i, j, _ in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j}) for n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def max_degree(self) -> int:
        deg = [0] * self.n
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return max(deg) if deg else 0

    def coupling_matrix(self) -> np.ndarray:
        """Dense symmetric coupling matrix A with zero diagonal."""
        a = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            a[i, j] = w
            a[j, i] = w
        return a

    def coupling_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Adjacency in CSR form: (indptr, neighbor indices, weights)."""
        neighbors: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, w in self.edges:
            neighbors[i].append((j, w))
            neighbors[j].append((i, w))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        idx: list[int] = []
        dat: list[float] = []
        for k, adj in enumerate(neighbors):
            adj.sort()
            idx.extend(j for j, _ in adj)
            dat.extend(w for _, w in adj)
            indptr[k + 1] = len(idx)
        return indptr, np.asarray(idx, dtype=np.int64), np.asarray(dat, dtype=np.float64)

    def field_array(self) -> np.ndarray:
        return np.asarray(self.fields, dtype=np.float64)

    def interaction_upper_bound(self) -> float:
        """Upper bound on ||H||: sum of |a_ij| plus sum of |b_i|."""
        return float(sum(abs(w) for _, _, w in self.edges) + sum(abs(b) for b in self.fields))


def config_from_int(code: int, n: int) -> np.ndarray:
    """Spin configuration for an n-bit integer (bit k = (1 - s_k)/2)."""
    bits = (code >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


def config_to_int(config: np.ndarray) -> int:
    bits = (1 - np.asarray(config, dtype=np.int64)) // 2
    return int(np.sum(bits << np.arange(len(bits))))


def energy(instance: IsingInstance, config: np.ndarray) -> float:
    """Cost -sum a_ij s_i s_j - sum b_i s_i of one configuration."""
    s = np.asarray(config, dtype=np.float64)
    if s.shape != (instance.n,):
        raise ValueError(f"configuration length {s.shape} does not match n={instance.n}")
    total = -float(np.dot(s, instance.field_array()))
    for i, j, w in instance.edges:
        total -= w * s[i] * s[j]
    return total


def generate_regular(n: int, degree: int, sign: int, seed: int) -> IsingInstance:
    """Uniform-ish simple regular graph via the pairing model.

    All couplings equal ``sign``; fields are zero. The stub pairing is
    restarted from scratch whenever it produces a loop or a multi-edge,
    so only simple graphs are returned. Deterministic per seed.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    if degree < 1 or degree >= n:
        raise ValueError(f"degree {degree} infeasible for n={n}")
    if (n * degree) % 2 != 0:
        raise ValueError(f"n*degree must be even, got {n}*{degree}")
    rng = np.random.default_rng(np.random.PCG64(seed))
    stubs = np.repeat(np.arange(n), degree)
    while True:
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            i, j = (int(u), int(v)) if u < v else (int(v), int(u))
            if i == j or (i, j) in edges:
                ok = False
                break
            edges.add((i, j))
        if ok:
            break
    return IsingInstance(
        n=n,
        edges=tuple((i, j, float(sign)) for i, j in sorted(edges)),
        fields=(0.0,) * n,
        tag=f"regular-{degree}",
    )


def generate_sk(n: int, seed: int) -> IsingInstance:
    """Fully connected instance with Gaussian couplings of variance 1/n."""
    if n < 2:
        raise ValueError("need n >= 2 for a fully connected instance")
    rng = np.random.default_rng(np.random.PCG64(seed))
    std = 1.0 / math.sqrt(n)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, float(rng.normal(0.0, std))))
    return IsingInstance(n=n, edges=tuple(edges), fields=(0.0,) * n, tag="sk")


def spectral_norm(instance: IsingInstance, rel_tol: float = 1e-9, max_iter: int = 20000) -> float:
    """Largest |eigenvalue| of the coupling matrix A.

    Power iteration on A @ A with a deterministic seeded start vector;
    squaring makes the dominant eigenvalue of the iteration |A|^2 even
    when the extreme eigenvalues of A come in +/- pairs.
    """
    if not instance.edges:
        return 0.0
    a = instance.coupling_matrix()
    b = a @ a
    rng = np.random.default_rng(np.random.PCG64(_POWER_SEED))
    v = rng.standard_normal(instance.n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = b @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new = float(v @ (b @ v))
        if abs(new - lam) <= rel_tol * max(abs(new), 1e-300):
            lam = new
            break
        lam = new
    return math.sqrt(max(lam, 0.0))


def to_json(instance: IsingInstance) -> str:
    """Canonical JSON form; round-trips finite doubles bit-exactly."""
    payload = {
        "n": instance.n,
        "edges": [[i, j, w] for i, j, w in instance.edges],
        "fields": list(instance.fields),
    }
    return json.dumps(payload, separators=(", ", ": "))


def from_json(text: str, tag: str = "") -> IsingInstance:
    payload = json.loads(text)
    try:
        n = int(payload["n"])
        edges = tuple((int(i), int(j), float(w)) for i, j, w in payload["edges"])
        fields = tuple(float(b) for b in payload["fields"])
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed instance JSON: {err}") from err
    return IsingInstance(n=n, edges=edges, fields=fields, tag=tag)


def instance_digest(instance: IsingInstance) -> str:
    """SHA-256 of the canonical JSON; identifies inputs in reports."""
    return hashlib.sha256(to_json(instance).encode()).hexdigest()
