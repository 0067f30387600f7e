"""Exact circuit simulation and objective evaluation.

Noiseless evaluation runs on statevectors: the cost layer is an elementwise
phase multiplication against the materialized diagonal spectrum, the mixing
layer is a product of single-qubit X rotations. The noisy path evolves a
full density matrix and interleaves a local Pauli channel layer after every
unitary block, so channel placement is literal rather than approximated.

Basis convention: index ``k`` encodes qubit ``i``'s bit as ``(k >> i) & 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ConfigError, InvalidInstanceError
from .hamiltonian import ProblemHamiltonian
from .rng import as_generator

TWO_PI = 2.0 * math.pi
STATEVECTOR_QUBIT_BUDGET = 24
DENSITY_QUBIT_BUDGET = 12

_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}


@dataclass(frozen=True)
class ParamVector:
    """Variational parameters: 2p reals ordered (gamma_1, beta_1, ..., gamma_p, beta_p).

    Entries are reduced mod 2*pi into [0, 2*pi) at construction.
    """

    p: int
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if self.p < 1:
            raise InvalidInstanceError(f"layer count must be >= 1, got {self.p}")
        if len(vals) != 2 * self.p:
            raise InvalidInstanceError(f"expected {2 * self.p} parameters, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInstanceError("parameters must be finite")
        vals = tuple(v % TWO_PI for v in vals)
        object.__setattr__(self, "values", vals)

    @classmethod
    def create(cls, values) -> "ParamVector":
        values = tuple(float(v) for v in np.asarray(values, dtype=float).ravel())
        if len(values) % 2 != 0:
            raise InvalidInstanceError(f"parameter vector length {len(values)} is odd")
        return cls(p=len(values) // 2, values=values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return 2 * self.p


def _theta_array(theta) -> np.ndarray:
    """Accept a ParamVector or raw sequence; no mod-2pi reduction is applied."""
    if isinstance(theta, ParamVector):
        return theta.as_array()
    arr = np.asarray(theta, dtype=float).ravel()
    if arr.size == 0 or arr.size % 2 != 0:
        raise InvalidInstanceError(f"parameter vector length {arr.size} is not a positive even number")
    if not np.all(np.isfinite(arr)):
        raise InvalidInstanceError("parameters must be finite")
    return arr


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit stochastic Pauli map with probabilities (q_I, q_X, q_Y, q_Z).

    The physical regime keeps every probability in the open interval (0, 1);
    degenerate channels (some q exactly 0 or 1) are still representable for
    tests and limits, and are flagged by ``in_open_regime``.
    """

    q_identity: float
    q_x: float
    q_y: float
    q_z: float

    def __post_init__(self):
        probs = self.probs
        if any(q < 0.0 or q > 1.0 for q in probs):
            raise InvalidInstanceError(f"channel probabilities out of [0,1]: {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise InvalidInstanceError(f"channel probabilities must sum to 1, got {sum(probs)}")

    @property
    def probs(self) -> tuple[float, float, float, float]:
        return (self.q_identity, self.q_x, self.q_y, self.q_z)

    @property
    def strength(self) -> float:
        """Largest non-identity probability."""
        return max(self.q_x, self.q_y, self.q_z)

    @property
    def in_open_regime(self) -> bool:
        return all(0.0 < q < 1.0 for q in self.probs)

    @classmethod
    def symmetric(cls, q: float) -> "PauliChannel":
        """Equal X/Y/Z probability q each, identity 1 - 3q."""
        return cls(q_identity=1.0 - 3.0 * q, q_x=q, q_y=q, q_z=q)


# ---------------------------------------------------------------------------
# statevector path
# ---------------------------------------------------------------------------

def plus_state(n: int) -> np.ndarray:
    """Uniform superposition |+>^n as a 2^n statevector."""
    if not (1 <= n <= STATEVECTOR_QUBIT_BUDGET):
        raise BudgetExceededError(f"statevector path supports 1 <= n <= {STATEVECTOR_QUBIT_BUDGET}")
    dim = 1 << n
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)


def _num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if (1 << n) != dim:
        raise InvalidInstanceError(f"state dimension {dim} is not a power of two")
    return n


def _apply_one_qubit(u: np.ndarray, state: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 matrix on one qubit of a (batch of) statevector(s).

    ``state`` is (..., 2^n); qubit i lives on reshaped axis n-1-i.
    """
    lead = state.shape[:-1]
    n = _num_qubits(state.shape[-1])
    t = state.reshape(lead + (2,) * n)
    axis = len(lead) + (n - 1 - qubit)
    t = np.tensordot(u, t, axes=([1], [axis]))
    t = np.moveaxis(t, 0, axis)
    return np.ascontiguousarray(t).reshape(state.shape)


def apply_phase_separator(state: np.ndarray, h: ProblemHamiltonian, gamma: float) -> np.ndarray:
    """exp(-i*gamma*H_cost) on a (batch of) statevector(s); norm preserved."""
    spec = h.diagonal_values()
    if state.shape[-1] != spec.size:
        raise InvalidInstanceError(
            f"dimension mismatch: state dim {state.shape[-1]} vs spectrum {spec.size}"
        )
    return state * np.exp(-1j * gamma * spec)


def apply_mixer(state: np.ndarray, beta: float) -> np.ndarray:
    """exp(-i*beta*X) applied independently to every qubit."""
    n = _num_qubits(state.shape[-1])
    c, s = math.cos(beta), math.sin(beta)
    u = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    out = state
    for q in range(n):
        out = _apply_one_qubit(u, out, q)
    return out


def apply_sum_x(state: np.ndarray) -> np.ndarray:
    """Apply the transverse-field operator sum_i X_i (not a unitary)."""
    n = _num_qubits(state.shape[-1])
    lead = state.shape[:-1]
    t = state.reshape(lead + (2,) * n)
    out = np.zeros_like(t)
    for q in range(n):
        axis = len(lead) + (n - 1 - q)
        out += np.flip(t, axis=axis)
    return out.reshape(state.shape)


def evolve_statevector(h: ProblemHamiltonian, theta) -> np.ndarray:
    """Final state of the alternating circuit from |+>^n."""
    th = _theta_array(theta)
    state = plus_state(h.n)
    for k, angle in enumerate(th):
        if k % 2 == 0:
            state = apply_phase_separator(state, h, angle)
        else:
            state = apply_mixer(state, angle)
    return state


def noiseless_objective(h: ProblemHamiltonian, theta) -> float:
    """f(theta) = <psi(theta)| H_cost |psi(theta)>."""
    state = evolve_statevector(h, theta)
    probs = np.abs(state) ** 2
    return float(probs @ h.diagonal_values())


def noiseless_objective_batch(h: ProblemHamiltonian, thetas: np.ndarray) -> np.ndarray:
    """Vectorized objective over rows of ``thetas`` (shape (B, 2p))."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] % 2 != 0:
        raise InvalidInstanceError(f"theta batch must be (B, 2p), got {thetas.shape}")
    spec = h.diagonal_values()
    batch = np.broadcast_to(plus_state(h.n), (thetas.shape[0], spec.size)).copy()
    for k in range(thetas.shape[1]):
        angles = thetas[:, k]
        if k % 2 == 0:
            batch = batch * np.exp(-1j * np.outer(angles, spec))
        else:
            # per-row mixer angles: apply each qubit rotation with a row-wise
            # 2x2 built from broadcast cos/sin
            c = np.cos(angles)[:, None]
            s = np.sin(angles)[:, None]
            n = h.n
            t = batch.reshape((thetas.shape[0],) + (2,) * n)
            for q in range(n):
                axis = 1 + (n - 1 - q)
                a = np.take(t, 0, axis=axis)
                b = np.take(t, 1, axis=axis)
                shape = [thetas.shape[0]] + [1] * (n - 1)
                cc = c.reshape(shape)
                ss = s.reshape(shape)
                new_a = cc * a - 1j * ss * b
                new_b = -1j * ss * a + cc * b
                t = np.stack([new_a, new_b], axis=axis)
            batch = t.reshape(thetas.shape[0], spec.size)
    return np.real(np.abs(batch) ** 2 @ spec)


# ---------------------------------------------------------------------------
# density-matrix path
# ---------------------------------------------------------------------------

def plus_density(n: int) -> np.ndarray:
    """(|+><+|)^n as a dense 2^n x 2^n density matrix."""
    if not (1 <= n <= DENSITY_QUBIT_BUDGET):
        raise BudgetExceededError(f"density path supports 1 <= n <= {DENSITY_QUBIT_BUDGET}")
    v = plus_state(n)
    return np.outer(v, v.conj())


def _apply_one_qubit_rho(u: np.ndarray, rho: np.ndarray, qubit: int) -> np.ndarray:
    """rho -> (U_i rho U_i^dagger) for a single-qubit operator U on qubit i."""
    n = _num_qubits(rho.shape[0])
    t = rho.reshape((2,) * (2 * n))
    row_axis = n - 1 - qubit
    col_axis = 2 * n - 1 - qubit
    t = np.tensordot(u, t, axes=([1], [row_axis]))
    t = np.moveaxis(t, 0, row_axis)
    t = np.tensordot(u.conj(), t, axes=([1], [col_axis]))
    t = np.moveaxis(t, 0, col_axis)
    return np.ascontiguousarray(t).reshape(rho.shape)


def apply_phase_separator_rho(rho: np.ndarray, h: ProblemHamiltonian, gamma: float) -> np.ndarray:
    spec = h.diagonal_values()
    if rho.shape != (spec.size, spec.size):
        raise InvalidInstanceError(f"dimension mismatch: rho {rho.shape} vs spectrum {spec.size}")
    d = np.exp(-1j * gamma * spec)
    return rho * np.outer(d, d.conj())


def apply_mixer_rho(rho: np.ndarray, beta: float) -> np.ndarray:
    n = _num_qubits(rho.shape[0])
    c, s = math.cos(beta), math.sin(beta)
    u = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    out = rho
    for q in range(n):
        out = _apply_one_qubit_rho(u, out, q)
    return out


def apply_pauli_channel_layer(rho: np.ndarray, channel: PauliChannel) -> np.ndarray:
    """Apply the local Pauli channel independently to every qubit.

    Per qubit: rho -> sum_P q(P) P rho P. Trace and Hermiticity are
    preserved exactly up to roundoff.
    """
    n = _num_qubits(rho.shape[0])
    out = rho
    for q in range(n):
        acc = out * channel.q_identity
        for name, prob in (("X", channel.q_x), ("Y", channel.q_y), ("Z", channel.q_z)):
            if prob != 0.0:
                acc = acc + prob * _apply_one_qubit_rho(_PAULI[name], out, q)
        out = acc
    return out


def noisy_objective(h: ProblemHamiltonian, theta, channel: PauliChannel) -> float:
    """Objective of the channel circuit: a Pauli-channel layer follows every block."""
    if h.n > DENSITY_QUBIT_BUDGET:
        raise BudgetExceededError(f"noisy path capped at n <= {DENSITY_QUBIT_BUDGET}, got {h.n}")
    th = _theta_array(theta)
    rho = plus_density(h.n)
    for k, angle in enumerate(th):
        if k % 2 == 0:
            rho = apply_phase_separator_rho(rho, h, angle)
        else:
            rho = apply_mixer_rho(rho, angle)
        rho = apply_pauli_channel_layer(rho, channel)
    return float(np.real(np.diagonal(rho) @ h.diagonal_values()))


def check_density_matrix(rho: np.ndarray, atol: float = 1e-10, psd_slack: float = 1e-9) -> None:
    """Raise if rho is not Hermitian / trace-1 / PSD within tolerances."""
    if not np.allclose(rho, rho.conj().T, atol=atol):
        raise InvalidInstanceError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol or abs(np.trace(rho).imag) > atol:
        raise InvalidInstanceError("density matrix trace is not 1")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -psd_slack:
        raise InvalidInstanceError(f"density matrix has eigenvalue {eigs.min()} < -{psd_slack}")


# ---------------------------------------------------------------------------
# objective handles and shot-limited estimation
# ---------------------------------------------------------------------------

class NoiselessObjective:
    """Callable handle for the noiseless objective of one Hamiltonian."""

    def __init__(self, hamiltonian: ProblemHamiltonian):
        self.hamiltonian = hamiltonian
        self.n = hamiltonian.n

    def __call__(self, theta) -> float:
        return noiseless_objective(self.hamiltonian, theta)

    def batch(self, thetas: np.ndarray) -> np.ndarray:
        return noiseless_objective_batch(self.hamiltonian, thetas)

    def shot_distribution(self, theta) -> tuple[np.ndarray, np.ndarray]:
        """(eigenvalues, basis-measurement probabilities) at theta."""
        state = evolve_statevector(self.hamiltonian, theta)
        return self.hamiltonian.diagonal_values(), np.abs(state) ** 2


class NoisyObjective:
    """Callable handle for the Pauli-channel objective."""

    def __init__(self, hamiltonian: ProblemHamiltonian, channel: PauliChannel):
        self.hamiltonian = hamiltonian
        self.channel = channel
        self.n = hamiltonian.n

    def __call__(self, theta) -> float:
        return noisy_objective(self.hamiltonian, theta, self.channel)

    def batch(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        return np.array([self(row) for row in thetas])

    def shot_distribution(self, theta) -> tuple[np.ndarray, np.ndarray]:
        th = _theta_array(theta)
        rho = plus_density(self.hamiltonian.n)
        for k, angle in enumerate(th):
            if k % 2 == 0:
                rho = apply_phase_separator_rho(rho, self.hamiltonian, angle)
            else:
                rho = apply_mixer_rho(rho, angle)
            rho = apply_pauli_channel_layer(rho, self.channel)
        probs = np.clip(np.real(np.diagonal(rho)), 0.0, None)
        return self.hamiltonian.diagonal_values(), probs / probs.sum()


def sample_objective(objective, theta, M: int, mode: str = "gaussian", rng=None) -> float:
    """Shot-limited estimate y(theta) of the objective.

    mode="gaussian": y = f(theta) + xi with xi ~ N(0, 1/(4M)).
    mode="shots": mean of M basis-measurement eigenvalues drawn from the
    final-state distribution.
    """
    if M < 1:
        raise InvalidInstanceError(f"measurement count must be >= 1, got {M}")
    gen = as_generator(rng)
    if mode == "gaussian":
        return float(objective(theta)) + gen.normal(0.0, math.sqrt(1.0 / (4.0 * M)))
    if mode == "shots":
        if not hasattr(objective, "shot_distribution"):
            raise ConfigError("shots mode requires an objective with a shot_distribution")
        values, probs = objective.shot_distribution(theta)
        idx = gen.choice(values.size, size=M, p=probs)
        return float(values[idx].mean())
    raise ConfigError(f"unknown estimator mode {mode!r}")


def theta_grid(p: int, per_dim: int) -> np.ndarray:
    """Uniform grid {2*pi*k/per_dim}^(2p), rows in lexicographic order."""
    if per_dim < 2:
        raise InvalidInstanceError(f"grid resolution must be >= 2, got {per_dim}")
    axis = TWO_PI * np.arange(per_dim) / per_dim
    mesh = np.meshgrid(*([axis] * (2 * p)), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, 2 * p)
