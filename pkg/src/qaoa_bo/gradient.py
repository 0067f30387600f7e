"""Exact and numerical derivatives of the objectives, plus the Monte-Carlo
gradient-variance estimate that feeds the Lipschitz constants and UCB
schedules.

Coordinate convention: index ``j`` is 0-based over the 2p parameters; even
j are cost-layer angles (generator H_cost), odd j are mixing-layer angles
(generator H_mix = sum_i X_i).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInstanceError
from .hamiltonian import ProblemHamiltonian
from .rng import substream
from .simulator import (
    NoiselessObjective,
    TWO_PI,
    _theta_array,
    apply_mixer,
    apply_phase_separator,
    apply_sum_x,
    plus_state,
)

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class GradientEstimate:
    """All 2p partial derivatives at one point."""

    values: tuple[float, ...]
    method: str  # "commutator" | "finite_difference"
    fd_step: float | None = None

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class VarianceReport:
    """Monte-Carlo per-coordinate gradient statistics over uniform parameters.

    The coordinate ``a`` is the argmax of the sampled per-coordinate
    variance (a computable proxy for the argmax of the supremum gradient
    magnitude, which the analysis uses but which cannot be evaluated).
    """

    per_coordinate_variance: tuple[float, ...]
    a: int
    V_hat: float
    sample_count: int
    mean_per_coordinate: tuple[float, ...]
    seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _gate_split_states(h: ProblemHamiltonian, th: np.ndarray, j: int) -> tuple[np.ndarray, np.ndarray]:
    """States before/after the tail of the circuit split at gate j.

    Returns (phi_minus, psi): phi_minus includes gates 0..j, psi is the
    final state.
    """
    state = plus_state(h.n)
    for k in range(j + 1):
        if k % 2 == 0:
            state = apply_phase_separator(state, h, th[k])
        else:
            state = apply_mixer(state, th[k])
    phi_minus = state
    for k in range(j + 1, th.size):
        if k % 2 == 0:
            state = apply_phase_separator(state, h, th[k])
        else:
            state = apply_mixer(state, th[k])
    return phi_minus, state


def exact_partial(h: ProblemHamiltonian, theta, j: int) -> float:
    """Exact partial derivative of the noiseless objective.

    Evaluates the commutator expectation
    ``i <phi0| U_-^dag [H_gen, U_+^dag H_cost U_+] U_- |phi0>``
    by statevector algebra, where U_- covers the circuit through gate j and
    U_+ the remainder, and H_gen is the generator of gate j.
    """
    th = _theta_array(theta)
    if not (0 <= j < th.size):
        raise InvalidInstanceError(f"coordinate {j} out of range for 2p={th.size}")
    phi_minus, psi = _gate_split_states(h, th, j)
    spec = h.diagonal_values()
    # chi = U_+^dag H_cost U_+ |phi_minus> computed as U_+^dag (spec * psi)
    chi = spec * psi
    for k in range(th.size - 1, j, -1):
        if k % 2 == 0:
            chi = apply_phase_separator(chi, h, -th[k])
        else:
            chi = apply_mixer(chi, -th[k])
    if j % 2 == 0:
        w = spec * phi_minus
    else:
        w = apply_sum_x(phi_minus)
    z = np.vdot(w, chi)
    return float(-2.0 * z.imag)


def exact_gradient(h: ProblemHamiltonian, theta) -> GradientEstimate:
    th = _theta_array(theta)
    vals = tuple(exact_partial(h, th, j) for j in range(th.size))
    return GradientEstimate(values=vals, method="commutator")


def finite_difference_gradient(objective, theta, step: float = DEFAULT_FD_STEP) -> GradientEstimate:
    """Central differences per coordinate; 2*2p objective evaluations."""
    if step <= 0.0:
        raise InvalidInstanceError(f"finite-difference step must be > 0, got {step}")
    th = _theta_array(theta)
    vals = []
    for j in range(th.size):
        hi = th.copy()
        lo = th.copy()
        hi[j] += step
        lo[j] -= step
        vals.append((float(objective(hi)) - float(objective(lo))) / (2.0 * step))
    return GradientEstimate(values=tuple(vals), method="finite_difference", fd_step=step)


def estimate_gradient_variance(
    objective,
    p: int,
    n_samples: int,
    seed: int,
    method: str = "auto",
    fd_step: float = DEFAULT_FD_STEP,
) -> VarianceReport:
    """Sample gradients at uniform parameter points and report per-coordinate
    mean and variance.

    method="auto" uses the exact commutator route for noiseless handles and
    central finite differences otherwise.
    """
    if n_samples < 100:
        raise InvalidInstanceError(f"need at least 100 samples, got {n_samples}")
    if method == "auto":
        method = "commutator" if isinstance(objective, NoiselessObjective) else "finite_difference"
    rng = substream(seed, "variance")
    thetas = rng.uniform(0.0, TWO_PI, size=(n_samples, 2 * p))
    grads = np.empty((n_samples, 2 * p))
    for i in range(n_samples):
        if method == "commutator":
            grads[i] = exact_gradient(objective.hamiltonian, thetas[i]).as_array()
        else:
            grads[i] = finite_difference_gradient(objective, thetas[i], fd_step).as_array()
    mean = grads.mean(axis=0)
    var = grads.var(axis=0, ddof=1)
    a = int(np.argmax(var))
    return VarianceReport(
        per_coordinate_variance=tuple(float(v) for v in var),
        a=a,
        V_hat=float(var[a]),
        sample_count=n_samples,
        mean_per_coordinate=tuple(float(m) for m in mean),
        seed=seed,
    )
