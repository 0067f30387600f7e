"""Cost and mixing Hamiltonians with diagonal materialization.

The cost Hamiltonian is a weighted sum of {I,Z} Pauli strings, hence
diagonal in the computational basis; its full spectrum is materialized as a
vector indexed by basis state, which makes the phase-separator unitary an
elementwise phase multiplication. The mixing Hamiltonian is the fixed
transverse field, sum of single-qubit X terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, InvalidInstanceError
from .graph import Graph

SPECTRUM_QUBIT_BUDGET = 24


@dataclass(frozen=True)
class PauliZString:
    """One term: ``coefficient * prod_{i in support} sigma^z_i``.

    An empty support is the identity term.
    """

    coefficient: float
    support: frozenset[int]

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise InvalidInstanceError(f"non-finite coefficient {self.coefficient}")
        object.__setattr__(self, "support", frozenset(int(i) for i in self.support))


@dataclass
class ProblemHamiltonian:
    """Diagonal cost Hamiltonian on ``n`` qubits.

    ``spectrum[z] = sum_c coeff_c * prod_{i in support_c} (-1)^{z_i}`` with
    ``z_i = (z >> i) & 1``. The spectrum is computed lazily and cached;
    terms are immutable after construction so the cache is never refreshed.
    """

    n: int
    terms: tuple[PauliZString, ...]
    _spectrum: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstanceError(f"qubit count must be >= 1, got {self.n}")
        self.terms = tuple(self.terms)
        for t in self.terms:
            if any(i < 0 or i >= self.n for i in t.support):
                raise InvalidInstanceError(f"support {sorted(t.support)} out of range for n={self.n}")

    def diagonal_values(self) -> np.ndarray:
        """Materialize (and cache) the 2^n-entry spectrum."""
        if self._spectrum is None:
            if self.n > SPECTRUM_QUBIT_BUDGET:
                raise BudgetExceededError(
                    f"spectrum capped at n <= {SPECTRUM_QUBIT_BUDGET}, got {self.n}"
                )
            z = np.arange(1 << self.n, dtype=np.int64)
            spec = np.zeros(1 << self.n, dtype=np.float64)
            for term in self.terms:
                parity = np.zeros(1 << self.n, dtype=np.int64)
                for i in term.support:
                    parity ^= (z >> i) & 1
                spec += term.coefficient * (1.0 - 2.0 * parity)
            self._spectrum = spec
        return self._spectrum


@dataclass(frozen=True)
class MixingHamiltonian:
    """Transverse field ``sum_i sigma^x_i``; structurally fixed, only n varies."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstanceError(f"qubit count must be >= 1, got {self.n}")


def maxcut_hamiltonian(g: Graph) -> ProblemHamiltonian:
    """Cost Hamiltonian ``1/2 sum_{(i,j) in E} (I - Z_i Z_j)``.

    Its spectrum counts, per assignment, the number of cut edges.
    """
    terms = [PauliZString(coefficient=g.num_edges / 2.0, support=frozenset())]
    terms.extend(
        PauliZString(coefficient=-0.5, support=frozenset((i, j))) for i, j in g.edges
    )
    return ProblemHamiltonian(n=g.n, terms=tuple(terms))


def diagonal_values(h: ProblemHamiltonian) -> np.ndarray:
    return h.diagonal_values()


def h_norm_inf(h: ProblemHamiltonian) -> float:
    """Operator infinity-norm: max absolute eigenvalue of the diagonal."""
    return float(np.abs(h.diagonal_values()).max())
