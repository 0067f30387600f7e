"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 1, budget
violations exit 2, numerical failures exit 3.
"""


class InvalidInstanceError(ValueError):
    """A problem instance (graph, Hamiltonian, channel, config) is malformed."""


class ConfigError(ValueError):
    """An experiment configuration cannot be resolved."""


class BudgetExceededError(RuntimeError):
    """A size/enumeration budget (qubits, grid cells, runs) was exceeded."""


class GenerationFailureError(RuntimeError):
    """Randomized instance generation exhausted its rejection budget."""


class NumericalError(RuntimeError):
    """A numerical routine failed in a way that should not be papered over."""
