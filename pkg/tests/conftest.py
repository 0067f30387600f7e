import numpy as np
import pytest

from qaoa_bo import NoiselessObjective, maxcut_hamiltonian, ring_graph


@pytest.fixture(scope="session")
def ring4():
    return ring_graph(4)


@pytest.fixture(scope="session")
def ring4_hamiltonian(ring4):
    return maxcut_hamiltonian(ring4)


@pytest.fixture(scope="session")
def ring4_objective(ring4_hamiltonian):
    return NoiselessObjective(ring4_hamiltonian)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
