"""Desk-scale lab for QAOA trainability experiments: exact MaxCut
simulation with and without local Pauli noise, Matern GP-UCB Bayesian
optimization, and closed-form bound calculators."""

from .bo import (
    BoConfig,
    BoTrace,
    discretization_tau,
    eta_sqrt_log,
    eta_theorem1,
    eta_theorem2,
    grid_search_maximum,
    optimization_error,
    regret_bound_lemma11,
    run_bo,
    select_next,
    trace_information_gain,
    ucb,
)
from .gp import (
    GpPosterior,
    MaternKernel,
    ObservationSet,
    fit,
    fit_length_scale,
    gaussian_entropy,
    information_gain,
    matern,
    max_information_gain_bound,
    predict,
    predict_many,
)
from .gradient import (
    GradientEstimate,
    VarianceReport,
    estimate_gradient_variance,
    exact_gradient,
    exact_partial,
    finite_difference_gradient,
)
from .graph import Graph, brute_force_maxcut, cut_value, random_regular_graph, read_edge_list, ring_graph, write_edge_list
from .hamiltonian import MixingHamiltonian, PauliZString, ProblemHamiltonian, diagonal_values, h_norm_inf, maxcut_hamiltonian
from .simulator import (
    NoiselessObjective,
    NoisyObjective,
    ParamVector,
    PauliChannel,
    apply_mixer,
    apply_pauli_channel_layer,
    apply_phase_separator,
    noiseless_objective,
    noisy_objective,
    plus_state,
    sample_objective,
    theta_grid,
)
from .theory import (
    LipschitzReport,
    NoisyDepthResult,
    effective_depth_noiseless,
    effective_depth_noisy,
    lipschitz_noiseless,
    lipschitz_noisy,
    noise_band,
    verify_lipschitz,
)

__version__ = "0.1.0"
