"""Simulation and convergence certificates for accelerated AB/Push-Pull."""

from .analysis import (
    Certificate,
    certify,
    fit_linear_rate,
    m_matrix,
    quantities,
    spectral_radius,
    verify_propositions,
)
from .graph import Digraph, DigraphSequence, diameter, generate_sequence, is_strongly_connected, max_edge_utility
from .problems import Dataset, ProblemSet, load_csv, logistic_problem, ridge_problem
from .solver import AgentSwarm, RunRecord, SolverConfig, init, run, step
from .weights import MixingPair, build_column_stochastic, build_row_stochastic, phi_sequence, pi_sequence

__version__ = "0.1.0"
