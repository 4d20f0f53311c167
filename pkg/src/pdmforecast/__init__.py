"""Reliability forecasting for hierarchical multi-component systems.

Component health follows degradation-only Markov chains; system reliability is
obtained by pushing component marginals through a tree-shaped Bayesian network;
maintenance is scheduled where the forecast drops below a threshold.
"""

from .bayes import Cpt, NodeId, Topology, child_marginal, joint_probability, kron_vec, make_cpt, posterior, validate_topology
from .forecast import ForecastCurve, SystemModel, forecast_at, forecast_curve
from .markov import Distribution, TransitionMatrix, expected_state, n_step, row_marginal, validate_tpm
from .model_io import parse_model, parse_observation, serialize_model
from .montecarlo import SimulationResult, simulate
from .scheduler import MaintenancePlan, crossing_time, plan, rank_components, replan

__version__ = "0.1.0"

__all__ = [
    "Cpt",
    "Distribution",
    "ForecastCurve",
    "MaintenancePlan",
    "NodeId",
    "SimulationResult",
    "SystemModel",
    "Topology",
    "TransitionMatrix",
    "child_marginal",
    "crossing_time",
    "expected_state",
    "forecast_at",
    "forecast_curve",
    "joint_probability",
    "kron_vec",
    "make_cpt",
    "n_step",
    "parse_model",
    "parse_observation",
    "plan",
    "posterior",
    "rank_components",
    "replan",
    "row_marginal",
    "serialize_model",
    "simulate",
    "validate_topology",
    "validate_tpm",
]
