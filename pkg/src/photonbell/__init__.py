"""Photon polarization correlations in e+ e- annihilation in flight.

Closed-form joint and single-photon polarization probabilities for two
detector geometries, the Clauser-Horne statistic built from them, numerical
oracles for every closed form, angle searches and a coincidence simulator.
"""

from .amplitude import ProcessKind, pr_process1, pr_process2
from .bell import AngleQuad, SReport, Verdict, classify, s_beta_scan, s_statistic
from .closed_form import (
    joint,
    joint_p1,
    joint_p1_via_delta_limit,
    joint_p2,
    marginal,
    marginal_p1,
    marginal_p2,
    statistical_dependence_gap,
)
from .errors import (
    ConvergenceError,
    DegenerateKinematicsError,
    DomainError,
    InputValidationError,
    PhotonBellError,
    ProbabilityRangeError,
)
from .integrals import QuadratureSpec, a_of_beta, b_of_beta, n_of_beta, quad_adaptive
from .montecarlo import estimate_s, sample_outcomes
from .search import SearchConfig, grid_search, refine, search, violation_frontier

__version__ = "0.1.0"

__all__ = [
    "AngleQuad",
    "ConvergenceError",
    "DegenerateKinematicsError",
    "DomainError",
    "InputValidationError",
    "PhotonBellError",
    "ProbabilityRangeError",
    "ProcessKind",
    "QuadratureSpec",
    "SReport",
    "SearchConfig",
    "Verdict",
    "a_of_beta",
    "b_of_beta",
    "classify",
    "estimate_s",
    "grid_search",
    "joint",
    "joint_p1",
    "joint_p1_via_delta_limit",
    "joint_p2",
    "marginal",
    "marginal_p1",
    "marginal_p2",
    "n_of_beta",
    "pr_process1",
    "pr_process2",
    "quad_adaptive",
    "refine",
    "s_beta_scan",
    "s_statistic",
    "sample_outcomes",
    "search",
    "statistical_dependence_gap",
    "violation_frontier",
]
