"""
Core implementations of the max k-cut game engine.
These implementations are not thread-safe and should be used in single-threaded contexts.
"""

from .dynamics import (
    Schedule,
    Step,
    Terminal,
    Trace,
    replay,
    run_best_response,
    run_coalition_dynamics,
    smallest_improving_color,
    state_digest,
)
from .equilibrium import (
    AbsenceRecord,
    AuditPreconditionError,
    AuditReport,
    CertificatePool,
    DeviationCertificate,
    DeviationSearch,
    Finding,
    PruningLevel,
    audit_minimal_deviation,
    best_response,
    find_strong_deviation,
    is_minimal,
    is_nash,
    is_q_se,
    iter_strong_deviations,
    verify_certificate,
)
from .game import Coloring, CutReport, cut, cut_difference, cut_value, payoff, payoffs, p_c, social_welfare
from .graph import Graph, GraphFormatError, RandomGraphSpec, generate_er, parse_graph, serialize_graph
from .solver import (
    BranchAndBound,
    BudgetExceededError,
    ConfigSpec,
    Incumbent,
    Optimum,
    enumerate_optimal,
    local_search,
    max_cut_exact,
    max_pc_config,
)

__all__ = [
    "AbsenceRecord",
    "AuditPreconditionError",
    "AuditReport",
    "BranchAndBound",
    "BudgetExceededError",
    "CertificatePool",
    "Coloring",
    "ConfigSpec",
    "CutReport",
    "DeviationCertificate",
    "DeviationSearch",
    "Finding",
    "Graph",
    "GraphFormatError",
    "Incumbent",
    "Optimum",
    "PruningLevel",
    "RandomGraphSpec",
    "Schedule",
    "Step",
    "Terminal",
    "Trace",
    "audit_minimal_deviation",
    "best_response",
    "cut",
    "cut_difference",
    "cut_value",
    "enumerate_optimal",
    "find_strong_deviation",
    "generate_er",
    "is_minimal",
    "is_nash",
    "is_q_se",
    "iter_strong_deviations",
    "local_search",
    "max_cut_exact",
    "max_pc_config",
    "p_c",
    "parse_graph",
    "payoff",
    "payoffs",
    "replay",
    "run_best_response",
    "run_coalition_dynamics",
    "serialize_graph",
    "smallest_improving_color",
    "social_welfare",
    "state_digest",
    "verify_certificate",
]
