"""
Exact engine for the max k-cut game.

Core (single-threaded) implementations:
- Graph, Coloring and the payoff / cut accounting of the game
- max_cut_exact, enumerate_optimal: branch-and-bound optimisation
- find_strong_deviation, is_q_se: coalition-enumeration equilibrium checks
- run_best_response, run_coalition_dynamics: improvement dynamics with traces

Concurrent (thread-safe) implementations:
- ThreadSafeIncumbent: shared bound for parallel branch and bound
- ThreadSafeCertificatePool: scan-order-minimum collector for parallel deviation search
"""

__version__ = "0.1.0"

from .core import (
    Coloring,
    DeviationCertificate,
    Graph,
    Optimum,
    PruningLevel,
    Trace,
    enumerate_optimal,
    find_strong_deviation,
    is_nash,
    is_q_se,
    max_cut_exact,
    run_best_response,
    run_coalition_dynamics,
)
from .concurrent import ThreadSafeCertificatePool, ThreadSafeIncumbent

__all__ = [
    "__version__",
    # Core implementations
    "Coloring",
    "DeviationCertificate",
    "Graph",
    "Optimum",
    "PruningLevel",
    "Trace",
    "enumerate_optimal",
    "find_strong_deviation",
    "is_nash",
    "is_q_se",
    "max_cut_exact",
    "run_best_response",
    "run_coalition_dynamics",
    # Concurrent implementations
    "ThreadSafeCertificatePool",
    "ThreadSafeIncumbent",
]
