"""
Thread-safe counterparts of the core search state, and thread-pool searches built on them.
These implementations are safe to use in multi-threaded contexts.
"""

from .parallel_search import find_strong_deviation_parallel, max_cut_parallel
from .thread_safe_incumbent import ThreadSafeIncumbent
from .thread_safe_pool import ThreadSafeCertificatePool

__all__ = [
    "ThreadSafeCertificatePool",
    "ThreadSafeIncumbent",
    "find_strong_deviation_parallel",
    "max_cut_parallel",
]
