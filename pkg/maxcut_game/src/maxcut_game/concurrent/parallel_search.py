"""
Thread-pool versions of the exact solver and the strong-deviation search.

The exact solver splits the canonical search tree at a fixed depth and lets
every worker share one ThreadSafeIncumbent. The deviation search walks sizes in
ascending order and splits each size by leading (smallest) coalition member;
workers whose leading vertex comes after an already found certificate stop
early, and the scan-order minimum is returned. Both give the same answers as
their sequential counterparts; with several optima the exact solver's single
witness may differ.
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple, Union

from ..core import (
    AbsenceRecord,
    BranchAndBound,
    Coloring,
    DeviationSearch,
    Graph,
    Optimum,
    PruningLevel,
    local_search,
)
from ..core.equilibrium import SearchResult
from ..core.game import canonical_sequences, cut_value
from ..core.solver import labeled_count
from .thread_safe_incumbent import ThreadSafeIncumbent
from .thread_safe_pool import ThreadSafeCertificatePool

logger = logging.getLogger(__name__)


def _split_depth(n: int, k: int, workers: int) -> int:
    depth = 0
    while depth < n and sum(1 for _ in canonical_sequences(depth, k)) < 4 * workers:
        depth += 1
    return depth


def max_cut_parallel(g: Graph, k: int, workers: int = 4, depth: Optional[int] = None, enumerate_all: bool = False) -> Optimum:
    """
    Exact maximum k-cut on a thread pool.

    Args:
        g: The graph
        k: Number of colours
        workers: Thread count
        depth: Split depth in search order; chosen from ``workers`` when None
        enumerate_all: Collect every canonical optimum

    Returns:
        Optimum with ``exhausted=True``; S* and the enumerated optima match
        ``max_cut_exact``

    Raises:
        ValueError: If k < 1 or workers < 1
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    depth = _split_depth(g.n, k, workers) if depth is None else min(depth, g.n)
    incumbent = ThreadSafeIncumbent()
    candidates: List[Tuple[int, List[Tuple[int, ...]]]] = []
    if g.n:
        seed = local_search(g, k, Coloring.monochromatic(g.n, k)).canonical()
        incumbent.offer(cut_value(g, seed))
        candidates.append((cut_value(g, seed), [seed.colors]))

    def work(prefix: Tuple[int, ...]) -> BranchAndBound:
        return BranchAndBound(g, k, collect_all=enumerate_all, incumbent=incumbent).run(prefix)

    prefixes = list(canonical_sequences(depth, k))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        searches = list(executor.map(work, prefixes))
    nodes = sum(search.nodes_expanded for search in searches)
    for search in searches:
        if search.best_value >= 0:
            candidates.append((search.best_value, list(search.best)))
    best_value = max(value for value, _ in candidates)
    raw = [colors for value, group in candidates if value == best_value for colors in group]
    witnesses = sorted({Coloring(colors, k).canonical() for colors in raw}, key=lambda c: c.colors)
    if not enumerate_all:
        witnesses = witnesses[:1]
    count = sum(labeled_count(w) for w in witnesses) if enumerate_all else None
    logger.debug("max_cut_parallel n=%d k=%d prefixes=%d -> S*=%d nodes=%d", g.n, k, len(prefixes), best_value, nodes)
    return Optimum(best_value, witnesses, count, True, nodes)


def find_strong_deviation_parallel(
    g: Graph,
    sigma: Coloring,
    q: int,
    pruning: Union[PruningLevel, int] = PruningLevel.NONE,
    workers: int = 4,
) -> SearchResult:
    """
    Parallel ``find_strong_deviation`` returning the same certificate.

    Args:
        g: The graph
        sigma: The colouring to test
        q: Largest coalition size, 1 <= q <= n
        pruning: Search reduction level
        workers: Thread count

    Returns:
        The scan-order-first DeviationCertificate, or an AbsenceRecord
    """
    pruning = PruningLevel(pruning)
    if not 1 <= q <= max(g.n, 1):
        raise ValueError(f"q must lie in 1..{max(g.n, 1)}, got {q}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    pool = ThreadSafeCertificatePool()
    sigma_is_nash = DeviationSearch(g, sigma, pruning).sigma_is_nash
    searches: List[DeviationSearch] = []

    def work(size: int, leading: int) -> None:
        search = DeviationSearch(g, sigma, pruning, sigma_is_nash=sigma_is_nash)
        searches.append(search)
        for members in search.coalitions(size, leading):
            if pool.cancelled:
                best = pool.best()
                if best is not None and best.coalition[0] < leading:
                    return
            cert = next(search.deviations_of(members), None)
            if cert is not None:
                pool.add(cert)
                pool.cancel()
                return

    with ThreadPoolExecutor(max_workers=workers) as executor:
        for size in range(1, q + 1):
            futures = [executor.submit(work, size, leading) for leading in range(g.n - size + 1)]
            for future in futures:
                future.result()
            best = pool.best()
            if best is not None:
                minimal = True if pruning == PruningLevel.NONE else None
                return dataclasses.replace(best, minimal=minimal)
    return AbsenceRecord(
        q,
        pruning,
        sum(search.coalitions_scanned for search in searches),
        sum(search.recolorings_tried for search in searches),
        sigma_is_nash,
    )
