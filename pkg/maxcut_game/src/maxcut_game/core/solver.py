"""
Exact max k-cut by branch and bound, enumeration of all optimal colourings,
a best-response local search used as warm start, and the graph-free
configuration brute force behind the coalition pair-count table.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .game import Coloring, check_compatible, cut_value
from .graph import Graph

logger = logging.getLogger(__name__)


class BudgetExceededError(RuntimeError):
    """Raised when an exhaustive search needs more node expansions than allowed."""

    def __init__(self, budget: int, best_value: int):
        super().__init__(f"Search budget of {budget} node expansions exceeded (best so far: {best_value})")
        self.budget = budget
        self.best_value = best_value


@dataclass
class Optimum:
    """
    Result of an exact search.

    Attributes:
        best_value: S*, or the best value found when not exhausted
        witnesses: Canonical optimal colourings (one unless all were enumerated)
        count_labeled: Number of labeled optima represented by ``witnesses`` when all
            optima were enumerated, otherwise None
        exhausted: True when the search space was fully explored
        nodes_expanded: Branch-and-bound nodes visited
    """

    best_value: int
    witnesses: List[Coloring]
    count_labeled: Optional[int]
    exhausted: bool
    nodes_expanded: int = 0


@dataclass(frozen=True)
class ConfigSpec:
    """Sizes of the colour classes C_a(sigma) of a coalition, one entry per colour in K_C(sigma)."""

    class_sizes: Tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.class_sizes)
        object.__setattr__(self, "class_sizes", sizes)
        if any(s < 1 for s in sizes):
            raise ValueError(f"Class sizes must be positive, got {sizes}")

    @property
    def coalition_size(self) -> int:
        return sum(self.class_sizes)


def labeled_count(coloring: Coloring) -> int:
    """Number of labeled colourings equivalent to ``coloring`` under colour permutation."""
    return math.perm(coloring.k, len(set(coloring.colors)))


class Incumbent:
    """
    Best cut value seen so far by a search.

    Values only ever increase; ``offer`` keeps the maximum.
    """

    def __init__(self, value: int = -1):
        self._value = value

    def get(self) -> int:
        """
        Get the current incumbent value.

        Returns:
            The largest value offered so far, or the initial value
        """
        return self._value

    def offer(self, value: int) -> bool:
        """
        Offer a candidate value.

        Args:
            value: Cut value attained by some colouring

        Returns:
            True if the incumbent improved, False otherwise
        """
        if value > self._value:
            self._value = value
            return True
        return False


class BranchAndBound:
    """
    Depth-first branch and bound over canonical colourings.

    Vertices are assigned in descending-degree order (ties by index). A vertex may
    only open the next unused colour, so each colour-permutation class is visited
    once. The optimistic bound is the current cut plus, for every unassigned
    vertex, its edges to assigned vertices minus its smallest colour count among
    them, plus all edges between unassigned vertices.
    """

    def __init__(
        self,
        g: Graph,
        k: int,
        *,
        collect_all: bool = False,
        budget: Optional[int] = None,
        incumbent=None,
    ):
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.g = g
        self.k = k
        self.collect_all = collect_all
        self.budget = budget
        self.incumbent = incumbent if incumbent is not None else Incumbent()
        self.order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
        position = {v: i for i, v in enumerate(self.order)}
        # edges whose both endpoints sit at positions >= i
        self._suffix_edges = [0] * (g.n + 1)
        for i in range(g.n - 1, -1, -1):
            v = self.order[i]
            later = sum(1 for u in g.neighbors(v) if position[u] > i)
            self._suffix_edges[i] = self._suffix_edges[i + 1] + later
        self.nodes_expanded = 0
        self.best_value = -1
        self.best: List[Tuple[int, ...]] = []
        self.stopped = False

    def _bound(self, depth: int, cut_so_far: int, masks: List[int], assigned: int, used: int) -> int:
        adjacency = self.g.adjacency
        optimistic = cut_so_far + self._suffix_edges[depth]
        for i in range(depth, self.g.n):
            row = adjacency[self.order[i]]
            back = (row & assigned).bit_count()
            if back and used == self.k:
                back -= min((row & masks[a]).bit_count() for a in range(1, self.k + 1))
            optimistic += back
        return optimistic

    def _prunes(self, bound: int) -> bool:
        best = self.incumbent.get()
        return bound < best if self.collect_all else bound <= best

    def _record(self, value: int, colors: List[int]) -> None:
        if value > self.best_value:
            self.best_value = value
            self.best = [tuple(colors)]
        elif value == self.best_value and self.collect_all:
            self.best.append(tuple(colors))
        self.incumbent.offer(value)

    def run(self, prefix: Sequence[int] = ()) -> "BranchAndBound":
        """
        Explore every canonical completion of ``prefix``.

        Args:
            prefix: Colours of the first len(prefix) vertices in search order;
                must itself be canonical

        Returns:
            self, with ``best_value``/``best`` filled in
        """
        g = self.g
        colors = [0] * g.n
        masks = [0] * (self.k + 1)
        assigned = 0
        cut_so_far = 0
        used = 0
        for depth, a in enumerate(prefix):
            if not 1 <= a <= min(used + 1, self.k):
                raise ValueError(f"Prefix {tuple(prefix)} is not canonical")
            v = self.order[depth]
            row = g.adjacency[v]
            cut_so_far += (row & assigned).bit_count() - (row & masks[a]).bit_count()
            colors[v] = a
            masks[a] |= 1 << v
            assigned |= 1 << v
            used = max(used, a)
        self._branch(len(prefix), cut_so_far, colors, masks, assigned, used)
        return self

    def _branch(self, depth: int, cut_so_far: int, colors: List[int], masks: List[int], assigned: int, used: int) -> None:
        if self.stopped:
            return
        self.nodes_expanded += 1
        if self.budget is not None and self.nodes_expanded > self.budget:
            self.stopped = True
            return
        g = self.g
        if depth == g.n:
            self._record(cut_so_far, colors)
            return
        if self._prunes(self._bound(depth, cut_so_far, masks, assigned, used)):
            return
        v = self.order[depth]
        row = g.adjacency[v]
        back = (row & assigned).bit_count()
        bit = 1 << v
        for a in range(1, min(used + 1, self.k) + 1):
            gain = back - (row & masks[a]).bit_count()
            colors[v] = a
            masks[a] |= bit
            self._branch(depth + 1, cut_so_far + gain, colors, masks, assigned | bit, max(used, a))
            masks[a] &= ~bit
            colors[v] = 0
            if self.stopped:
                return


def _to_colorings(raw: Sequence[Tuple[int, ...]], k: int) -> List[Coloring]:
    return sorted({Coloring(colors, k).canonical() for colors in raw}, key=lambda c: c.colors)


def max_cut_exact(
    g: Graph,
    k: int,
    budget: Optional[int] = None,
    *,
    enumerate_all: bool = False,
    warm_start: bool = True,
) -> Optimum:
    """
    Maximum k-cut by branch and bound.

    Args:
        g: The graph
        k: Number of colours (at least 1)
        budget: Maximum node expansions; None means unlimited
        enumerate_all: Collect every canonical optimum instead of one witness
        warm_start: Seed the incumbent with a local-search value

    Returns:
        Optimum; ``exhausted`` is False when the budget ran out, in which case
        ``best_value`` is the best value seen (a lower bound on S*)

    Raises:
        ValueError: If k < 1
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    search = BranchAndBound(g, k, collect_all=enumerate_all, budget=budget)
    if warm_start and g.n:
        seed = local_search(g, k, Coloring.monochromatic(g.n, k)).canonical()
        search._record(cut_value(g, seed), list(seed.colors))
    search.run()
    exhausted = not search.stopped
    if search.best_value < 0:
        # budget ran out before any leaf and no warm start
        witnesses: List[Coloring] = []
    else:
        witnesses = _to_colorings(search.best, k)
    count = sum(labeled_count(w) for w in witnesses) if enumerate_all and exhausted else None
    logger.debug(
        "max_cut_exact n=%d m=%d k=%d -> S*=%d nodes=%d exhausted=%s",
        g.n,
        g.m,
        k,
        search.best_value,
        search.nodes_expanded,
        exhausted,
    )
    return Optimum(search.best_value, witnesses, count, exhausted, search.nodes_expanded)


def enumerate_optimal(g: Graph, k: int, canonical: bool = True, budget: Optional[int] = None) -> List[Coloring]:
    """
    All optimal colourings.

    Args:
        g: The graph
        k: Number of colours
        canonical: Return one representative per colour permutation class
            (colours numbered by first appearance); otherwise every labeled optimum
        budget: Maximum node expansions

    Returns:
        Optimal colourings sorted by colour tuple

    Raises:
        BudgetExceededError: If the budget runs out before the space is exhausted
    """
    optimum = max_cut_exact(g, k, budget, enumerate_all=True)
    if not optimum.exhausted:
        raise BudgetExceededError(budget, optimum.best_value)
    if canonical:
        return optimum.witnesses
    labeled = {c for w in optimum.witnesses for c in w.relabelings()}
    return sorted(labeled, key=lambda c: c.colors)


def _best_move(g: Graph, colors: List[int], masks: List[int], k: int, v: int) -> Tuple[int, int]:
    """(colour, gain) minimising the same-colour neighbour count; ties go to the smallest colour."""
    row = g.adjacency[v]
    current = (row & masks[colors[v]]).bit_count()
    best_color, best_count = colors[v], current
    for a in range(1, k + 1):
        count = (row & masks[a]).bit_count()
        if count < best_count:
            best_color, best_count = a, count
    return best_color, current - best_count


def local_search(
    g: Graph,
    k: int,
    sigma0: Coloring,
    max_passes: Optional[int] = None,
    on_move: Optional[Callable[[int, int, int], None]] = None,
) -> Coloring:
    """
    Best-response improvement until no vertex can gain.

    Vertices are scanned in index order; a vertex with a positive gain moves to
    the colour with the fewest same-coloured neighbours (smallest index on ties).
    Each move raises the cut by its gain, so the loop stops after at most m moves.

    Args:
        g: The graph
        k: Number of colours
        sigma0: Starting colouring
        max_passes: Optional cap on full scans; None runs to convergence
        on_move: Called with (vertex, old colour, new colour) after each move

    Returns:
        The final colouring (a NE whenever the pass cap was not hit)
    """
    check_compatible(g, sigma0)
    if sigma0.k != k:
        raise ValueError(f"Colouring uses k={sigma0.k}, expected {k}")
    colors = list(sigma0.colors)
    masks = list(sigma0.class_masks)
    passes = 0
    while max_passes is None or passes < max_passes:
        passes += 1
        moved = False
        for v in range(g.n):
            color, gain = _best_move(g, colors, masks, k, v)
            if gain > 0:
                old = colors[v]
                masks[old] &= ~(1 << v)
                masks[color] |= 1 << v
                colors[v] = color
                moved = True
                if on_move is not None:
                    on_move(v, old, color)
        if not moved:
            break
    return Coloring(tuple(colors), k)


def _class_max_split(size: int, targets: int) -> int:
    """Brute force: most same-class pairs that end up with different colours over ``targets`` colours."""
    if size < 2 or targets < 2:
        return 0
    best = 0
    for assignment in itertools.product(range(targets), repeat=size):
        differing = sum(1 for i, j in itertools.combinations(range(size), 2) if assignment[i] != assignment[j])
        best = max(best, differing)
    return best


def max_pc_config(spec: ConfigSpec) -> int:
    """
    Largest P_C(sigma, gamma) a coalition with the given class sizes can reach.

    Every member moves to a different colour already used by the coalition and
    all intra-class pairs are assumed adjacent. Members of distinct classes never
    contribute (they differ in sigma), so each class is brute-forced over its
    (|K_C| - 1)^|class| recolourings independently and the maxima are added.

    Raises:
        ValueError: With fewer than two classes
    """
    if len(spec.class_sizes) < 2:
        raise ValueError(f"A deviating configuration needs at least two colour classes, got {spec.class_sizes}")
    targets = len(spec.class_sizes) - 1
    return sum(_class_max_split(size, targets) for size in spec.class_sizes)


def balanced_split_pairs(size: int, targets: int) -> int:
    """Closed form of ``_class_max_split``: pairs split by the most even distribution."""
    if targets < 1:
        return 0
    q, r = divmod(size, targets)
    same = r * math.comb(q + 1, 2) + (targets - r) * math.comb(q, 2)
    return math.comb(size, 2) - same
