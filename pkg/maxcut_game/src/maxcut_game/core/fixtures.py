"""
Named test instances.

The six-vertex worked example lists only its cut edges; the full edge set is
under-determined. ``figure1_graph()`` adds {v1, v3}, ``figure1_graph_alternate()``
adds {v1, v6}. Both reproduce every stated payoff, degree and cut value.
"""

from typing import Dict, Tuple

from .game import Coloring, coloring_from_names
from .graph import Graph

PALETTE: Dict[str, int] = {"red": 1, "blue": 2, "green": 3}
FIGURE1_NAMES: Tuple[str, ...] = ("v1", "v2", "v3", "v4", "v5", "v6")
FIGURE1_CUT_EDGES: Tuple[Tuple[str, str], ...] = (
    ("v1", "v2"),
    ("v1", "v4"),
    ("v2", "v3"),
    ("v3", "v4"),
    ("v3", "v5"),
    ("v4", "v5"),
    ("v4", "v6"),
    ("v5", "v6"),
)


def _named_graph(extra: Tuple[str, str]) -> Graph:
    index = {name: i for i, name in enumerate(FIGURE1_NAMES)}
    edges = [(index[u], index[v]) for u, v in FIGURE1_CUT_EDGES + (extra,)]
    return Graph(len(FIGURE1_NAMES), edges, FIGURE1_NAMES)


def figure1_graph() -> Graph:
    """Worked example, canonical reconstruction (cut edges plus {v1, v3})."""
    return _named_graph(("v1", "v3"))


def figure1_graph_alternate() -> Graph:
    """Worked example, alternate reconstruction (cut edges plus {v1, v6})."""
    return _named_graph(("v1", "v6"))


def figure1_sigma() -> Coloring:
    return coloring_from_names(("red", "blue", "red", "blue", "green", "red"), PALETTE)


def figure1_gamma() -> Coloring:
    return coloring_from_names(("green", "blue", "green", "blue", "red", "red"), PALETTE)


FIGURE1_COALITION = frozenset({0, 2, 4})


def swap_gadget() -> Tuple[Graph, Coloring]:
    """
    4-cycle 0-1-2-3-0 coloured (1, 2, 2, 1) with k = 2.

    The colouring is a NE, and {0, 1} (also {2, 3}) strongly deviates by
    swapping colours. G({0, 1}) has edges leaving it.
    """
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), Coloring((1, 2, 2, 1), 2)


def double_swap_gadget() -> Tuple[Graph, Coloring]:
    """Two disjoint copies of ``swap_gadget`` on vertices 0..3 and 4..7."""
    g, sigma = swap_gadget()
    edges = list(g.edges) + [(u + 4, v + 4) for u, v in g.edges]
    return Graph(8, edges), Coloring(sigma.colors + sigma.colors, sigma.k)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(v, v + 1) for v in range(n - 1)])
