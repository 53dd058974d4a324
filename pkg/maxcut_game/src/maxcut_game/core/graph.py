"""
Undirected simple graphs with bit-packed adjacency rows.

Vertices are the integers 0..n-1. Each vertex owns an ``int`` bitmask of its
neighbours, so neighbourhood intersections (triangle tests, colour degrees)
are single machine-word operations for the graph sizes this package targets.
"""

import itertools
import json
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

RNG_ALGORITHM = "numpy.PCG64/uniform-lex-pairs/v1"


class GraphFormatError(ValueError):
    """Raised when a graph description is malformed."""


def _normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """
    Immutable undirected simple graph.

    The edge set is stored as sorted ``(u, v)`` pairs with ``u < v`` and the
    adjacency as one bitmask per vertex. Optional vertex names are kept for
    serialization only; all operations use indices.
    """

    __slots__ = ("_n", "_edges", "_adjacency", "_names")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), names: Optional[Sequence[str]] = None):
        """
        Build a graph.

        Args:
            n: Number of vertices
            edges: Vertex pairs; order inside a pair is irrelevant
            names: Optional display name per vertex

        Raises:
            ValueError: On negative n, out-of-range vertices, self-loops, duplicate edges, or names
                that are repeated, empty, or contain whitespace or '#'
        """
        if n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {n}")
        adjacency = [0] * n
        normalized = set()
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge {{{u},{v}}} has a vertex outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            edge = _normalize_edge(u, v)
            if edge in normalized:
                raise ValueError(f"Duplicate edge {{{u},{v}}}")
            normalized.add(edge)
            adjacency[u] |= 1 << v
            adjacency[v] |= 1 << u
        if names is not None:
            names = tuple(str(name) for name in names)
            if len(names) != n:
                raise ValueError(f"Expected {n} vertex names, got {len(names)}")
            if len(set(names)) != n:
                raise ValueError("Vertex names must be unique")
            for name in names:
                if not name or "#" in name or any(ch.isspace() for ch in name):
                    raise ValueError(f"Vertex name {name!r} must be non-empty without whitespace or '#'")
        self._n = n
        self._edges: Tuple[Edge, ...] = tuple(sorted(normalized))
        self._adjacency: Tuple[int, ...] = tuple(adjacency)
        self._names: Optional[Tuple[str, ...]] = names

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Sorted edge tuples ``(u, v)`` with ``u < v``."""
        return self._edges

    @property
    def adjacency(self) -> Tuple[int, ...]:
        """Neighbourhood bitmask per vertex."""
        return self._adjacency

    @property
    def names(self) -> Optional[Tuple[str, ...]]:
        return self._names

    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self._adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> List[int]:
        self._check_vertex(v)
        return bits(self._adjacency[v])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self._adjacency[v].bit_count()

    def name_of(self, v: int) -> str:
        self._check_vertex(v)
        return self._names[v] if self._names is not None else str(v)

    def with_names(self, names: Sequence[str]) -> "Graph":
        return Graph(self._n, self._edges, names)

    def to_networkx(self) -> nx.Graph:
        """Return a networkx copy with integer nodes 0..n-1."""
        h = nx.Graph()
        h.add_nodes_from(range(self._n))
        h.add_edges_from(self._edges)
        return h

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise ValueError(f"Vertex {v} out of range 0..{self._n - 1}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


def bits(mask: int) -> List[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class RandomGraphSpec:
    """
    Erdős–Rényi G(n, p) request with ``p = avg_degree / (n - 1)``.

    Note:
        For n < 2 there are no vertex pairs; p is taken as 0.
    """

    n: int
    avg_degree: float
    seed: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {self.n}")
        p = self.edge_probability
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Edge probability {p} outside [0, 1] (n={self.n}, avg_degree={self.avg_degree})")

    @property
    def edge_probability(self) -> float:
        if self.n < 2:
            return 0.0
        return self.avg_degree / (self.n - 1)


def degree(g: Graph, v: int) -> int:
    """
    Degree of a vertex.

    Args:
        g: The graph
        v: Vertex index

    Returns:
        Number of neighbours of v

    Raises:
        ValueError: If v is out of range
    """
    return g.degree(v)


def generate_er(spec: RandomGraphSpec) -> Graph:
    """
    Sample a G(n, p) graph.

    Pairs ``(u, v)``, ``u < v``, are visited in lexicographic order and each is
    kept when the next ``numpy`` PCG64 uniform draw is below p, so a seed fully
    determines the graph.

    Args:
        spec: Vertex count, mean degree and seed

    Returns:
        The sampled graph
    """
    pairs = list(itertools.combinations(range(spec.n), 2))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    draws = rng.random(len(pairs))
    p = spec.edge_probability
    edges = [pair for pair, draw in zip(pairs, draws) if draw < p]
    logger.debug("generate_er n=%d p=%.4f seed=%d -> m=%d", spec.n, p, spec.seed, len(edges))
    return Graph(spec.n, edges)


def enumerate_graphs(n: int, m: int) -> Iterator[Graph]:
    """
    Yield every labeled simple graph on n vertices with exactly m edges.

    Graphs come in lexicographic order of their sorted edge lists.

    Raises:
        ValueError: If m is outside 0..n(n-1)/2
    """
    pairs = list(itertools.combinations(range(n), 2))
    if not 0 <= m <= len(pairs):
        raise ValueError(f"Edge count {m} outside 0..{len(pairs)} for n={n}")
    for chosen in itertools.combinations(pairs, m):
        yield Graph(n, chosen)


def graph_atlas(n_max: int, n_min: int = 0) -> Iterator[Graph]:
    """
    Yield one graph per isomorphism class with ``n_min <= n <= n_max``.

    Uses the networkx graph atlas, which covers every graph with at most 7 vertices.

    Raises:
        ValueError: If n_max exceeds 7
    """
    if n_max > 7:
        raise ValueError(f"The graph atlas only covers n <= 7, got {n_max}")
    for h in nx.graph_atlas_g():
        order = h.number_of_nodes()
        if n_min <= order <= n_max:
            yield Graph(order, h.edges())


def contains_triangle(g: Graph) -> bool:
    """True iff three mutually adjacent vertices exist."""
    adjacency = g.adjacency
    return any(adjacency[u] & adjacency[v] for u, v in g.edges)


def count_triangles(g: Graph) -> int:
    adjacency = g.adjacency
    return sum((adjacency[u] & adjacency[v]).bit_count() for u, v in g.edges) // 3


def induced_subgraph(g: Graph, c: Iterable[int]) -> Tuple[Graph, Dict[int, int]]:
    """
    Restrict g to the vertex set c.

    Args:
        g: The graph
        c: Vertices to keep

    Returns:
        ``(G(C), index_map)`` where index_map sends each original vertex to its
        index in G(C); vertices keep their relative order

    Raises:
        ValueError: If a vertex is out of range
    """
    kept = sorted(set(c))
    for v in kept:
        g._check_vertex(v)
    index_map = {v: i for i, v in enumerate(kept)}
    keep_mask = mask_of(kept)
    edges = []
    for v in kept:
        for u in bits(g.adjacency[v] & keep_mask):
            if v < u:
                edges.append((index_map[v], index_map[u]))
    names = [g.names[v] for v in kept] if g.names is not None else None
    return Graph(len(kept), edges, names), index_map


def is_connected_mask(g: Graph, mask: int) -> bool:
    """True iff the subgraph induced by the vertex bitmask is connected (and non-empty)."""
    if not mask:
        return False
    adjacency = g.adjacency
    reached = mask & -mask
    frontier = reached
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        grown = adjacency[low.bit_length() - 1] & mask & ~reached
        reached |= grown
        frontier |= grown
    return reached == mask


def is_isolated_component(g: Graph, h: Iterable[int]) -> bool:
    """
    True iff G(H) is connected and no edge joins H to the rest of the graph.

    Raises:
        ValueError: If h is empty or contains an out-of-range vertex
    """
    vertices = set(h)
    if not vertices:
        raise ValueError("An isolated component needs at least one vertex")
    for v in vertices:
        g._check_vertex(v)
    mask = mask_of(vertices)
    if any(g.adjacency[v] & ~mask for v in vertices):
        return False
    return is_connected_mask(g, mask)


# Serialization ---------------------------------------------------------------


def _resolve_vertex(token: str, n: int, lookup: Mapping[str, int], line_no: int) -> int:
    if token in lookup:
        return lookup[token]
    try:
        v = int(token)
    except ValueError:
        raise GraphFormatError(f"line {line_no}: unknown vertex name {token!r}") from None
    if not 0 <= v < n:
        raise GraphFormatError(f"line {line_no}: vertex {v} outside 0..{n - 1}")
    return v


def parse_graph_text(text: str) -> Tuple[Graph, Optional[int]]:
    """
    Parse the line format and return the graph together with the optional k.

    Format::

        n <count> [k <colors>]
        names <name_0> ... <name_{n-1}>     (optional)
        <u> <v>                             (one edge per line, names or indices)

    Blank lines and ``#`` comments are ignored.

    Raises:
        GraphFormatError: On malformed headers, unknown vertices, self-loops or duplicates
    """
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((line_no, stripped.split()))
    if not lines:
        raise GraphFormatError("empty graph description")
    line_no, header = lines[0]
    if len(header) not in (2, 4) or header[0] != "n" or (len(header) == 4 and header[2] != "k"):
        raise GraphFormatError(f"line {line_no}: expected 'n <count> [k <colors>]', got {' '.join(header)!r}")
    try:
        n = int(header[1])
        k = int(header[3]) if len(header) == 4 else None
    except ValueError:
        raise GraphFormatError(f"line {line_no}: non-integer header value") from None
    if n < 0 or (k is not None and k < 1):
        raise GraphFormatError(f"line {line_no}: invalid header values n={n} k={k}")

    names = None
    body = lines[1:]
    if body and body[0][1][0] == "names":
        line_no, tokens = body[0]
        names = tokens[1:]
        if len(names) != n or len(set(names)) != n:
            raise GraphFormatError(f"line {line_no}: expected {n} distinct vertex names")
        body = body[1:]
    lookup = {name: i for i, name in enumerate(names)} if names else {}

    edges = []
    seen = set()
    for line_no, tokens in body:
        if len(tokens) != 2:
            raise GraphFormatError(f"line {line_no}: expected an edge 'u v', got {' '.join(tokens)!r}")
        u = _resolve_vertex(tokens[0], n, lookup, line_no)
        v = _resolve_vertex(tokens[1], n, lookup, line_no)
        if u == v:
            raise GraphFormatError(f"line {line_no}: self-loop at {tokens[0]}")
        edge = _normalize_edge(u, v)
        if edge in seen:
            raise GraphFormatError(f"line {line_no}: duplicate edge {tokens[0]} {tokens[1]}")
        seen.add(edge)
        edges.append(edge)
    return Graph(n, edges, names), k


def parse_graph(text: str) -> Graph:
    """Parse the line format (see ``parse_graph_text``) and return the graph."""
    return parse_graph_text(text)[0]


def serialize_graph(g: Graph, k: Optional[int] = None) -> str:
    """Render g in the line format; names are written when the graph carries them."""
    header = f"n {g.n}" + (f" k {k}" if k is not None else "")
    out = [header]
    if g.names is not None:
        out.append("names " + " ".join(g.names))
    for u, v in g.edges:
        out.append(f"{g.name_of(u)} {g.name_of(v)}")
    return "\n".join(out) + "\n"


def graph_to_dict(g: Graph) -> Dict[str, object]:
    """Structured-object form ``{n, edges, names}``; names map name -> index."""
    record: Dict[str, object] = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    if g.names is not None:
        record["names"] = {name: i for i, name in enumerate(g.names)}
    return record


def graph_from_dict(record: Mapping[str, object]) -> Graph:
    """
    Inverse of ``graph_to_dict``.

    Raises:
        GraphFormatError: On missing fields, self-loops, duplicates or bad names
    """
    try:
        n = int(record["n"])
        raw_edges = list(record.get("edges", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"structured graph needs integer 'n' and list 'edges': {exc}") from None
    names = None
    if record.get("names") is not None:
        try:
            mapping = dict(record["names"])
            indices = sorted(mapping.values())
        except (TypeError, ValueError):
            raise GraphFormatError("'names' must map vertex names to indices") from None
        if indices != list(range(n)):
            raise GraphFormatError("'names' must map every vertex index exactly once")
        names = [name for name, _ in sorted(mapping.items(), key=lambda item: item[1])]
    seen = set()
    edges = []
    for pair in raw_edges:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise GraphFormatError(f"edge {pair!r} is not a pair")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in pair):
            raise GraphFormatError(f"edge {pair!r} has a non-integer vertex")
        u, v = pair
        if u == v:
            raise GraphFormatError(f"self-loop at {u}")
        edge = _normalize_edge(u, v)
        if edge in seen:
            raise GraphFormatError(f"duplicate edge {pair!r}")
        seen.add(edge)
        edges.append(edge)
    try:
        return Graph(n, edges, names)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def load_graph_document(text: str) -> Tuple[Graph, Optional[int], Optional[List[int]]]:
    """
    Read either graph format.

    Returns:
        ``(graph, k, sigma)``; k and sigma are None when the document omits them
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid structured graph: {exc}") from None
        g = graph_from_dict(record)
        k = record.get("k")
        sigma = record.get("sigma")
        return g, int(k) if k is not None else None, list(sigma) if sigma is not None else None
    g, k = parse_graph_text(text)
    return g, k, None
