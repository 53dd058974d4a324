"""
Colorings, payoffs and the coalition-level quantities of the max k-cut game.

A player's payoff is the number of neighbours holding a different colour.
Colours are the integers 1..k; fixtures map red=1, blue=2, green=3.
"""

import csv
import io
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .graph import Edge, Graph, mask_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Coloring:
    """
    A strategy profile: one colour in 1..k per vertex.

    Args:
        colors: Colour of each vertex
        k: Number of available colours
    """

    colors: Tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.k:
                raise ValueError(f"Colour {c} of vertex {v} outside 1..{self.k}")

    @classmethod
    def monochromatic(cls, n: int, k: int, color: int = 1) -> "Coloring":
        return cls((color,) * n, k)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __iter__(self):
        return iter(self.colors)

    @cached_property
    def class_masks(self) -> Tuple[int, ...]:
        """Vertex bitmask per colour, indexed 0..k (index 0 is always empty)."""
        masks = [0] * (self.k + 1)
        for v, c in enumerate(self.colors):
            masks[c] |= 1 << v
        return tuple(masks)

    def restrict(self, c: Iterable[int]) -> Mapping[int, int]:
        """sigma_C: the colours of the members of c."""
        return {v: self.colors[v] for v in sorted(set(c))}

    def replace(self, assignments: Mapping[int, int]) -> "Coloring":
        """Return a copy whose colours follow ``assignments`` on its keys and self elsewhere."""
        colors = list(self.colors)
        for v, c in assignments.items():
            if not 0 <= v < len(colors):
                raise ValueError(f"Vertex {v} out of range 0..{len(colors) - 1}")
            colors[v] = c
        return Coloring(tuple(colors), self.k)

    def canonical(self) -> "Coloring":
        """Relabel colours in order of first appearance (vertex 0 gets colour 1)."""
        relabel = {}
        out = []
        for c in self.colors:
            if c not in relabel:
                relabel[c] = len(relabel) + 1
            out.append(relabel[c])
        return Coloring(tuple(out), self.k)

    def relabelings(self) -> List["Coloring"]:
        """Every distinct colouring obtained by permuting the k colours, sorted."""
        used = sorted(set(self.colors))
        seen = set()
        for image in itertools.permutations(range(1, self.k + 1), len(used)):
            mapping = dict(zip(used, image))
            seen.add(tuple(mapping[c] for c in self.colors))
        return [Coloring(colors, self.k) for colors in sorted(seen)]

    def to_list(self) -> List[int]:
        return list(self.colors)


@dataclass(frozen=True)
class CutReport:
    """E(sigma) and S(sigma)."""

    cut_edges: FrozenSet[Edge]
    size: int


def check_compatible(g: Graph, *colorings: Coloring) -> None:
    """
    Raises:
        ValueError: If a colouring's length differs from g.n or the colourings disagree on k
    """
    for sigma in colorings:
        if len(sigma) != g.n:
            raise ValueError(f"Colouring of length {len(sigma)} does not match graph with n={g.n}")
    if len({sigma.k for sigma in colorings}) > 1:
        raise ValueError("Colourings use different k")


def _check_color(sigma: Coloring, a: int) -> None:
    if not 1 <= a <= sigma.k:
        raise ValueError(f"Colour {a} outside 1..{sigma.k}")


def color_degree(g: Graph, sigma: Coloring, v: int, a: int) -> int:
    """
    delta(v, sigma, a): number of neighbours of v holding colour a.

    Raises:
        ValueError: On an out-of-range vertex or colour
    """
    check_compatible(g, sigma)
    g._check_vertex(v)
    _check_color(sigma, a)
    return (g.adjacency[v] & sigma.class_masks[a]).bit_count()


def cut(g: Graph, sigma: Coloring) -> CutReport:
    """
    The cut of g under sigma.

    Returns:
        The bichromatic edges and their count

    Raises:
        ValueError: On a size mismatch
    """
    check_compatible(g, sigma)
    edges = frozenset((u, v) for u, v in g.edges if sigma[u] != sigma[v])
    return CutReport(edges, len(edges))


def cut_value(g: Graph, sigma: Coloring) -> int:
    """S(sigma) without materialising the edge set."""
    check_compatible(g, sigma)
    return sum(1 for u, v in g.edges if sigma[u] != sigma[v])


def payoff(g: Graph, sigma: Coloring, v: int) -> int:
    """
    mu_v(sigma) = degree(v) - delta(v, sigma, sigma_v).

    Raises:
        ValueError: On an out-of-range vertex
    """
    check_compatible(g, sigma)
    g._check_vertex(v)
    row = g.adjacency[v]
    return row.bit_count() - (row & sigma.class_masks[sigma[v]]).bit_count()


def payoffs(g: Graph, sigma: Coloring) -> List[int]:
    check_compatible(g, sigma)
    masks = sigma.class_masks
    return [row.bit_count() - (row & masks[c]).bit_count() for row, c in zip(g.adjacency, sigma.colors)]


def social_welfare(g: Graph, sigma: Coloring) -> int:
    """SW(sigma), the sum of all payoffs; always 2 * S(sigma)."""
    return sum(payoffs(g, sigma))


def cut_difference(g: Graph, sigma: Coloring, gamma: Coloring) -> int:
    """Delta S(sigma, gamma) = S(gamma) - S(sigma)."""
    check_compatible(g, sigma, gamma)
    return cut_value(g, gamma) - cut_value(g, sigma)


def p_c(g: Graph, sigma: Coloring, gamma: Coloring, c: Iterable[int]) -> int:
    """
    P_C(sigma, gamma): edges inside c, monochromatic in sigma and bichromatic in gamma.

    Computed by direct edge iteration over G(C).
    """
    check_compatible(g, sigma, gamma)
    members = mask_of(c)
    count = 0
    for u, v in g.edges:
        if members >> u & 1 and members >> v & 1 and sigma[u] == sigma[v] and gamma[u] != gamma[v]:
            count += 1
    return count


def p_c_half_sum(g: Graph, sigma: Coloring, gamma: Coloring, c: Iterable[int]) -> int:
    """P_C via the half double-sum over ordered member pairs; kept as a cross-check for ``p_c``."""
    check_compatible(g, sigma, gamma)
    members = sorted(set(c))
    total = 0
    for v in members:
        for j in members:
            if g.adjacency[v] >> j & 1 and gamma[j] != gamma[v] and sigma[j] == sigma[v]:
                total += 1
    if total % 2:
        raise ArithmeticError("ordered pair count must be even on an undirected graph")
    return total // 2


def cross_disagreement(g: Graph, sigma: Coloring, outer: Iterable[int], inner: Iterable[int]) -> int:
    """
    sum over v in outer, u in inner with sigma_u != sigma_v of a_{v,u}.

    Evaluated in the given summation order; swapping outer and inner gives the
    same value on disjoint sets because the adjacency relation is symmetric.
    """
    check_compatible(g, sigma)
    inner = list(inner)
    total = 0
    for v in outer:
        row = g.adjacency[v]
        for u in inner:
            if row >> u & 1 and sigma[u] != sigma[v]:
                total += 1
    return total


def _members(sigma: Coloring, c: Iterable[int]) -> List[int]:
    members = list(c)
    for v in members:
        if not 0 <= v < len(sigma):
            raise ValueError(f"Vertex {v} out of range 0..{len(sigma) - 1}")
    return members


def coalition_colors(sigma: Coloring, c: Iterable[int]) -> Set[int]:
    """
    K_C(sigma): colours used by the members of c.

    Raises:
        ValueError: If a member is out of range
    """
    return {sigma[v] for v in _members(sigma, c)}


def color_class(sigma: Coloring, c: Iterable[int], a: int) -> Set[int]:
    """
    C_a(sigma): members of c holding colour a.

    Raises:
        ValueError: If a member is out of range
    """
    return {v for v in _members(sigma, c) if sigma[v] == a}


def deviating_set(sigma: Coloring, gamma: Coloring) -> Set[int]:
    """Vertices whose colour differs between sigma and gamma."""
    if len(sigma) != len(gamma):
        raise ValueError(f"Colourings of different lengths {len(sigma)} and {len(gamma)}")
    return {v for v, (a, b) in enumerate(zip(sigma.colors, gamma.colors)) if a != b}


def replace(sigma: Coloring, assignments: Mapping[int, int]) -> Coloring:
    """
    Replace the colours of some vertices.

    Raises:
        ValueError: If a colour is outside 1..k or a vertex is out of range
    """
    return sigma.replace(assignments)


def payoff_gains(g: Graph, sigma: Coloring, gamma: Coloring, c: Iterable[int]) -> List[int]:
    """mu_v(gamma) - mu_v(sigma) for each v in sorted(c)."""
    before = payoffs(g, sigma)
    after = payoffs(g, gamma)
    return [after[v] - before[v] for v in sorted(set(c))]


def cut_identity_terms(g: Graph, sigma: Coloring, gamma: Coloring) -> Tuple[int, int, int, int]:
    """
    Terms of the exact cut identity for the deviation sigma -> gamma.

    Returns:
        ``(delta_s, gain_sum, p_forward, p_backward)`` with
        ``delta_s == gain_sum - p_forward + p_backward`` for every pair
    """
    c = deviating_set(sigma, gamma)
    delta_s = cut_difference(g, sigma, gamma)
    gain_sum = sum(payoff_gains(g, sigma, gamma, c))
    return delta_s, gain_sum, p_c(g, sigma, gamma, c), p_c(g, gamma, sigma, c)


def coloring_from_names(names: Sequence[str], palette: Mapping[str, int], k: Optional[int] = None) -> Coloring:
    """Build a colouring from colour names such as ``("red", "blue")``."""
    colors = tuple(palette[name] for name in names)
    return Coloring(colors, k if k is not None else max(palette.values()))


def payoffs_csv(g: Graph, sigma: Coloring) -> str:
    """Per-vertex CSV report: vertex, name, colour, degree, payoff."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["vertex", "name", "color", "degree", "payoff"])
    for v, value in enumerate(payoffs(g, sigma)):
        writer.writerow([v, g.name_of(v), sigma[v], g.degree(v), value])
    return buffer.getvalue()


def canonical_sequences(length: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Colour sequences over 1..k that open colours in first-use order, lexicographically."""

    def extend(prefix: Tuple[int, ...], used: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == length:
            yield prefix
            return
        for a in range(1, min(used + 1, k) + 1):
            yield from extend(prefix + (a,), max(used, a))

    yield from extend((), 0)


def canonical_colorings(n: int, k: int) -> Iterator[Coloring]:
    """One colouring per colour-permutation class, in lexicographic order."""
    for colors in canonical_sequences(n, k):
        yield Coloring(colors, k)
