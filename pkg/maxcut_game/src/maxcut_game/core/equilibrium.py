"""
Nash and q-strong equilibrium checks.

Strong deviations are searched coalition by coalition in a fixed scan order:
coalition size ascending, then lexicographic member tuples, then lexicographic
recolourings. The first certificate of a search is therefore reproducible, and
a parallel search can recover it by taking the minimum ``scan_key``.
"""

import dataclasses
import itertools
import logging
from enum import IntEnum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sortedcontainers import SortedList

from .game import (
    Coloring,
    check_compatible,
    coalition_colors,
    cut_difference,
    cut_value,
    deviating_set,
    p_c,
    payoff_gains,
    payoffs,
)
from .graph import Graph, bits, graph_to_dict, is_connected_mask, is_isolated_component, mask_of

logger = logging.getLogger(__name__)

ScanKey = Tuple[int, Tuple[int, ...], Tuple[int, ...]]


class PruningLevel(IntEnum):
    """
    Search reductions for ``find_strong_deviation``.

    NONE is the oracle. KC keeps member colours inside K_C(sigma). NEIGHBOR also
    requires each member to take the sigma colour of a coalition neighbour.
    CONNECTED also skips coalitions that induce a disconnected subgraph.
    NEIGHBOR and CONNECTED are only sound when sigma is a NE.
    """

    NONE = 0
    KC = 1
    NEIGHBOR = 2
    CONNECTED = 3


class AuditPreconditionError(ValueError):
    """Raised when ``audit_minimal_deviation`` is asked to audit an unsuitable certificate."""

    def __init__(self, precondition: str, message: str):
        super().__init__(f"{precondition}: {message}")
        self.precondition = precondition


def instance_dict(g: Graph, sigma: Coloring, **extra: Any) -> Dict[str, Any]:
    """Structured form of (graph, k, sigma) plus any extra fields."""
    record: Dict[str, Any] = {"graph": graph_to_dict(g), "k": sigma.k, "sigma": sigma.to_list()}
    record.update(extra)
    return record


@dataclasses.dataclass(frozen=True)
class DeviationCertificate:
    """
    Witness that ``coalition`` can move from sigma to ``target`` with every member gaining.

    Attributes:
        graph: The instance graph
        sigma: The starting colouring
        coalition: Sorted members
        target: Full colouring gamma, equal to sigma off the coalition
        gains: mu_v(gamma) - mu_v(sigma) per member, in coalition order
        delta_s: S(gamma) - S(sigma)
        minimal: True/False when the search could decide it, None otherwise
        pruning: Level the search ran at
        sigma_is_nash: Whether sigma is a NE (NEIGHBOR and CONNECTED need it)
    """

    graph: Graph
    sigma: Coloring
    coalition: Tuple[int, ...]
    target: Coloring
    gains: Tuple[int, ...]
    delta_s: int
    minimal: Optional[bool] = None
    pruning: PruningLevel = PruningLevel.NONE
    sigma_is_nash: bool = False

    found = True

    @property
    def scan_key(self) -> ScanKey:
        return (len(self.coalition), self.coalition, tuple(self.target[v] for v in self.coalition))

    def to_dict(self) -> Dict[str, Any]:
        return instance_dict(
            self.graph,
            self.sigma,
            found=True,
            coalition=list(self.coalition),
            gamma=self.target.to_list(),
            gains=list(self.gains),
            delta_s=self.delta_s,
            minimal=self.minimal,
            pruning=int(self.pruning),
            sigma_is_nash=self.sigma_is_nash,
        )


@dataclasses.dataclass(frozen=True)
class AbsenceRecord:
    """Proof-of-absence summary: no coalition of size <= q deviates strongly."""

    q: int
    pruning: PruningLevel
    coalitions_scanned: int
    recolorings_tried: int
    sigma_is_nash: bool

    found = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "found": False,
            "q": self.q,
            "pruning": int(self.pruning),
            "coalitions_scanned": self.coalitions_scanned,
            "recolorings_tried": self.recolorings_tried,
            "sigma_is_nash": self.sigma_is_nash,
        }


SearchResult = Union[DeviationCertificate, AbsenceRecord]


@dataclasses.dataclass(frozen=True)
class Finding:
    """A claim that failed on a concrete instance."""

    claim: str
    detail: str
    instance: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"claim": self.claim, "detail": self.detail, "instance": self.instance}


@dataclasses.dataclass
class AuditReport:
    """
    Structural flags of one minimal strong deviation from a NE.

    Optional flags are None when their hypothesis does not apply.
    """

    kc_preserved: bool
    neighbor_color_ok: bool
    isolated_component_ok: bool
    size_ge_2: bool
    cut_gain_bound_ok: bool
    color_range_applicable: bool = False
    color_range_positive: Optional[bool] = None
    small_coalition_positive: Optional[bool] = None
    violations: List[Finding] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        record = dataclasses.asdict(self)
        record["violations"] = [finding.to_dict() for finding in self.violations]
        return record


def best_response(g: Graph, sigma: Coloring, v: int) -> Tuple[int, int]:
    """
    Best unilateral colour for v.

    Args:
        g: The graph
        sigma: Current colouring
        v: The player

    Returns:
        ``(a, gain)`` where a minimises delta(v, sigma, a) (smallest colour on ties)
        and gain = delta(v, sigma, sigma_v) - delta(v, sigma, a)

    Raises:
        ValueError: If v is out of range or sizes mismatch
    """
    check_compatible(g, sigma)
    g._check_vertex(v)
    row = g.adjacency[v]
    masks = sigma.class_masks
    counts = [(row & masks[a]).bit_count() for a in range(1, sigma.k + 1)]
    best = min(counts)
    return counts.index(best) + 1, counts[sigma[v] - 1] - best


def is_nash(g: Graph, sigma: Coloring) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """
    Check whether sigma is a Nash equilibrium.

    Returns:
        ``(True, None)`` at a NE, otherwise ``(False, (v, a))`` for the first vertex
        with a positive best-response gain and its best-response colour
    """
    check_compatible(g, sigma)
    for v in range(g.n):
        a, gain = best_response(g, sigma, v)
        if gain > 0:
            return False, (v, a)
    return True, None


def _check_q(g: Graph, q: int) -> None:
    if not 1 <= q <= max(g.n, 1):
        raise ValueError(f"q must lie in 1..{max(g.n, 1)}, got {q}")


class DeviationSearch:
    """
    Strong-deviation scanner for one (graph, colouring) instance.

    Recolourings are built member by member. A member is checked as soon as all
    of its coalition neighbours are coloured, so failing branches are cut early.
    At every level two exact filters apply: a member already at maximum payoff
    rules out the coalition, and a colour whose best attainable payoff (outside
    neighbours fixed, coalition neighbours all different) is not above the
    current payoff is never tried. Neither removes a strong deviation.
    """

    def __init__(
        self,
        g: Graph,
        sigma: Coloring,
        pruning: Union[PruningLevel, int] = PruningLevel.NONE,
        sigma_is_nash: Optional[bool] = None,
    ):
        check_compatible(g, sigma)
        self.g = g
        self.sigma = sigma
        self.pruning = PruningLevel(pruning)
        self.mu = payoffs(g, sigma)
        self.deg = [row.bit_count() for row in g.adjacency]
        known = sigma_is_nash is not None
        self.sigma_is_nash = sigma_is_nash if known else is_nash(g, sigma)[0]
        self.coalitions_scanned = 0
        self.recolorings_tried = 0
        self._deviating_masks: List[int] = []
        if self.pruning >= PruningLevel.NEIGHBOR and not self.sigma_is_nash and not known:
            logger.warning("Pruning level %d applied to a colouring that is not a NE", int(self.pruning))

    def coalitions(self, size: int, leading: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Coalitions of the given size in lexicographic order, optionally only those whose smallest member is ``leading``."""
        if leading is None:
            yield from itertools.combinations(range(self.g.n), size)
            return
        for rest in itertools.combinations(range(leading + 1, self.g.n), size - 1):
            yield (leading,) + rest

    def _options(self, members: Sequence[int], cmask: int) -> Optional[List[List[int]]]:
        sigma = self.sigma
        outside = [m & ~cmask for m in sigma.class_masks]
        kc = {sigma[v] for v in members}
        options = []
        for v in members:
            if self.mu[v] == self.deg[v]:
                return None
            row = self.g.adjacency[v]
            allowed = sorted(kc) if self.pruning >= PruningLevel.KC else range(1, sigma.k + 1)
            if self.pruning >= PruningLevel.NEIGHBOR:
                neighbor_colors = {sigma[w] for w in bits(row & cmask)}
                allowed = [a for a in allowed if a in neighbor_colors]
            own = sigma[v]
            choices = [a for a in allowed if a != own and self.deg[v] - (row & outside[a]).bit_count() > self.mu[v]]
            if not choices:
                return None
            options.append(choices)
        return options

    def deviations_of(self, members: Sequence[int]) -> Iterator[DeviationCertificate]:
        """
        Every strong deviation of exactly this coalition, recolourings in lexicographic order.

        Args:
            members: Sorted, distinct vertices

        Returns:
            Iterator of certificates with ``minimal`` left as None
        """
        members = tuple(members)
        g = self.g
        cmask = mask_of(members)
        if self.pruning >= PruningLevel.CONNECTED and not is_connected_mask(g, cmask):
            return
        self.coalitions_scanned += 1
        options = self._options(members, cmask)
        if options is None:
            return
        position = {v: i for i, v in enumerate(members)}
        check_at: List[List[int]] = [[] for _ in members]
        for i, v in enumerate(members):
            last = max([i] + [position[u] for u in bits(g.adjacency[v] & cmask)])
            check_at[last].append(v)
        outside = [m & ~cmask for m in self.sigma.class_masks]
        inside = [0] * (self.sigma.k + 1)
        chosen: Dict[int, int] = {}

        def gains(v: int) -> bool:
            a = chosen[v]
            row = g.adjacency[v]
            return self.deg[v] - (row & (outside[a] | inside[a])).bit_count() > self.mu[v]

        def extend(p: int) -> Iterator[DeviationCertificate]:
            if p == len(members):
                yield self._certificate(members, dict(chosen))
                return
            v = members[p]
            bit = 1 << v
            for a in options[p]:
                self.recolorings_tried += 1
                chosen[v] = a
                inside[a] |= bit
                if all(gains(w) for w in check_at[p]):
                    yield from extend(p + 1)
                inside[a] &= ~bit
            del chosen[v]

        yield from extend(0)

    def _certificate(self, members: Tuple[int, ...], assignments: Dict[int, int]) -> DeviationCertificate:
        target = self.sigma.replace(assignments)
        after = payoffs(self.g, target)
        gains = tuple(after[v] - self.mu[v] for v in members)
        delta_s = cut_value(self.g, target) - cut_value(self.g, self.sigma)
        return DeviationCertificate(
            self.g,
            self.sigma,
            members,
            target,
            gains,
            delta_s,
            pruning=self.pruning,
            sigma_is_nash=self.sigma_is_nash,
        )

    def scan(
        self, q: int, leading: Optional[int] = None, sizes: Optional[Sequence[int]] = None
    ) -> Iterator[DeviationCertificate]:
        """
        Every strong deviation of size <= q in scan order.

        Minimality is decided for an unrestricted scan at PruningLevel.NONE: all
        smaller coalitions have been scanned by then, so a certificate is minimal
        iff no earlier deviating coalition is contained in it.
        """
        _check_q(self.g, q)
        decides_minimal = self.pruning == PruningLevel.NONE and leading is None and sizes is None
        for size in sizes if sizes is not None else range(1, q + 1):
            for members in self.coalitions(size, leading):
                cmask = mask_of(members)
                minimal = None
                if decides_minimal:
                    minimal = not any(m & cmask == m for m in self._deviating_masks)
                deviated = False
                for cert in self.deviations_of(members):
                    deviated = True
                    yield dataclasses.replace(cert, minimal=minimal)
                if deviated:
                    self._deviating_masks.append(cmask)
            logger.debug("size %d scanned: %d coalitions so far", size, self.coalitions_scanned)

    def absence(self, q: int) -> AbsenceRecord:
        return AbsenceRecord(q, self.pruning, self.coalitions_scanned, self.recolorings_tried, self.sigma_is_nash)


def iter_strong_deviations(
    g: Graph, sigma: Coloring, q: int, pruning: Union[PruningLevel, int] = PruningLevel.NONE
) -> Iterator[DeviationCertificate]:
    """
    Lazily yield every strong deviation of size <= q in scan order.

    Raises:
        ValueError: If q is out of range
    """
    _check_q(g, q)
    return DeviationSearch(g, sigma, pruning).scan(q)


def find_strong_deviation(
    g: Graph, sigma: Coloring, q: int, pruning: Union[PruningLevel, int] = PruningLevel.NONE
) -> SearchResult:
    """
    First strong deviation of size <= q in scan order.

    Args:
        g: The graph
        sigma: The colouring to test
        q: Largest coalition size considered, 1 <= q <= n
        pruning: Search reduction level (NONE is the exact oracle)

    Returns:
        A DeviationCertificate, or an AbsenceRecord when none exists

    Raises:
        ValueError: If q is out of range
    """
    _check_q(g, q)
    search = DeviationSearch(g, sigma, pruning)
    cert = next(search.scan(q), None)
    if cert is not None:
        return cert
    return search.absence(q)


def is_q_se(g: Graph, sigma: Coloring, q: int) -> bool:
    """True iff no coalition of size <= q has a strong deviation (exact search)."""
    return not find_strong_deviation(g, sigma, q, PruningLevel.NONE).found


def is_minimal(g: Graph, sigma: Coloring, cert: DeviationCertificate) -> bool:
    """True iff no proper nonempty subset of the coalition can deviate strongly from sigma."""
    search = DeviationSearch(g, sigma, PruningLevel.NONE)
    members = tuple(sorted(cert.coalition))
    for size in range(1, len(members)):
        for subset in itertools.combinations(members, size):
            if next(search.deviations_of(subset), None) is not None:
                return False
    return True


def verify_certificate(g: Graph, sigma: Coloring, cert: DeviationCertificate) -> bool:
    """
    Recompute a certificate from scratch with the game functions.

    Returns:
        True iff the deviating set is exactly the coalition, every recorded gain
        matches and is at least 1, and delta_s matches
    """
    check_compatible(g, sigma, cert.target)
    members = tuple(sorted(cert.coalition))
    if not members or set(members) != deviating_set(sigma, cert.target):
        return False
    gains = tuple(payoff_gains(g, sigma, cert.target, members))
    if gains != tuple(cert.gains) or not all(gain >= 1 for gain in gains):
        return False
    return cut_difference(g, sigma, cert.target) == cert.delta_s


def _neighbor_color_ok(g: Graph, sigma: Coloring, gamma: Coloring, members: Sequence[int]) -> bool:
    cmask = mask_of(members)
    for v in members:
        if not any(sigma[w] == gamma[v] for w in bits(g.adjacency[v] & cmask)):
            return False
    return True


def audit_minimal_deviation(g: Graph, sigma: Coloring, cert: DeviationCertificate) -> AuditReport:
    """
    Evaluate the structural claims about a minimal strong deviation from a NE.

    Args:
        g: The graph
        sigma: A NE colouring
        cert: A strong, minimal deviation from sigma

    Returns:
        AuditReport; each false flag adds a Finding carrying the full instance

    Raises:
        AuditPreconditionError: If the coalition is empty, the target differs from sigma
            off the coalition, sigma is not a NE, or the deviation is not strong or not minimal
    """
    check_compatible(g, sigma, cert.target)
    members = tuple(sorted(cert.coalition))
    if not members:
        raise AuditPreconditionError("nonempty", "coalition is empty")
    if set(members) != deviating_set(sigma, cert.target):
        raise AuditPreconditionError("exact_deviating_set", "target does not differ from sigma exactly on the coalition")
    if not is_nash(g, sigma)[0]:
        raise AuditPreconditionError("nash", "sigma is not a Nash equilibrium")
    if not verify_certificate(g, sigma, cert):
        raise AuditPreconditionError("strong", "certificate does not re-verify as a strong deviation")
    if not (cert.minimal if cert.minimal is not None else is_minimal(g, sigma, cert)):
        raise AuditPreconditionError("minimal", "a proper subset of the coalition deviates strongly")

    gamma = cert.target
    size = len(members)
    kc = coalition_colors(sigma, members)
    kc_gamma = coalition_colors(gamma, members)
    delta_s = cut_difference(g, sigma, gamma)
    pairs = p_c(g, sigma, gamma, members)
    color_range_applicable = len(kc) in (size - 3, size - 2)
    report = AuditReport(
        kc_preserved=kc == kc_gamma,
        neighbor_color_ok=_neighbor_color_ok(g, sigma, gamma, members),
        isolated_component_ok=is_isolated_component(g, members),
        size_ge_2=size >= 2,
        cut_gain_bound_ok=delta_s >= size - pairs,
        color_range_applicable=color_range_applicable,
        color_range_positive=delta_s > 0 if color_range_applicable else None,
        small_coalition_positive=delta_s > 0 if size <= 7 else None,
    )
    instance = instance_dict(g, sigma, coalition=list(members), gamma=gamma.to_list(), delta_s=delta_s, p_c=pairs)
    checks = [
        ("colors_preserved", report.kc_preserved, f"K_C(sigma)={sorted(kc)} but K_C(gamma)={sorted(kc_gamma)}"),
        ("neighbor_color", report.neighbor_color_ok, "a member took a colour no coalition neighbour held"),
        ("isolated_component", report.isolated_component_ok, "G(C) is not an isolated component"),
        ("coalition_size", report.size_ge_2, f"coalition of size {size}"),
        ("cut_gain_bound", report.cut_gain_bound_ok, f"delta_s={delta_s} < |C| - P_C = {size - pairs}"),
        ("color_range_gain", report.color_range_positive is not False, f"delta_s={delta_s} with |K_C|={len(kc)}, |C|={size}"),
        ("small_coalition_gain", report.small_coalition_positive is not False, f"delta_s={delta_s} with |C|={size}"),
    ]
    for claim, ok, detail in checks:
        if not ok:
            report.violations.append(Finding(claim, detail, instance))
            logger.debug("audit finding %s: %s", claim, detail)
    return report


class CertificatePool:
    """
    Collects certificates and answers the scan-order minimum.

    Certificates are kept in a SortedList keyed by ``scan_key``.
    """

    def __init__(self):
        self._items = SortedList(key=lambda cert: cert.scan_key)

    def add(self, cert: DeviationCertificate) -> None:
        """
        Add a certificate.

        Args:
            cert: Certificate found by some search
        """
        self._items.add(cert)

    def best(self) -> Optional[DeviationCertificate]:
        """
        Get the certificate that comes first in scan order.

        Returns:
            The scan-order minimum, or None if the pool is empty
        """
        return self._items[0] if self._items else None

    def size(self) -> int:
        return len(self._items)

    def is_empty(self) -> bool:
        return not self._items

    def clear(self) -> None:
        self._items.clear()
