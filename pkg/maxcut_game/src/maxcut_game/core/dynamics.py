"""
Best-response and coalition-improvement dynamics with recorded traces.

Every visited state is hashed with ``state_digest``. An exact repeat ends the
run as a cycle; a repeat of the colour-relabeled digest only sets
``Trace.relabeled_cycle``.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple, Union

import numpy as np

from .equilibrium import PruningLevel, find_strong_deviation
from .game import Coloring, check_compatible, color_degree, cut_value
from .graph import Graph

logger = logging.getLogger(__name__)


class Terminal(str, Enum):
    CONVERGED = "converged-NE"
    CYCLE = "cycle-detected"
    BUDGET = "step-budget-exhausted"


class Schedule(str, Enum):
    ROUND_ROBIN = "round-robin"
    SCAN_ORDER = "scan-order"
    RANDOM = "random"


@dataclass(frozen=True)
class Step:
    """One move: the actors, their colours before and after, and the cut change."""

    actors: Tuple[int, ...]
    old_colors: Tuple[int, ...]
    new_colors: Tuple[int, ...]
    delta_s: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "actors": list(self.actors),
            "old_colors": list(self.old_colors),
            "new_colors": list(self.new_colors),
            "delta_s": self.delta_s,
        }


@dataclass
class Trace:
    """
    Record of a dynamics run.

    Attributes:
        initial: Starting colouring
        final: Colouring after the last step
        steps: Moves in order
        terminal: Why the run stopped
        visited: Exact state digest -> index of the state (0 is the start)
        cycle_start: State index the repeated state was first seen at, if any
        relabeled_cycle: True when a state repeated up to colour permutation
    """

    initial: Coloring
    final: Coloring
    steps: List[Step] = field(default_factory=list)
    terminal: Terminal = Terminal.CONVERGED
    visited: Dict[str, int] = field(default_factory=dict)
    cycle_start: Optional[int] = None
    relabeled_cycle: bool = False

    @property
    def visited_hashes(self) -> Set[str]:
        return set(self.visited)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.initial.k,
            "initial": self.initial.to_list(),
            "final": self.final.to_list(),
            "terminal": self.terminal.value,
            "cycle_start": self.cycle_start,
            "relabeled_cycle": self.relabeled_cycle,
            "steps": [step.to_dict() for step in self.steps],
        }


def state_digest(sigma: Coloring, canonical: bool = False) -> str:
    """
    SHA-256 hex digest of ``"k=<k>;" + ",".join(colors)``.

    Args:
        sigma: The state
        canonical: Hash the first-appearance relabeling instead of sigma itself
    """
    state = sigma.canonical() if canonical else sigma
    payload = f"k={state.k};" + ",".join(str(c) for c in state.colors)
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


class _Recorder:
    """Applies moves to a working colouring and keeps the trace bookkeeping."""

    def __init__(self, g: Graph, sigma0: Coloring):
        self.g = g
        self.sigma = sigma0
        self.trace = Trace(initial=sigma0, final=sigma0)
        self.trace.visited[state_digest(sigma0)] = 0
        self._relabeled = {state_digest(sigma0, canonical=True)}

    def apply(self, assignments: Dict[int, int]) -> bool:
        """Apply a move; returns False when the new state was already visited."""
        actors = tuple(sorted(assignments))
        before = cut_value(self.g, self.sigma)
        old = tuple(self.sigma[v] for v in actors)
        self.sigma = self.sigma.replace(assignments)
        new = tuple(self.sigma[v] for v in actors)
        self.trace.steps.append(Step(actors, old, new, cut_value(self.g, self.sigma) - before))
        self.trace.final = self.sigma
        digest = state_digest(self.sigma)
        relabeled = state_digest(self.sigma, canonical=True)
        if relabeled in self._relabeled:
            self.trace.relabeled_cycle = True
        self._relabeled.add(relabeled)
        if digest in self.trace.visited:
            self.trace.cycle_start = self.trace.visited[digest]
            self.trace.terminal = Terminal.CYCLE
            return False
        self.trace.visited[digest] = len(self.trace.steps)
        return True


def smallest_improving_color(g: Graph, sigma: Coloring, v: int) -> Optional[int]:
    """
    Smallest colour that strictly raises v's payoff, or None when v is content.

    Raises:
        ValueError: If v is out of range or sizes mismatch
    """
    check_compatible(g, sigma)
    g._check_vertex(v)
    own = color_degree(g, sigma, v, sigma[v])
    for a in range(1, sigma.k + 1):
        if a != sigma[v] and color_degree(g, sigma, v, a) < own:
            return a
    return None


def _check_budget(max_steps: Optional[int]) -> None:
    if max_steps is not None and max_steps < 0:
        raise ValueError(f"max_steps must be non-negative, got {max_steps}")


def run_best_response(
    g: Graph,
    sigma0: Coloring,
    schedule: Union[Schedule, str] = Schedule.ROUND_ROBIN,
    max_steps: Optional[int] = None,
    seed: Optional[int] = None,
) -> Trace:
    """
    Improving unilateral moves until a NE.

    A mover always takes its smallest improving colour. The round-robin schedule
    scans vertices cyclically, resuming after the last mover. The scan-order
    schedule restarts at vertex 0 after every move, which makes it the q = 1 case
    of ``run_coalition_dynamics``. The random schedule picks uniformly among
    improving vertices with a seeded numpy generator. Each step raises S by its
    gain, so a run makes at most m steps.

    Args:
        g: The graph
        sigma0: Starting colouring
        schedule: ``round-robin``, ``scan-order`` or ``random``
        max_steps: Step budget; None means unlimited
        seed: Seed for the random schedule

    Returns:
        The trace, terminal CONVERGED or BUDGET
    """
    check_compatible(g, sigma0)
    _check_budget(max_steps)
    schedule = Schedule(schedule)
    rng = np.random.Generator(np.random.PCG64(seed if seed is not None else 0))
    recorder = _Recorder(g, sigma0)
    cursor = 0
    while True:
        sigma = recorder.sigma
        if schedule is Schedule.RANDOM:
            improving = [(v, a) for v in range(g.n) for a in [smallest_improving_color(g, sigma, v)] if a is not None]
            move = improving[int(rng.integers(len(improving)))] if improving else None
        else:
            move = None
            for offset in range(g.n):
                v = (cursor + offset) % g.n
                a = smallest_improving_color(g, sigma, v)
                if a is not None:
                    move = (v, a)
                    break
        if move is None:
            recorder.trace.terminal = Terminal.CONVERGED
            break
        if max_steps is not None and len(recorder.trace.steps) >= max_steps:
            recorder.trace.terminal = Terminal.BUDGET
            break
        v, a = move
        if schedule is Schedule.ROUND_ROBIN:
            cursor = (v + 1) % g.n
        if not recorder.apply({v: a}):
            break
    logger.debug("best response: %d steps, %s", len(recorder.trace.steps), recorder.trace.terminal.value)
    return recorder.trace


def run_coalition_dynamics(
    g: Graph,
    sigma0: Coloring,
    q: int,
    max_steps: Optional[int] = None,
    pruning: Union[PruningLevel, int] = PruningLevel.NONE,
) -> Trace:
    """
    Apply the scan-order-first strong deviation of size <= q until none is left.

    With q = 1 the steps are those of ``run_best_response`` under the scan-order schedule.

    Args:
        g: The graph
        sigma0: Starting colouring
        q: Largest coalition size, 1 <= q <= n
        max_steps: Step budget; None means unlimited (the run still ends, on a q-SE or a cycle)
        pruning: Search level for the per-step deviation search

    Returns:
        The trace; CONVERGED means a q-SE was reached

    Raises:
        ValueError: If q is out of range
    """
    check_compatible(g, sigma0)
    _check_budget(max_steps)
    recorder = _Recorder(g, sigma0)
    while True:
        result = find_strong_deviation(g, recorder.sigma, q, pruning)
        if not result.found:
            recorder.trace.terminal = Terminal.CONVERGED
            break
        if max_steps is not None and len(recorder.trace.steps) >= max_steps:
            recorder.trace.terminal = Terminal.BUDGET
            break
        if not recorder.apply({v: result.target[v] for v in result.coalition}):
            logger.info("coalition dynamics cycled back to state %d", recorder.trace.cycle_start)
            break
    return recorder.trace


def replay(trace: Trace, sigma0: Optional[Coloring] = None) -> Coloring:
    """
    Re-apply a trace.

    Args:
        trace: A recorded run
        sigma0: Starting colouring; defaults to ``trace.initial``

    Returns:
        The colouring after the last step

    Raises:
        ValueError: If a step's old colours do not match the replayed state
    """
    sigma = sigma0 if sigma0 is not None else trace.initial
    for index, step in enumerate(trace.steps):
        current = tuple(sigma[v] for v in step.actors)
        if current != step.old_colors:
            raise ValueError(f"Step {index}: expected colours {step.old_colors} on {step.actors}, found {current}")
        sigma = sigma.replace(dict(zip(step.actors, step.new_colors)))
    return sigma


def replay_states(trace: Trace) -> List[Coloring]:
    """Every state of the trace, the start included."""
    states = [trace.initial]
    for step in trace.steps:
        states.append(states[-1].replace(dict(zip(step.actors, step.new_colors))))
    return states
