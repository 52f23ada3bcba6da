"""GCS-Q: queue-driven divisive coalition structure search.

Starting from the grand coalition, each popped coalition is offered its best
bipartition (the minimum cut, found by a QUBO backend). A strictly negative
cut means splitting raises total welfare by exactly the cut's magnitude (edge
partition identity), so such splits are accepted and both halves are pushed;
otherwise the coalition is final. Every intermediate step holds a valid
partition, which makes the algorithm anytime: stop after any step and take
that step's snapshot.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import SolverAborted
from .game import (
    Coalition,
    CoalitionStructure,
    Graph,
    coalition_size,
    grand_coalition,
    structure_from_masks,
)
from .qubo import build_split_qubo, decode_split, qubo_energy
from .solvers import SolveResult, solve_exhaustive

Backend = Callable[..., SolveResult]


@dataclass(frozen=True)
class GcsqConfig:
    """Knobs for a divisive run.

    ``epsilon`` is the acceptance tolerance: a split needs cut < -epsilon.
    ``None`` means 1e-9 times the largest absolute edge weight, scaled so a
    numerically-zero cut never triggers endless refinement. ``max_queue_pops``
    guards against a misbehaving backend; ``None`` means 2n.
    """

    backend: Backend = solve_exhaustive
    epsilon: Optional[float] = None
    max_queue_pops: Optional[int] = None


@dataclass(frozen=True)
class SplitOutcome:
    coalition: Coalition
    accepted: bool
    sides: Optional[tuple[Coalition, Coalition]]
    cut: Optional[float]
    result: Optional[SolveResult]


@dataclass(frozen=True)
class TraceStep:
    popped: Coalition
    result: Optional[SolveResult]
    accepted: bool
    structure: CoalitionStructure

    @property
    def welfare(self) -> float:
        return self.structure.welfare


@dataclass(frozen=True)
class GcsqTrace:
    """Ordered per-pop record of the run; every snapshot is a full partition."""

    steps: tuple[TraceStep, ...]


def default_epsilon(g: Graph) -> float:
    return 1e-9 * float(np.abs(g.weights).max())


def optimal_split(
    g: Graph, s: Coalition, backend: Backend, epsilon: float
) -> SplitOutcome:
    """Best bipartition of ``s`` per the backend, accepted iff cut < -epsilon.

    Singletons short-circuit without a backend call. The backend's reported
    energy is re-validated by local recomputation before the accept test:
    heuristic or remote backends may misreport, and the decision depends on
    the energy's sign.
    """
    if coalition_size(s) == 1:
        return SplitOutcome(s, False, None, None, None)
    problem = build_split_qubo(g, s)
    result = backend(problem)
    cut = qubo_energy(problem, result.best_assignment)
    side_a, side_b = decode_split(result.best_assignment, problem)
    if side_b == 0 or not cut < -epsilon:
        return SplitOutcome(s, False, None, cut, result)
    return SplitOutcome(s, True, (side_a, side_b), cut, result)


def run_gcsq(
    g: Graph, cfg: GcsqConfig | None = None
) -> tuple[CoalitionStructure, GcsqTrace]:
    """Run the divisive loop to completion.

    FIFO queue seeded with the grand coalition; accepted splits push the half
    containing the lowest-indexed agent first. Returns the final structure
    and the full trace. Backend failures raise :class:`SolverAborted` with
    the trace accumulated so far attached.
    """
    if cfg is None:
        cfg = GcsqConfig()
    epsilon = cfg.epsilon if cfg.epsilon is not None else default_epsilon(g)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    pop_cap = cfg.max_queue_pops if cfg.max_queue_pops is not None else 2 * g.n

    queue: deque[Coalition] = deque([grand_coalition(g.n)])
    finalized: list[Coalition] = []
    steps: list[TraceStep] = []
    pops = 0
    while queue:
        s = queue.popleft()
        pops += 1
        if pops > pop_cap:
            raise SolverAborted(
                f"pop cap {pop_cap} exceeded; backend is not making progress",
                trace=GcsqTrace(tuple(steps)),
            )
        try:
            outcome = optimal_split(g, s, cfg.backend, epsilon)
        except Exception as exc:
            raise SolverAborted(
                f"backend failed while splitting a coalition: {exc}",
                trace=GcsqTrace(tuple(steps)),
            ) from exc
        if outcome.accepted:
            side_a, side_b = outcome.sides
            lowest_bit = s & -s
            first, second = (
                (side_a, side_b) if side_a & lowest_bit else (side_b, side_a)
            )
            queue.append(first)
            queue.append(second)
        else:
            finalized.append(s)
        snapshot = structure_from_masks(g, finalized + list(queue))
        steps.append(TraceStep(s, outcome.result, outcome.accepted, snapshot))

    return structure_from_masks(g, finalized), GcsqTrace(tuple(steps))


def anytime_best(trace: GcsqTrace, step: int) -> CoalitionStructure:
    """Structure held after the given step; valid at every index."""
    if not 0 <= step < len(trace.steps):
        raise IndexError(
            f"step {step} out of range for trace of length {len(trace.steps)}"
        )
    return trace.steps[step].structure
