"""Induced subgraph games: weighted graphs, coalitions, and welfare arithmetic.

A coalition is a bit mask over agent indices (bit i set means agent i is a
member), so set operations on coalitions are single machine-word instructions.
Agent counts are capped at 64 to keep that true.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PartitionError

MAX_AGENTS = 64

# A coalition is a plain int used as a bit mask; 0 is the empty coalition.
Coalition = int


@dataclass(frozen=True, eq=False)
class Graph:
    """Symmetric weighted complete graph over ``n`` agents.

    ``weights[i, j]`` is the pairwise synergy of agents i and j; the diagonal
    is zero and the matrix is exactly symmetric and finite. Instances are
    immutable after construction (the weight matrix is frozen), so they are
    safe to share across worker threads.
    """

    n: int
    weights: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_AGENTS:
            raise ValueError(f"agent count must be in 1..{MAX_AGENTS}, got {self.n}")
        w = np.array(self.weights, dtype=np.float64)
        if w.shape != (self.n, self.n):
            raise ValueError(f"weights must be {self.n}x{self.n}, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite (no NaN/Inf)")
        if np.any(w != w.T):
            raise ValueError("weights must be exactly symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("diagonal weights must be zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_edges(cls, n: int, edges: dict[tuple[int, int], float]) -> "Graph":
        """Build a graph from an ``{(i, j): weight}`` mapping (i != j)."""
        w = np.zeros((n, n))
        for (i, j), val in edges.items():
            w[i, j] = val
            w[j, i] = val
        return cls(n, w)


def grand_coalition(n: int) -> Coalition:
    return (1 << n) - 1


def coalition_from_members(members) -> Coalition:
    mask = 0
    for i in members:
        if i < 0:
            raise ValueError(f"agent index must be non-negative, got {i}")
        mask |= 1 << i
    return mask


def coalition_members(c: Coalition) -> tuple[int, ...]:
    out = []
    while c:
        low = c & -c
        out.append(low.bit_length() - 1)
        c ^= low
    return tuple(out)


def coalition_size(c: Coalition) -> int:
    return c.bit_count()


def _check_coalition(g: Graph, c: Coalition, what: str = "coalition") -> None:
    if c == 0:
        raise ValueError(f"empty {what}: at least one member required")
    if c >> g.n:
        raise ValueError(
            f"{what} has member index >= n={g.n}: out of range"
        )


def _member_array(c: Coalition) -> np.ndarray:
    return np.fromiter(coalition_members(c), dtype=np.intp)


def coalition_value(g: Graph, c: Coalition) -> float:
    """Sum of edge weights over unordered member pairs; singletons are 0."""
    _check_coalition(g, c)
    idx = _member_array(c)
    if idx.size < 2:
        return 0.0
    # symmetric submatrix counts each pair twice
    return float(g.weights[np.ix_(idx, idx)].sum() / 2.0)


def cut_value(g: Graph, c: Coalition, c_bar: Coalition) -> float:
    """Total weight of edges crossing between the two disjoint sides."""
    _check_coalition(g, c, "cut side")
    _check_coalition(g, c_bar, "cut side")
    if c & c_bar:
        dup = coalition_members(c & c_bar)[0]
        raise ValueError(f"cut sides overlap at agent {dup}")
    a = _member_array(c)
    b = _member_array(c_bar)
    return float(g.weights[np.ix_(a, b)].sum())


@dataclass(frozen=True)
class CoalitionStructure:
    """An ordered list of disjoint coalitions covering all agents.

    ``welfare`` caches the sum of coalition values. The constructor does not
    validate; use :func:`structure_from_masks` to build a checked structure,
    or :func:`validate_structure` to inspect an arbitrary one.
    """

    coalitions: tuple[Coalition, ...]
    welfare: float

    def as_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(coalition_members(c) for c in self.coalitions)


def _check_partition(g: Graph, masks) -> None:
    seen = 0
    for c in masks:
        if c == 0:
            raise PartitionError("structure contains an empty coalition")
        if c >> g.n:
            bad = coalition_members(c >> g.n << g.n)[0]
            raise PartitionError(f"agent {bad} is out of range for n={g.n}")
        dup = seen & c
        if dup:
            agent = coalition_members(dup)[0]
            raise PartitionError(f"agent {agent} appears in more than one coalition")
        seen |= c
    missing = grand_coalition(g.n) ^ seen
    if missing:
        agent = coalition_members(missing)[0]
        raise PartitionError(f"agent {agent} is not covered by any coalition")


def structure_value(g: Graph, cs: CoalitionStructure) -> float:
    """Recompute total welfare of a structure, validating the partition."""
    _check_partition(g, cs.coalitions)
    return sum(coalition_value(g, c) for c in cs.coalitions)


def structure_from_masks(g: Graph, masks) -> CoalitionStructure:
    """Build a validated structure with its welfare computed from ``g``."""
    masks = tuple(masks)
    _check_partition(g, masks)
    welfare = sum(coalition_value(g, c) for c in masks)
    return CoalitionStructure(masks, welfare)


@dataclass(frozen=True)
class StructureReport:
    valid: bool
    problems: tuple[str, ...]
    infeasible: tuple[Coalition, ...]


def _induced_connected(g: Graph, c: Coalition) -> bool:
    # BFS over nonzero-weight edges restricted to c, using adjacency masks
    members = coalition_members(c)
    if len(members) == 1:
        return True
    adj = {}
    for i in members:
        mask = 0
        for j in np.flatnonzero(g.weights[i]):
            mask |= 1 << int(j)
        adj[i] = mask & c
    comp = c & -c
    while True:
        grown = comp
        for i in coalition_members(comp):
            grown |= adj[i]
        if grown == comp:
            return comp == c
        comp = grown


def validate_structure(
    g: Graph, cs: CoalitionStructure, check_connectivity: bool = False
) -> StructureReport:
    """Report partition violations without raising.

    With ``check_connectivity``, coalitions whose induced subgraph (edges of
    nonzero weight) is disconnected are reported as infeasible. Benchmark
    instances are complete graphs, so the check is opt-in.
    """
    problems = []
    seen = 0
    for c in cs.coalitions:
        if c == 0:
            problems.append("structure contains an empty coalition")
            continue
        if c >> g.n:
            bad = coalition_members(c >> g.n << g.n)[0]
            problems.append(f"agent {bad} is out of range for n={g.n}")
            continue
        dup = seen & c
        if dup:
            agent = coalition_members(dup)[0]
            problems.append(f"agent {agent} appears in more than one coalition")
        seen |= c
    missing = grand_coalition(g.n) ^ (seen & grand_coalition(g.n))
    for agent in coalition_members(missing):
        problems.append(f"agent {agent} is not covered by any coalition")

    infeasible = []
    if check_connectivity:
        for c in cs.coalitions:
            if c and not c >> g.n and not _induced_connected(g, c):
                infeasible.append(c)
                problems.append(
                    f"coalition {{{', '.join(map(str, coalition_members(c)))}}}"
                    " induces a disconnected subgraph"
                )
    return StructureReport(not problems, tuple(problems), tuple(infeasible))
