"""Reference solvers: brute-force enumeration, subset DP, and C-Link.

Brute force walks every set partition and is the ground-truth oracle for
everything else. The subset DP reaches the same optimum in O(3^n) time and
O(2^n) memory, standing in for exact dynamic-programming solvers at benchmark
sizes. C-Link is the greedy agglomerative baseline: repeatedly merge the pair
of coalitions whose connecting weight is largest, while that gain is positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .game import (
    CoalitionStructure,
    Graph,
    coalition_members,
    structure_from_masks,
)

BRUTE_FORCE_MAX_AGENTS = 10  # Bell(10) = 115975 partitions
DP_MAX_AGENTS = 22  # 2^n welfare table


@dataclass(frozen=True)
class ExactResult:
    structure: CoalitionStructure
    welfare: float
    nodes_explored: int


def coalition_values_table(g: Graph) -> np.ndarray:
    """Value of every subset mask, built by doubling over agents.

    Extending masks over agents {0..k-1} with agent k adds the cross weights
    from k into the existing mask, so the table grows by concatenation.
    """
    values = np.zeros(1)
    for k in range(g.n):
        cross = np.zeros(1)
        for j in range(k):
            cross = np.concatenate([cross, cross + g.weights[k, j]])
        values = np.concatenate([values, values + cross])
    return values


def solve_brute_force(g: Graph) -> ExactResult:
    """Maximum-welfare partition by enumerating all set partitions.

    Enumeration follows restricted-growth order: each agent joins an existing
    block or opens a new one, so blocks are created in order of their minimum
    members. Ties go to the lexicographically smallest canonical form
    (blocks sorted by minimum member, members ascending).
    """
    if g.n > BRUTE_FORCE_MAX_AGENTS:
        raise CapacityError(
            f"brute force enumerates Bell({g.n}) partitions; cap is "
            f"{BRUTE_FORCE_MAX_AGENTS} agents — use solve_dp"
        )
    values = coalition_values_table(g).tolist()
    n = g.n
    blocks: list[int] = []
    best = {"welfare": -math.inf, "blocks": None, "count": 0}

    def canonical(masks):
        return tuple(coalition_members(b) for b in masks)

    def recurse(agent: int, welfare: float):
        if agent == n:
            best["count"] += 1
            if welfare > best["welfare"]:
                best["welfare"] = welfare
                best["blocks"] = tuple(blocks)
            elif welfare == best["welfare"] and canonical(blocks) < canonical(
                best["blocks"]
            ):
                best["blocks"] = tuple(blocks)
            return
        bit = 1 << agent
        for idx in range(len(blocks)):
            old = blocks[idx]
            grown = old | bit
            blocks[idx] = grown
            recurse(agent + 1, welfare + values[grown] - values[old])
            blocks[idx] = old
        blocks.append(bit)
        recurse(agent + 1, welfare)
        blocks.pop()

    recurse(0, 0.0)
    structure = structure_from_masks(g, best["blocks"])
    return ExactResult(structure, structure.welfare, best["count"])


def solve_dp(g: Graph) -> ExactResult:
    """Optimal partition welfare by dynamic programming over subsets.

    For each subset S, the block containing S's lowest member is chosen
    directly: opt[S] = max over blocks B with lowest(S) in B, B subset of S,
    of value[B] + opt[S \\ B]. Each unordered split is considered once, and
    reconstruction follows the stored block choices.
    """
    if g.n > DP_MAX_AGENTS:
        raise CapacityError(
            f"subset DP needs a 2^{g.n} table; cap is {DP_MAX_AGENTS} agents"
        )
    n = g.n
    values = coalition_values_table(g).tolist()
    size = 1 << n
    opt = [0.0] * size
    choice = [0] * size  # stores t where the chosen block is lowbit(S) | t

    for s in range(1, size):
        low = s & (-s)
        rest = s ^ low
        best = values[s]  # t = rest: keep S whole
        pick = rest
        t = (rest - 1) & rest
        while True:
            cand = values[low | t] + opt[rest ^ t]
            if cand > best:
                best = cand
                pick = t
            if t == 0:
                break
            t = (t - 1) & rest
        opt[s] = best
        choice[s] = pick

    blocks = []
    s = size - 1
    while s:
        low = s & (-s)
        rest = s ^ low
        t = choice[s]
        blocks.append(low | t)
        s = rest ^ t
    structure = structure_from_masks(g, blocks)
    return ExactResult(structure, structure.welfare, size - 1)


def solve_clink(g: Graph) -> CoalitionStructure:
    """Greedy agglomerative merging by maximum connecting weight.

    Starts from singletons; merges the pair with the largest gain
    gain(A, B) = sum of weights between A and B, while some gain is positive.
    Gains update additively on merge, so the whole run is O(n^3). Ties pick
    the pair with the lexicographically smallest minimum members.
    """
    n = g.n
    masks = [1 << i for i in range(n)]
    gains = g.weights.copy()
    active = [True] * n

    # merging j into i (i < j) keeps slot i's minimum member equal to i,
    # so slot order is tie order
    while True:
        best_gain = 0.0
        best_pair = None
        for i in range(n):
            if not active[i]:
                continue
            for j in range(i + 1, n):
                if not active[j]:
                    continue
                if gains[i, j] > best_gain:
                    best_gain = gains[i, j]
                    best_pair = (i, j)
        if best_pair is None:
            break
        i, j = best_pair
        masks[i] |= masks[j]
        active[j] = False
        gains[i, :] += gains[j, :]
        gains[:, i] += gains[:, j]

    return structure_from_masks(g, [masks[i] for i in range(n) if active[i]])
