"""Independent reference implementations used to check the library.

Everything here works on plain nested lists / sets of agent indices and
enumerates by brute force, deliberately sharing no code with the package.
"""
import itertools

import numpy as np

from gcsq import Graph


def pairs_value(weights, members):
    """Coalition value by direct pair enumeration."""
    total = 0.0
    for i, j in itertools.combinations(sorted(members), 2):
        total += weights[i][j]
    return total


def cross_value(weights, side_a, side_b):
    """Cut weight by direct double loop."""
    return sum(weights[i][j] for i in side_a for j in side_b)


def all_bipartitions(members):
    """Each unordered bipartition once (anchored at the smallest member).

    The second side may be empty: that is the trivial no-cut bipartition.
    """
    members = sorted(members)
    rest = members[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            side_a = {members[0], *combo}
            side_b = [m for m in members if m not in side_a]
            yield sorted(side_a), side_b


def min_cut_by_enumeration(weights, members):
    """Minimum cut over all bipartitions, counting the trivial one as 0."""
    best = 0.0
    for side_a, side_b in all_bipartitions(members):
        if side_b:
            best = min(best, cross_value(weights, side_a, side_b))
    return best


def all_partitions(items):
    """Every set partition, as tuples of sorted member tuples."""
    items = sorted(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in all_partitions(rest):
        for k in range(len(sub)):
            yield sub[:k] + (tuple(sorted(sub[k] + (first,))),) + sub[k + 1 :]
        yield ((first,),) + sub


def best_partition_welfare(weights, n):
    """Optimal welfare by enumerating every partition."""
    return max(
        sum(pairs_value(weights, block) for block in partition)
        for partition in all_partitions(range(n))
    )


def random_graph(seed, n, scale=5.0, kind="normal"):
    """Seeded symmetric zero-diagonal graph for property tests."""
    rng = np.random.default_rng(seed)
    if kind == "normal":
        raw = rng.normal(0.0, scale, size=(n, n))
    else:
        raw = rng.laplace(0.0, scale, size=(n, n))
    w = np.triu(raw, k=1)
    w = w + w.T
    return Graph(n, w)
