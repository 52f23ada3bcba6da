"""Optimal-split QUBOs: construction, energy evaluation, Ising conversion.

The split QUBO of a coalition S encodes the cut weight of the bipartition
selected by a binary assignment x: variable i on one side when x_i = 1, the
other when x_i = 0. The canonical symmetric form is

    energy(x) = sum_{i<j in S} w_ij (x_i + x_j - 2 x_i x_j)

which is 0 at the two trivial assignments and equals the cut weight
everywhere else. Graphs have no self-loops, so there is no linear term beyond
the row sums produced by expanding the polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .game import Coalition, Graph, _member_array, coalition_size


@dataclass(frozen=True, eq=False)
class QuboProblem:
    """Upper-triangular QUBO: diagonal entries are the linear terms.

    ``index_map[k]`` is the agent behind variable k (ascending agent order),
    so assignments decode back to coalitions of the original graph.
    """

    size: int
    coeffs: np.ndarray
    index_map: tuple[int, ...]

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.shape != (self.size, self.size):
            raise ValueError(f"coeffs must be {self.size}x{self.size}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if np.any(np.tril(c, k=-1) != 0.0):
            raise ValueError("coeffs must be upper-triangular")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if len(self.index_map) != self.size:
            raise ValueError("index_map length must equal size")


@dataclass(frozen=True, eq=False)
class IsingProblem:
    """Spin form: energy(z) = offset + h.z + sum_{i<j} j_ij z_i z_j."""

    h: np.ndarray
    j: np.ndarray
    offset: float


def build_split_qubo(g: Graph, s: Coalition) -> QuboProblem:
    """QUBO whose energy at any assignment is the induced cut weight of S."""
    if coalition_size(s) < 2:
        raise ValueError("split QUBO needs a coalition of at least two agents")
    if s >> g.n:
        raise ValueError(f"coalition has member index >= n={g.n}: out of range")
    idx = _member_array(s)
    sub = g.weights[np.ix_(idx, idx)]
    coeffs = np.triu(-2.0 * sub, k=1)
    np.fill_diagonal(coeffs, sub.sum(axis=1))
    return QuboProblem(len(idx), coeffs, tuple(int(i) for i in idx))


def _as_assignment(x, size: int) -> np.ndarray:
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (size,):
        raise DimensionError(f"assignment has length {xv.size}, problem size is {size}")
    return xv


def qubo_energy(q: QuboProblem, x) -> float:
    """sum_{i<=j} coeffs[i,j] x_i x_j, with x_i^2 = x_i on the diagonal."""
    xv = _as_assignment(x, q.size)
    return float(xv @ q.coeffs @ xv)


def qubo_energy_batch(q: QuboProblem, x_rows: np.ndarray) -> np.ndarray:
    """Energies of many assignments at once (rows of ``x_rows``)."""
    x_rows = np.asarray(x_rows, dtype=np.float64)
    return np.einsum("ri,ij,rj->r", x_rows, q.coeffs, x_rows, optimize=True)


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    """Exact change of variables x_i = (1 - z_i)/2, spins z in {-1, +1}."""
    d = np.diag(q.coeffs).copy()
    quad = np.triu(q.coeffs, k=1)
    pair_sums = quad.sum(axis=0) + quad.sum(axis=1)  # sum of couplings touching i
    h = -d / 2.0 - pair_sums / 4.0
    j = quad / 4.0
    offset = float(d.sum() / 2.0 + quad.sum() / 4.0)
    h.setflags(write=False)
    j.setflags(write=False)
    return IsingProblem(h, j, offset)


def ising_energy(p: IsingProblem, z) -> float:
    zv = np.asarray(z, dtype=np.float64)
    if zv.shape != p.h.shape:
        raise DimensionError(f"spin vector has length {zv.size}, expected {p.h.size}")
    return float(p.offset + p.h @ zv + zv @ p.j @ zv)


def decode_split(x, q: QuboProblem) -> tuple[Coalition, Coalition]:
    """Map an assignment back to the (C, C-bar) bipartition of the coalition.

    Variables with x_i = 1 form C. A one-sided assignment means no split was
    found; that is signalled as ``(full_coalition, 0)``.
    """
    xv = _as_assignment(x, q.size)
    c = 0
    c_bar = 0
    for k, agent in enumerate(q.index_map):
        if xv[k]:
            c |= 1 << agent
        else:
            c_bar |= 1 << agent
    if c == 0 or c_bar == 0:
        return (c | c_bar, 0)
    return (c, c_bar)
