"""QUBO minimization backends sharing one contract.

Every backend returns a :class:`SolveResult` whose ``best_energy`` is the
energy of ``best_assignment`` under the problem it was given. Ties between
equal-energy assignments are broken by the lowest assignment value read as an
unsigned integer with variable 0 as the least significant bit, which makes
exact results unique and every backend testable against the exhaustive one.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .qubo import QuboProblem, qubo_energy

EXHAUSTIVE_SIZE_CAP = 24
_CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SolveResult:
    """Best assignment found by a backend plus the samples behind it.

    ``samples`` is a list of (assignment, energy, occurrence count) sorted
    best-first; ``wall_time_us`` measures the solve call only, in
    microseconds.
    """

    best_assignment: tuple[int, ...]
    best_energy: float
    samples: tuple[tuple[tuple[int, ...], float, int], ...]
    wall_time_us: float
    backend_id: str


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric-cooling schedule for the simulated-annealing backend.

    A sweep attempts one flip per variable, so ``sweeps = 100 * m`` keeps the
    sweeps-per-variable ratio fixed across problem sizes.
    """

    initial_temperature: float
    cooling_factor: float = 0.97
    sweeps: int = 100
    restarts: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be > 0")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must be in (0, 1)")
        if self.sweeps <= 0 or self.restarts <= 0:
            raise ValueError("sweeps and restarts must be positive")

    @classmethod
    def default_for(cls, q: QuboProblem, seed: int = 0) -> "AnnealSchedule":
        max_abs = float(np.abs(q.coeffs).max()) if q.size else 0.0
        return cls(
            initial_temperature=max_abs if max_abs > 0 else 1.0,
            cooling_factor=0.97,
            sweeps=100 * q.size,
            restarts=20,
            seed=seed,
        )


def _assignment_value(x) -> int:
    # unsigned-integer reading, variable 0 = least significant bit
    v = 0
    for k, bit in enumerate(x):
        if bit:
            v |= 1 << k
    return v


def _bits_of(k: int, m: int) -> tuple[int, ...]:
    return tuple((k >> i) & 1 for i in range(m))


def solve_exhaustive(q: QuboProblem, size_cap: int = EXHAUSTIVE_SIZE_CAP) -> SolveResult:
    """Global minimum over all 2^m assignments.

    Iterates assignments in ascending unsigned order with strict-improvement
    updates, so the documented tie rule falls out of the scan order.
    """
    if q.size > size_cap:
        raise CapacityError(
            f"exhaustive search over {q.size} variables exceeds the cap of "
            f"{size_cap}; use the simulated-annealing backend"
        )
    t0 = time.perf_counter()
    m = q.size
    coeffs = q.coeffs
    shifts = np.arange(m, dtype=np.uint32)
    best_e = math.inf
    best_k = 0
    for start in range(0, 1 << m, _CHUNK):
        stop = min(start + _CHUNK, 1 << m)
        ks = np.arange(start, stop, dtype=np.int64)
        x_rows = ((ks[:, None] >> shifts) & 1).astype(np.float64)
        energies = ((x_rows @ coeffs) * x_rows).sum(axis=1)
        i = int(np.argmin(energies))  # first occurrence = lowest k in chunk
        if energies[i] < best_e:
            best_e = float(energies[i])
            best_k = int(ks[i])
    best_x = _bits_of(best_k, m)
    best_e = qubo_energy(q, best_x)  # exact scalar recomputation
    wall_us = (time.perf_counter() - t0) * 1e6
    return SolveResult(
        best_assignment=best_x,
        best_energy=best_e,
        samples=((best_x, best_e, 1),),
        wall_time_us=wall_us,
        backend_id="exhaustive",
    )


def _mix_seed(seed: int, r: int) -> int:
    # splitmix64 finalizer applied to seed XOR restart index
    z = (seed ^ r) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _anneal_restart(q: QuboProblem, sched: AnnealSchedule, restart: int):
    """One Metropolis walk; returns (assignment, exact energy, unsigned value).

    The restart's random stream is fully determined by the derived seed, and
    is consumed in a fixed order (m draws for the initial state, then one per
    flip attempt), so restarts can run in any order or in parallel without
    changing the result.
    """
    m = q.size
    rng = np.random.Generator(np.random.PCG64(_mix_seed(sched.seed, restart)))
    uniforms = rng.random(m + sched.sweeps * m).tolist()

    x = [1 if uniforms[i] < 0.5 else 0 for i in range(m)]
    diag = np.diag(q.coeffs)
    sym = np.triu(q.coeffs, k=1)
    sym = sym + sym.T  # sym[k][k] = 0, so f[k] stays valid through flips of k
    fields = (diag + sym @ np.asarray(x, dtype=np.float64)).tolist()
    rows = sym.tolist()

    cur = qubo_energy(q, x)
    val = _assignment_value(x)
    best_x = list(x)
    best_e = cur
    best_val = val

    exp = math.exp
    u_idx = m
    temp = sched.initial_temperature
    for _ in range(sched.sweeps):
        for k in range(m):
            s = 1 - 2 * x[k]
            delta = s * fields[k]
            u = uniforms[u_idx]
            u_idx += 1
            if delta <= 0.0 or u < exp(-delta / temp):
                x[k] = 1 - x[k]
                cur += delta
                val += s * (1 << k)
                row = rows[k]
                for j in range(m):
                    fields[j] += s * row[j]
                if cur < best_e or (cur == best_e and val < best_val):
                    best_e = cur
                    best_val = val
                    best_x = list(x)
        temp *= sched.cooling_factor
    return tuple(best_x), qubo_energy(q, best_x), best_val


def solve_simulated_annealing(
    q: QuboProblem, sched: AnnealSchedule | None = None
) -> SolveResult:
    """Multi-restart single-flip Metropolis annealing with geometric cooling.

    Energies move incrementally through cached per-variable fields (O(m) per
    accepted flip); the reported best energy is recomputed exactly at the
    end, so accumulated float drift never leaks into the result.
    """
    t0 = time.perf_counter()
    if sched is None:
        sched = AnnealSchedule.default_for(q)
    finds = [_anneal_restart(q, sched, r) for r in range(sched.restarts)]
    finds.sort(key=lambda t: (t[1], t[2]))

    samples = []
    for x, e, _ in finds:
        if samples and samples[-1][0] == x:
            samples[-1] = (x, e, samples[-1][2] + 1)
        else:
            samples.append((x, e, 1))
    best_x, best_e, _ = finds[0]
    wall_us = (time.perf_counter() - t0) * 1e6
    return SolveResult(
        best_assignment=best_x,
        best_energy=best_e,
        samples=tuple(samples),
        wall_time_us=wall_us,
        backend_id="sa",
    )


@dataclass(frozen=True)
class TimingRecord:
    size: int
    wall_time_us: float


def record_runtime(result: SolveResult) -> TimingRecord:
    """Extract the (problem size, wall time) pair used by the scaling fit."""
    return TimingRecord(len(result.best_assignment), result.wall_time_us)


def record_runtimes(results) -> list[TimingRecord]:
    return [record_runtime(r) for r in results]


def get_backend(name: str, **options):
    """Resolve a backend id to a ``problem -> SolveResult`` callable.

    Options: ``seed`` (sa), ``schedule`` (sa), ``endpoint`` (remote),
    ``size_cap`` (exhaustive).
    """
    if name == "exhaustive":
        cap = options.get("size_cap", EXHAUSTIVE_SIZE_CAP)
        return lambda q: solve_exhaustive(q, size_cap=cap)
    if name == "sa":
        schedule = options.get("schedule")
        seed = options.get("seed", 0)
        if schedule is not None:
            return lambda q: solve_simulated_annealing(q, schedule)
        return lambda q: solve_simulated_annealing(
            q, AnnealSchedule.default_for(q, seed=seed)
        )
    if name == "remote":
        from .remote import solve_remote

        endpoint = options["endpoint"]
        return lambda q: solve_remote(q, endpoint)
    raise ValueError(f"unknown backend: {name}; available: exhaustive, sa, remote")
