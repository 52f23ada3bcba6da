"""Benchmark harness: run records, error metrics, scaling fits, CSV I/O.

The approximation error of a solver against an exact optimum is the relative
shortfall (optimal - achieved) / |optimal|; when the optimum is numerically
zero the absolute difference is reported instead and flagged in the
``error_kind`` column. That definition is pinned in the header comment of
every CSV this module writes.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .baselines import solve_brute_force, solve_clink, solve_dp
from .divisive import GcsqConfig, run_gcsq
from .errors import DegenerateFitError, IntegrityError
from .game import Graph, grand_coalition
from .instances import DistributionSpec, InstanceFile, generate_instance, derive_seed
from .qubo import build_split_qubo
from .solvers import get_backend

ZERO_OPTIMUM_TOL = 1e-12
BEATEN_TOL = 1e-9

ERROR_DEFINITION = (
    "error = (optimal - welfare) / |optimal| when |optimal| > 1e-12, "
    "else optimal - welfare with error_kind=absolute"
)

SOLVER_IDS = ("gcs-q", "dp", "brute", "clink")


def approximation_error(optimal: float, achieved: float) -> tuple[float, str]:
    """Relative shortfall of ``achieved`` below ``optimal`` (see module doc).

    ``achieved`` beating a value produced by an exact solver is impossible,
    so that case raises :class:`IntegrityError` instead of going negative.
    """
    if achieved > optimal + BEATEN_TOL:
        raise IntegrityError(
            f"achieved welfare {achieved} exceeds exact optimum {optimal}; "
            "this signals a bug in the exact solver or the caller"
        )
    if abs(optimal) > ZERO_OPTIMUM_TOL:
        return (optimal - achieved) / abs(optimal), "relative"
    return optimal - achieved, "absolute"


def linear_fit(points) -> tuple[float, float, float]:
    """Ordinary least squares fit; returns (slope, intercept, R^2)."""
    pts = list(points)
    if len(pts) < 2:
        raise DegenerateFitError("linear fit needs at least 2 points")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if np.unique(x).size < 2:
        raise DegenerateFitError("linear fit needs at least 2 distinct x values")
    x_mean = x.mean()
    y_mean = y.mean()
    slope = float(((x - x_mean) * (y - y_mean)).sum() / ((x - x_mean) ** 2).sum())
    intercept = float(y_mean - slope * x_mean)
    ss_res = float(((y - (slope * x + intercept)) ** 2).sum())
    ss_tot = float(((y - y_mean) ** 2).sum())
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res <= 1e-12 * max(1.0, float((y**2).sum())) else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


@dataclass(frozen=True)
class RunRecord:
    """One (instance, solver) evaluation; one CSV row."""

    instance_id: str
    n: int
    distribution: str
    seed: int
    solver: str
    backend: str
    welfare: float
    optimal: Optional[float]
    error: Optional[float]
    error_kind: Optional[str]
    solver_calls: int
    wall_time_us: float


CSV_COLUMNS = [f.name for f in fields(RunRecord)]


def run_solver(
    g: Graph,
    solver: str,
    backend_name: str = "exhaustive",
    backend=None,
    epsilon: Optional[float] = None,
) -> tuple[float, int, float]:
    """Run one solver; returns (welfare, solver_calls, wall_time_us)."""
    t0 = time.perf_counter()
    if solver == "gcs-q":
        if backend is None:
            backend = get_backend(backend_name)
        cfg = GcsqConfig(backend=backend, epsilon=epsilon)
        structure, trace = run_gcsq(g, cfg)
        welfare = structure.welfare
        calls = sum(1 for step in trace.steps if step.result is not None)
    elif solver == "dp":
        welfare = solve_dp(g).welfare
        calls = 1
    elif solver == "brute":
        welfare = solve_brute_force(g).welfare
        calls = 1
    elif solver == "clink":
        welfare = solve_clink(g).welfare
        calls = 1
    else:
        raise ValueError(
            f"unknown solver: {solver}; available: {', '.join(SOLVER_IDS)}"
        )
    wall_us = (time.perf_counter() - t0) * 1e6
    return welfare, calls, wall_us


def evaluate_instance(
    inst: InstanceFile,
    instance_id: str,
    solvers,
    backend_name: str = "exhaustive",
    backend=None,
    epsilon: Optional[float] = None,
    exact_solver: Optional[str] = None,
) -> list[RunRecord]:
    """Run the given solvers on one instance, scoring against the exact one.

    ``exact_solver`` (dp or brute) supplies the optimum; records of solvers
    run without an exact reference carry no error columns.
    """
    g = inst.to_graph()
    optimal = None
    if exact_solver is not None:
        optimal, _, _ = run_solver(g, exact_solver)
    records = []
    for solver in solvers:
        welfare, calls, wall_us = run_solver(
            g, solver, backend_name=backend_name, backend=backend, epsilon=epsilon
        )
        if solver in ("dp", "brute"):
            ref = welfare  # an exact solver is its own reference
        else:
            ref = optimal
        error, kind = (None, None)
        if ref is not None:
            error, kind = approximation_error(ref, welfare)
        records.append(
            RunRecord(
                instance_id=instance_id,
                n=inst.n,
                distribution=inst.distribution.kind,
                seed=inst.seed,
                solver=solver,
                backend=backend_name if solver == "gcs-q" else "",
                welfare=welfare,
                optimal=ref,
                error=error,
                error_kind=kind,
                solver_calls=calls,
                wall_time_us=wall_us,
            )
        )
    return records


def compare_instances(
    items,
    backend_name: str = "exhaustive",
    backend=None,
    epsilon: Optional[float] = None,
) -> list[RunRecord]:
    """Fig.-2-style comparison: gcs-q + clink scored against the dp optimum.

    ``items`` is an iterable of (instance_id, InstanceFile).
    """
    records = []
    for instance_id, inst in items:
        records.extend(
            evaluate_instance(
                inst,
                instance_id,
                solvers=("dp", "gcs-q", "clink"),
                backend_name=backend_name,
                backend=backend,
                epsilon=epsilon,
                exact_solver="dp",
            )
        )
    return records


def summarize_errors(records) -> dict:
    """Mean/max error per (distribution, n, solver) plus overall per solver."""
    groups: dict = {}
    for r in records:
        if r.error is None:
            continue
        groups.setdefault((r.distribution, r.n, r.solver), []).append(r.error)
    by_group = [
        {
            "distribution": dist,
            "n": n,
            "solver": solver,
            "instances": len(errs),
            "mean_error": float(np.mean(errs)),
            "max_error": float(np.max(errs)),
        }
        for (dist, n, solver), errs in sorted(groups.items())
    ]
    overall: dict = {}
    for r in records:
        if r.error is None:
            continue
        overall.setdefault(r.solver, []).append(r.error)
    by_solver = {
        solver: {
            "instances": len(errs),
            "mean_error": float(np.mean(errs)),
            "max_error": float(np.max(errs)),
        }
        for solver, errs in sorted(overall.items())
    }
    return {"error_definition": ERROR_DEFINITION, "by_group": by_group, "by_solver": by_solver}


def worst_case_ratios(records) -> dict:
    """min(welfare / optimal) per solver over rows with positive optimum.

    Rows with optimal <= 0 have no defined ratio; they are excluded and
    counted separately.
    """
    ratios: dict = {}
    excluded: dict = {}
    for r in records:
        if r.optimal is None:
            continue
        if r.optimal > ZERO_OPTIMUM_TOL:
            ratio = r.welfare / r.optimal
            cur = ratios.get(r.solver)
            ratios[r.solver] = ratio if cur is None else min(cur, ratio)
        else:
            excluded[r.solver] = excluded.get(r.solver, 0) + 1
    return {
        solver: {
            "worst_case_ratio": ratios.get(solver),
            "excluded_nonpositive_optimum": excluded.get(solver, 0),
        }
        for solver in sorted(set(ratios) | set(excluded))
    }


@dataclass(frozen=True)
class SizeTiming:
    n: int
    mean_us: float
    min_us: float
    max_us: float
    sd_us: float


@dataclass(frozen=True)
class ScalingReport:
    """Per-size runtime statistics and the linear fit over (n, mean)."""

    rows: tuple[SizeTiming, ...]
    slope: float
    intercept: float
    r_squared: float


def scaling_run(
    n_values,
    repeats: int = 5,
    dist: Optional[DistributionSpec] = None,
    seed: int = 0,
    backend_name: str = "sa",
    backend=None,
) -> ScalingReport:
    """Time the grand-coalition split solve at each size.

    The same QUBO is solved ``repeats`` times per size; only the solve call
    is timed. The fit runs on (n, mean wall time).
    """
    if dist is None:
        dist = DistributionSpec("laplace")
    if backend is None:
        backend = get_backend(backend_name, seed=seed)
    rows = []
    for n in n_values:
        g = generate_instance(n, dist, derive_seed(seed, n))
        problem = build_split_qubo(g, grand_coalition(n))
        times = [backend(problem).wall_time_us for _ in range(repeats)]
        rows.append(
            SizeTiming(
                n=n,
                mean_us=float(np.mean(times)),
                min_us=float(np.min(times)),
                max_us=float(np.max(times)),
                sd_us=float(np.std(times)),
            )
        )
    slope, intercept, r_squared = linear_fit([(r.n, r.mean_us) for r in rows])
    return ScalingReport(tuple(rows), slope, intercept, r_squared)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(path: str | Path, records) -> None:
    """Write records sorted by (instance_id, solver) for deterministic files."""
    ordered = sorted(records, key=lambda r: (r.instance_id, r.solver))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {ERROR_DEFINITION}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in ordered:
            writer.writerow([_format_cell(getattr(r, c)) for c in CSV_COLUMNS])


def read_records_csv(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        data_lines = (line for line in fh if not line.startswith("#"))
        reader = csv.DictReader(data_lines)
        if reader.fieldnames is None or set(CSV_COLUMNS) - set(reader.fieldnames):
            raise ValueError(f"{path} is not a run-record CSV (missing columns)")
        for row in reader:
            records.append(
                RunRecord(
                    instance_id=row["instance_id"],
                    n=int(row["n"]),
                    distribution=row["distribution"],
                    seed=int(row["seed"]),
                    solver=row["solver"],
                    backend=row["backend"],
                    welfare=float(row["welfare"]),
                    optimal=float(row["optimal"]) if row["optimal"] else None,
                    error=float(row["error"]) if row["error"] else None,
                    error_kind=row["error_kind"] or None,
                    solver_calls=int(row["solver_calls"]),
                    wall_time_us=float(row["wall_time_us"]),
                )
            )
    return records


def build_report(records) -> dict:
    """Aggregate summary over run records: errors plus worst-case ratios."""
    summary = summarize_errors(records)
    summary["worst_case"] = worst_case_ratios(records)
    return summary
