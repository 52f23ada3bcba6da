"""Command line front end: generate, solve, compare, scaling, report.

Timing columns aside, every command writes deterministic output for a fixed
set of flags and instance files: rows are sorted before writing and all
randomness is seeded.
"""
from __future__ import annotations

import json
from pathlib import Path

import click

from .harness import (
    SOLVER_IDS,
    build_report,
    compare_instances,
    evaluate_instance,
    read_records_csv,
    scaling_run,
    summarize_errors,
    worst_case_ratios,
    write_records_csv,
)
from .instances import (
    FILE_SUFFIX,
    DistributionSpec,
    derive_seed,
    generate_instance,
    load_instance_file,
    save_instance,
)
from .remote import RemoteEndpoint
from .solvers import get_backend

BACKEND_CHOICES = ("exhaustive", "sa", "remote")


def _instance_paths(spec: str) -> list[Path]:
    path = Path(spec)
    if path.is_dir():
        found = sorted(path.glob(f"*{FILE_SUFFIX}"))
    elif path.is_file():
        found = [path]
    else:
        found = sorted(path.parent.glob(path.name))
    if not found:
        raise click.ClickException(f"no instance files found at {spec}")
    return found


def _load_items(spec: str):
    items = []
    for path in _instance_paths(spec):
        instance_id = path.name.removesuffix(FILE_SUFFIX).removesuffix(".json")
        try:
            items.append((instance_id, load_instance_file(path)))
        except Exception as exc:
            raise click.ClickException(f"failed to load {path}: {exc}") from exc
    return items


def _make_backend(backend: str, seed: int, remote_url: str | None, timeout_ms: int):
    if backend not in BACKEND_CHOICES:
        raise click.ClickException(
            f"unknown backend: {backend}; available: {', '.join(BACKEND_CHOICES)}"
        )
    if backend == "remote":
        if not remote_url:
            raise click.ClickException("--remote-url is required with --backend remote")
        return get_backend(
            "remote", endpoint=RemoteEndpoint(url=remote_url, timeout_ms=timeout_ms)
        )
    return get_backend(backend, seed=seed)


@click.group()
def main():
    """Coalition structure solvers and the benchmark harness around them."""


@main.command()
@click.option("--n-min", type=int, default=4, show_default=True)
@click.option("--n-max", type=int, default=10, show_default=True)
@click.option("--count", type=int, default=25, show_default=True, help="Instances per (n, distribution).")
@click.option("--dist", "dists", type=click.Choice(["laplace", "normal"]), multiple=True, default=("laplace", "normal"), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
def generate(n_min, n_max, count, dists, seed, out):
    """Write a grid of benchmark instance files."""
    if n_min < 2 or n_max < n_min:
        raise click.ClickException("need 2 <= n-min <= n-max")
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for kind in dists:
        dist = DistributionSpec(kind)
        for n in range(n_min, n_max + 1):
            for k in range(count):
                inst_seed = derive_seed(seed, n, k, 0 if kind == "laplace" else 1)
                g = generate_instance(n, dist, inst_seed)
                name = f"{kind}_n{n:02d}_i{k:03d}{FILE_SUFFIX}"
                save_instance(g, dist, inst_seed, out / name)
                written += 1
    click.echo(f"wrote {written} instances to {out}")


@main.command()
@click.option("--instances", required=True, help="Instance file, directory, or glob.")
@click.option("--solver", required=True)
@click.option("--backend", default="exhaustive", show_default=True)
@click.option("--epsilon", type=float, default=None, help="Split acceptance tolerance (default: scaled 1e-9).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--remote-url", default=None)
@click.option("--timeout-ms", type=int, default=10_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def solve(instances, solver, backend, epsilon, seed, remote_url, timeout_ms, out):
    """Run one solver over instance files and write run records."""
    if solver not in SOLVER_IDS:
        raise click.ClickException(
            f"unknown solver: {solver}; available: {', '.join(SOLVER_IDS)}"
        )
    backend_fn = _make_backend(backend, seed, remote_url, timeout_ms)
    records = []
    for instance_id, inst in _load_items(instances):
        try:
            records.extend(
                evaluate_instance(
                    inst,
                    instance_id,
                    solvers=(solver,),
                    backend_name=backend,
                    backend=backend_fn,
                    epsilon=epsilon,
                )
            )
        except Exception as exc:
            raise click.ClickException(f"{solver} failed on {instance_id}: {exc}") from exc
    write_records_csv(out, records)
    click.echo(f"wrote {len(records)} records to {out}")


@main.command()
@click.option("--instances", required=True)
@click.option("--backend", default="exhaustive", show_default=True)
@click.option("--epsilon", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--remote-url", default=None)
@click.option("--timeout-ms", type=int, default=10_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Also write a JSON error summary.")
def compare(instances, backend, epsilon, seed, remote_url, timeout_ms, out, summary_path):
    """Score gcs-q and clink against the exact dp optimum per instance."""
    backend_fn = _make_backend(backend, seed, remote_url, timeout_ms)
    items = _load_items(instances)
    try:
        records = compare_instances(
            items, backend_name=backend, backend=backend_fn, epsilon=epsilon
        )
    except Exception as exc:
        raise click.ClickException(f"compare failed: {exc}") from exc
    write_records_csv(out, records)
    summary = summarize_errors(records)
    if summary_path is not None:
        summary_path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    for row in summary["by_group"]:
        if row["solver"] == "dp":
            continue
        click.echo(
            f"{row['distribution']} n={row['n']} {row['solver']}: "
            f"mean error {row['mean_error']:.4f}, max {row['max_error']:.4f} "
            f"({row['instances']} instances)"
        )
    click.echo(f"wrote {len(records)} records to {out}")


@main.command()
@click.option("--n-min", type=int, default=4, show_default=True)
@click.option("--n-max", type=int, default=24, show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True, help="Solves of the same QUBO per size.")
@click.option("--dist", type=click.Choice(["laplace", "normal"]), default="laplace", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--backend", default="sa", show_default=True)
@click.option("--remote-url", default=None)
@click.option("--timeout-ms", type=int, default=10_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
def scaling(n_min, n_max, repeats, dist, seed, backend, remote_url, timeout_ms, out, summary_path):
    """Time the grand-coalition split at each size; fit runtime vs n."""
    if n_min < 2 or n_max < n_min:
        raise click.ClickException("need 2 <= n-min <= n-max")
    backend_fn = _make_backend(backend, seed, remote_url, timeout_ms)
    report = scaling_run(
        range(n_min, n_max + 1),
        repeats=repeats,
        dist=DistributionSpec(dist),
        seed=seed,
        backend_name=backend,
        backend=backend_fn,
    )
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("n,mean_us,min_us,max_us,sd_us,mean_minus_sd_us,mean_plus_sd_us\n")
        for r in report.rows:
            fh.write(
                f"{r.n},{r.mean_us!r},{r.min_us!r},{r.max_us!r},{r.sd_us!r},"
                f"{r.mean_us - r.sd_us!r},{r.mean_us + r.sd_us!r}\n"
            )
    fit = {
        "slope_us_per_agent": report.slope,
        "intercept_us": report.intercept,
        "r_squared": report.r_squared,
        "repeats": repeats,
        "backend": backend,
    }
    if summary_path is not None:
        summary_path.write_text(json.dumps(fit, indent=2), encoding="utf-8")
    click.echo(
        f"fit: slope {report.slope:.1f} us/agent, intercept {report.intercept:.1f} us, "
        f"R^2 {report.r_squared:.4f}"
    )
    click.echo(f"wrote timing bands to {out}")


@main.command()
@click.option("--records", "record_paths", multiple=True, required=True, type=click.Path(exists=False, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def report(record_paths, out):
    """Aggregate run-record CSVs into error and worst-case-ratio summaries."""
    records = []
    for path in record_paths:
        if not path.exists():
            raise click.ClickException(f"records file not found: {path}")
        try:
            records.extend(read_records_csv(path))
        except Exception as exc:
            raise click.ClickException(f"failed to read {path}: {exc}") from exc
    summary = build_report(records)
    if out is not None:
        out.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    for solver, stats in summary["by_solver"].items():
        click.echo(
            f"{solver}: mean error {stats['mean_error']:.4f}, "
            f"max {stats['max_error']:.4f} over {stats['instances']} instances"
        )
    for solver, stats in summary["worst_case"].items():
        ratio = stats["worst_case_ratio"]
        shown = f"{ratio:.4f}" if ratio is not None else "n/a"
        click.echo(
            f"{solver}: worst-case welfare ratio {shown} "
            f"({stats['excluded_nonpositive_optimum']} rows excluded for optimal <= 0)"
        )


if __name__ == "__main__":
    main()
