"""HTTP client for a remote QUBO sampling service.

Wire protocol (JSON over HTTP, floats are 64-bit, assignments are in
variable-index order):

    POST {url}/solve
        {"size": m, "coeffs": [[i, j, value], ...],   # i <= j, zeros omitted
         "num_reads": k, "timeout_ms": t}
        -> {"job_id": "..."}
    GET {url}/result/{job_id}
        -> {"status": "done" | "pending" | "error",
            "samples": [{"x": [0|1, ...], "energy": f, "count": n}, ...]}

Sampling services return possibly suboptimal energies, and a silently wrong
energy would flip the divisive loop's accept/reject decision, so every
reported energy is re-validated against local recomputation before the
result is accepted.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import requests

from .errors import IntegrityError, SolveTimeoutError, TransportError
from .qubo import QuboProblem, qubo_energy
from .solvers import SolveResult, _assignment_value

ENERGY_VALIDATION_TOL = 1e-6


@dataclass(frozen=True)
class RemoteEndpoint:
    """Connection settings for a remote solver service."""

    url: str
    num_reads: int = 100
    timeout_ms: int = 10_000
    poll_interval_s: float = 0.02
    retries: int = 3
    request_timeout_s: float = 5.0


def _wire_coeffs(q: QuboProblem) -> list[list]:
    rows, cols = np.nonzero(q.coeffs)
    return [
        [int(i), int(j), float(q.coeffs[i, j])]
        for i, j in zip(rows.tolist(), cols.tolist())
    ]


def _request_with_retries(endpoint: RemoteEndpoint, method: str, url: str, **kwargs):
    last_exc = None
    for _ in range(endpoint.retries):
        try:
            resp = requests.request(
                method, url, timeout=endpoint.request_timeout_s, **kwargs
            )
            resp.raise_for_status()
            return resp
        except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as exc:
            last_exc = exc
    raise TransportError(
        f"{method} {url} failed after {endpoint.retries} attempts: {last_exc}",
        attempts=endpoint.retries,
    )


def solve_remote(q: QuboProblem, endpoint: RemoteEndpoint) -> SolveResult:
    """Submit, poll to completion, validate reported energies, and decode."""
    t0 = time.perf_counter()
    payload = {
        "size": q.size,
        "coeffs": _wire_coeffs(q),
        "num_reads": endpoint.num_reads,
        "timeout_ms": endpoint.timeout_ms,
    }
    resp = _request_with_retries(endpoint, "POST", endpoint.url + "/solve", json=payload)
    job_id = resp.json()["job_id"]

    deadline = t0 + endpoint.timeout_ms / 1000.0
    partial = []
    while True:
        resp = _request_with_retries(
            endpoint, "GET", f"{endpoint.url}/result/{job_id}"
        )
        body = resp.json()
        status = body.get("status")
        if status == "done":
            raw_samples = body.get("samples", [])
            break
        if status == "error":
            raise TransportError(
                f"remote job {job_id} failed: {body.get('message', 'unknown error')}",
                attempts=1,
            )
        partial = body.get("samples", []) or partial
        if time.perf_counter() >= deadline:
            raise SolveTimeoutError(
                f"remote job {job_id} still pending after {endpoint.timeout_ms} ms",
                partial_samples=partial,
            )
        time.sleep(endpoint.poll_interval_s)

    if not raw_samples:
        raise IntegrityError(f"remote job {job_id} finished with no samples")

    samples = []
    for sample in raw_samples:
        x = tuple(int(b) for b in sample["x"])
        reported = float(sample["energy"])
        recomputed = qubo_energy(q, x)
        if abs(reported - recomputed) > ENERGY_VALIDATION_TOL:
            raise IntegrityError(
                f"remote sample energy {reported} deviates from recomputed "
                f"{recomputed} by more than {ENERGY_VALIDATION_TOL}"
            )
        samples.append((x, recomputed, int(sample.get("count", 1))))
    samples.sort(key=lambda s: (s[1], _assignment_value(s[0])))

    best_x, best_e, _ = samples[0]
    wall_us = (time.perf_counter() - t0) * 1e6
    return SolveResult(
        best_assignment=best_x,
        best_energy=best_e,
        samples=tuple(samples),
        wall_time_us=wall_us,
        backend_id="remote",
    )
