"""In-process solver service speaking the remote wire protocol.

Backed by the exhaustive backend, so it doubles as a stand-in endpoint for
development and as the reference server in the test suite. Fault modes let
tests exercise each documented client error:

    "ok"         normal operation (exact optimum, correct energies)
    "misreport"  returns the optimum with a corrupted energy value
    "pending"    never finishes; pending polls carry a partial sample
    "error"      every job fails server-side
"""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .qubo import QuboProblem, qubo_energy
from .solvers import solve_exhaustive


class _Handler(BaseHTTPRequestHandler):
    def _send_json(self, payload, status=200):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        if self.path != "/solve":
            self._send_json({"message": "not found"}, status=404)
            return
        length = int(self.headers.get("Content-Length", 0))
        try:
            payload = json.loads(self.rfile.read(length))
            size = payload["size"]
            coeffs = np.zeros((size, size))
            for i, j, value in payload["coeffs"]:
                coeffs[i, j] = value
            problem = QuboProblem(size, coeffs, tuple(range(size)))
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            self._send_json({"message": f"bad request: {exc}"}, status=400)
            return
        job_id = self.server.register_job(problem, payload.get("num_reads", 1))
        self._send_json({"job_id": job_id})

    def do_GET(self):
        if not self.path.startswith("/result/"):
            self._send_json({"message": "not found"}, status=404)
            return
        job_id = self.path.removeprefix("/result/")
        job = self.server.jobs.get(job_id)
        if job is None:
            self._send_json({"status": "error", "message": "unknown job"})
            return
        self._send_json(self.server.result_payload(job))

    def log_message(self, *args):  # keep test output quiet
        pass


class MockSolverServer(ThreadingHTTPServer):
    """Threaded HTTP server; use as a context manager or call start/stop."""

    def __init__(self, mode: str = "ok", host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.mode = mode
        self.jobs = {}
        self._counter = 0
        self._lock = threading.Lock()
        self._thread = None

    @property
    def url(self) -> str:
        host, port = self.server_address
        return f"http://{host}:{port}"

    def register_job(self, problem: QuboProblem, num_reads: int) -> str:
        with self._lock:
            self._counter += 1
            job_id = f"job-{self._counter}"
        self.jobs[job_id] = (problem, num_reads)
        return job_id

    def result_payload(self, job) -> dict:
        problem, num_reads = job
        if self.mode == "error":
            return {"status": "error", "message": "injected job failure"}
        if self.mode == "pending":
            # never finishes; include an honest partial sample
            zeros = (0,) * problem.size
            return {
                "status": "pending",
                "samples": [
                    {"x": list(zeros), "energy": qubo_energy(problem, zeros), "count": 1}
                ],
            }
        result = solve_exhaustive(problem)
        energy = result.best_energy
        if self.mode == "misreport":
            energy = energy - 1.0
        return {
            "status": "done",
            "samples": [
                {"x": list(result.best_assignment), "energy": energy, "count": num_reads}
            ],
        }

    def start(self) -> "MockSolverServer":
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()
