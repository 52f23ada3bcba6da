"""Benchmark instance generation and serialization.

Instances are complete graphs whose edge weights are drawn independently from
either a Laplace or a Normal distribution (location 0, scale 5 for the
standard benchmark families). Weights are produced by inverse-CDF transforms
of uniforms from a seeded PCG64 stream, in fixed (i < j, row-major) order, so
the same (n, distribution, seed) always yields the same graph within this
implementation. The JSON instance file, not the seed, is the
cross-implementation exchange format: floats are written as shortest
round-trip decimal text, so save/load is bit-exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtri

from .errors import InstanceFormatError
from .game import Graph

SCHEMA_VERSION = 1
FILE_SUFFIX = ".isg.json"

_KINDS = ("laplace", "normal")


@dataclass(frozen=True)
class DistributionSpec:
    """Edge-weight distribution: kind, location (mu), scale (b or sigma)."""

    kind: str
    location: float = 0.0
    scale: float = 5.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown distribution kind: {self.kind!r}")
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")


def sample_weights(count: int, dist: DistributionSpec, seed: int) -> np.ndarray:
    """Draw ``count`` independent weights via inverse CDF of seeded uniforms."""
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(count)
    # keep the transforms finite at the stream's edge values
    u = np.clip(u, np.finfo(float).tiny, np.nextafter(1.0, 0.0))
    if dist.kind == "laplace":
        # F^-1(u) = mu - b * sign(u - 1/2) * ln(1 - 2|u - 1/2|)
        half = u - 0.5
        return dist.location - dist.scale * np.sign(half) * np.log1p(-2.0 * np.abs(half))
    return dist.location + dist.scale * ndtri(u)


def generate_instance(n: int, dist: DistributionSpec, seed: int) -> Graph:
    """Complete ISG on ``n`` agents with independently sampled edge weights."""
    if not 2 <= n <= 64:
        raise ValueError(f"agent count must be in 2..64, got {n}")
    draws = sample_weights(n * (n - 1) // 2, dist, seed)
    weights = np.zeros((n, n))
    rows, cols = np.triu_indices(n, k=1)  # row-major i < j order
    weights[rows, cols] = draws
    weights[cols, rows] = draws
    return Graph(n, weights)


@dataclass(frozen=True)
class InstanceFile:
    """On-disk form of one instance; round-trips graphs bit-exactly."""

    schema_version: int
    n: int
    distribution: DistributionSpec
    seed: int
    weights: tuple[tuple[int, int, float], ...]

    @classmethod
    def from_graph(
        cls, g: Graph, dist: DistributionSpec, seed: int
    ) -> "InstanceFile":
        rows, cols = np.triu_indices(g.n, k=1)
        entries = tuple(
            (int(i), int(j), float(g.weights[i, j])) for i, j in zip(rows, cols)
        )
        return cls(SCHEMA_VERSION, g.n, dist, seed, entries)

    def to_graph(self) -> Graph:
        weights = np.zeros((self.n, self.n))
        for i, j, w in self.weights:
            weights[i, j] = w
            weights[j, i] = w
        return Graph(self.n, weights)

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "n": self.n,
            "distribution": {
                "kind": self.distribution.kind,
                "location": self.distribution.location,
                "scale": self.distribution.scale,
            },
            "seed": self.seed,
            "weights": [[i, j, w] for i, j, w in self.weights],
        }


def save_instance(
    g: Graph, dist: DistributionSpec, seed: int, path: str | Path
) -> InstanceFile:
    record = InstanceFile.from_graph(g, dist, seed)
    Path(path).write_text(json.dumps(record.to_json()), encoding="utf-8")
    return record


def _require(data: dict, field: str):
    if field not in data:
        raise InstanceFormatError(f"missing field: {field}")
    return data[field]


def load_instance_file(path: str | Path) -> InstanceFile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON in {path}: {exc}") from exc

    version = _require(data, "schema_version")
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(
            f"unsupported schema_version {version!r}; this build reads "
            f"version {SCHEMA_VERSION}"
        )
    n = _require(data, "n")
    if not isinstance(n, int) or not 1 <= n <= 64:
        raise InstanceFormatError(f"field n must be an integer in 1..64, got {n!r}")
    dist_data = _require(data, "distribution")
    try:
        dist = DistributionSpec(
            _require(dist_data, "kind"),
            float(_require(dist_data, "location")),
            float(_require(dist_data, "scale")),
        )
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad distribution: {exc}") from exc
    seed = _require(data, "seed")

    raw = _require(data, "weights")
    expected = n * (n - 1) // 2
    if len(raw) != expected:
        raise InstanceFormatError(f"expected {expected} weights, found {len(raw)}")
    seen = set()
    entries = []
    for entry in raw:
        if len(entry) != 3:
            raise InstanceFormatError(f"weight entry must be [i, j, w], got {entry!r}")
        i, j, w = entry
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < n):
            raise InstanceFormatError(f"weight indices must satisfy 0 <= i < j < n, got {entry!r}")
        if (i, j) in seen:
            raise InstanceFormatError(f"duplicate weight entry for pair ({i}, {j})")
        w = float(w)
        if not math.isfinite(w):
            raise InstanceFormatError(f"weight for pair ({i}, {j}) is not finite")
        seen.add((i, j))
        entries.append((i, j, w))
    return InstanceFile(version, n, dist, seed, tuple(entries))


def load_instance(path: str | Path) -> Graph:
    return load_instance_file(path).to_graph()


def derive_seed(base: int, *keys: int) -> int:
    """Stable per-instance seed from a base seed and grid coordinates."""
    z = base & 0xFFFFFFFFFFFFFFFF
    for k in keys:
        z ^= (k + 0x9E3779B97F4A7C15 + (z << 6) + (z >> 2)) & 0xFFFFFFFFFFFFFFFF
        z &= 0xFFFFFFFFFFFFFFFF
    return z
