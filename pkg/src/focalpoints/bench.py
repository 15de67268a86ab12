"""Timing harness running every engine on the same seeded instances.

Engines are timed only once their outputs agree; a disagreement aborts the
run.  Dense engines whose memory estimate exceeds the cap get a row marked
``skipped-by-memory-cap`` instead of a timing.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .engines import ENGINES, TRANSFORMS, EngineConfig, dempster, transform
from .errors import BenchDisagreement, FrameTooLarge
from .focal import closure
from .lattice import SUPERSET, DEFAULT_MEM_CAP_BYTES, FMT_MAX_N, NAIVE_MAX_N, dense_bytes, naive_bytes
from .sampling import random_mass

COLUMNS = ("engine", "operation", "N", "supp", "fp", "seed", "wall_ns", "ok")
AGREEMENT_TOL = 1e-9
SKIPPED = "skipped-by-memory-cap"
DEFAULT_OPERATIONS = ("q", "b", "w", "v", "mass-from-q", "dempster")


@dataclass(frozen=True)
class BenchConfig:
    sizes: Sequence[int] = (8, 12)
    supports: Sequence[int] = (8, 16)
    seeds: int = 3
    seed: int = 0
    operations: Sequence[str] = DEFAULT_OPERATIONS
    engines: Sequence[str] = ENGINES
    mem_cap_bytes: int = DEFAULT_MEM_CAP_BYTES


@dataclass(frozen=True)
class BenchRow:
    engine: str
    operation: str
    N: int
    supp: int
    fp: int
    seed: int
    wall_ns: int | None
    ok: str

    def as_tuple(self):
        return (self.engine, self.operation, self.N, self.supp, self.fp, self.seed,
                "" if self.wall_ns is None else self.wall_ns, self.ok)


def fits(engine: str, n: int, mem_cap_bytes: int) -> bool:
    if engine == "fmt":
        return n <= FMT_MAX_N and dense_bytes(n) <= mem_cap_bytes
    if engine == "naive":
        return n <= NAIVE_MAX_N and naive_bytes(n) <= mem_cap_bytes
    return True


def _timed(fn: Callable):
    start = time.perf_counter_ns()
    out = fn()
    return out, time.perf_counter_ns() - start


def _as_vector(out, points) -> np.ndarray:
    if hasattr(out, "values") and not callable(out.values):
        return np.asarray(out.values)
    return np.array([out[p] for p in points])


def run_cell(n: int, k: int, seed: int, config: BenchConfig) -> list[BenchRow]:
    rng = np.random.default_rng([config.seed, n, k, seed])
    m1 = random_mass(rng, n, k, include_full=True, include_empty=True)
    m2 = random_mass(rng, n, k, include_full=True)
    engine_config = EngineConfig(config.mem_cap_bytes)
    rows = []
    for op in config.operations:
        if op == "dempster":
            run = lambda e: dempster(m1, m2, e, engine_config)  # noqa: E731
        elif op in TRANSFORMS:
            run = lambda e, op=op: transform(m1, op, e, engine_config)  # noqa: E731
        else:
            raise ValueError(f"unknown operation {op!r}")
        results, times = {}, {}
        for engine in config.engines:
            if not fits(engine, n, config.mem_cap_bytes):
                continue
            try:
                results[engine], times[engine] = _timed(lambda: run(engine))
            except FrameTooLarge:
                continue
        reference = results["focal"] if "focal" in results else next(iter(results.values()))
        if op == "dempster":
            points = tuple(sorted(set().union(*(r.support() for r in results.values()))))
            size = len(closure(set(m1.support()) | set(m2.support()), SUPERSET, m1.frame))
        else:
            points = reference.points
            size = len(points)
        ref_vec = _as_vector(reference, points)
        for engine, out in results.items():
            diff = float(np.max(np.abs(_as_vector(out, points) - ref_vec), initial=0.0))
            if diff > AGREEMENT_TOL:
                raise BenchDisagreement(
                    f"{engine} disagrees with the reference on {op} at N={n}, supp={k}, seed={seed}: {diff:.3g}"
                )
        for engine in config.engines:
            if engine in results:
                rows.append(BenchRow(engine, op, n, len(m1), size, seed, times[engine], "true"))
            else:
                rows.append(BenchRow(engine, op, n, len(m1), size, seed, None, SKIPPED))
    return rows


def run_bench(config: BenchConfig) -> list[BenchRow]:
    rows = []
    for n in config.sizes:
        for k in config.supports:
            for seed in range(config.seeds):
                rows.extend(run_cell(n, k, seed, config))
    return rows


def to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_tuple())
    return buf.getvalue()
