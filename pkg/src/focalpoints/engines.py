"""One entry point per engine for every representation of a mass.

All engines list their output on the same points (the focal points of the
input mass, or their complements for plausibility), so results can be
compared and written out identically.  The dense engines compute the whole
powerset and read those points off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dst import (
    MassFunction,
    commonality_to_conjunctive_weights,
    commonality_to_mass,
    implicability_to_disjunctive_weights,
    implicability_to_mass,
    mass_to_commonality,
    mass_to_implicability,
    weights_to_mass,
)
from .errors import ValidationError
from .focal import FocalPointSet, closure
from .fusion import dempster_combine_via_commonalities, normalize_conflict
from .lattice import (
    DEFAULT_MEM_CAP_BYTES,
    FMT_MAX_N,
    MOBIUS,
    SUBSET,
    SUPERSET,
    ZETA,
    Frame,
    OrderDirection,
    SetFunction,
    check_dense_size,
    check_mem_cap,
    fmt,
    mobius_naive_dense,
    zeta_naive_dense,
)

ENGINES = ("focal", "fmt", "naive")
TRANSFORMS = ("q", "b", "w", "v", "bel", "pl", "mass-from-q", "mass-from-b", "mass-from-w", "mass-from-v")
MASS_KINDS = frozenset(k for k in TRANSFORMS if k.startswith("mass-from-"))

# representations computed in each order
_SUPERSET_KINDS = frozenset({"q", "w", "mass-from-q", "mass-from-w"})


@dataclass(frozen=True)
class EngineConfig:
    mem_cap_bytes: int = DEFAULT_MEM_CAP_BYTES


@dataclass(frozen=True)
class Result:
    kind: str
    frame: Frame
    fp: FocalPointSet
    points: tuple[int, ...]
    values: np.ndarray

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.points, self.values.tolist()))

    def as_mass(self) -> MassFunction:
        if self.kind not in MASS_KINDS:
            raise ValidationError(f"{self.kind} is not a mass")
        return MassFunction(self.frame, self.as_dict())


def direction_of(kind: str) -> OrderDirection:
    return SUPERSET if kind in _SUPERSET_KINDS else SUBSET


def output_points(m: MassFunction, kind: str) -> tuple[FocalPointSet, tuple[int, ...]]:
    if kind not in TRANSFORMS:
        raise ValidationError(f"unknown representation {kind!r}; choose from {', '.join(TRANSFORMS)}")
    fp = closure(m.support(), direction_of(kind), m.frame)
    if kind == "pl":
        return fp, tuple(m.frame.full ^ p for p in fp.points)
    return fp, fp.points


def transform(m: MassFunction, kind: str, engine: str = "focal", config: EngineConfig = EngineConfig()) -> Result:
    fp, points = output_points(m, kind)
    if engine == "focal":
        values = _focal(m, kind)
    elif engine in ("fmt", "naive"):
        dense = _dense(m, kind, engine, config)
        values = dense[np.array(points, dtype=np.int64)]
    else:
        raise ValidationError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    return Result(kind, m.frame, fp, points, np.asarray(values, dtype=float))


def _focal(m: MassFunction, kind: str) -> np.ndarray:
    if direction_of(kind) is SUPERSET:
        q = mass_to_commonality(m)
        if kind == "q":
            return q.values
        if kind == "mass-from-q":
            return _mass_values(commonality_to_mass(q), q.fp)
        w = commonality_to_conjunctive_weights(q)
        if kind == "w":
            return w.values
        return _mass_values(weights_to_mass(w), q.fp)
    b = mass_to_implicability(m)
    if kind == "b":
        return b.values
    if kind == "bel":
        return b.values - m[0]
    if kind == "pl":
        return 1.0 - b.values
    if kind == "mass-from-b":
        return _mass_values(implicability_to_mass(b), b.fp)
    v = implicability_to_disjunctive_weights(b)
    if kind == "v":
        return v.values
    return _mass_values(weights_to_mass(v), b.fp)


def _mass_values(f: SetFunction, fp: FocalPointSet) -> np.ndarray:
    return np.array([f[p] for p in fp.points])


class _Dense:
    """Zeta and Möbius passes of one dense engine."""

    def __init__(self, engine: str, n: int, config: EngineConfig):
        self.engine = engine
        self.n = n
        self.cap = config.mem_cap_bytes
        check_mem_cap(n, self.cap)
        if engine == "naive":
            check_dense_size(n)

    def zeta(self, f: np.ndarray, d: OrderDirection, multiplicative: bool = False) -> np.ndarray:
        if self.engine == "fmt":
            return fmt(f, ZETA, d, multiplicative=multiplicative, mem_cap_bytes=self.cap)
        neutral = 1.0 if multiplicative else 0.0
        return zeta_naive_dense(SetFunction.from_dense(Frame.of_size(self.n), f, neutral), d)

    def mobius(self, g: np.ndarray, d: OrderDirection, multiplicative: bool = False) -> np.ndarray:
        if self.engine == "fmt":
            return fmt(g, MOBIUS, d, multiplicative=multiplicative, mem_cap_bytes=self.cap)
        return mobius_naive_dense(g, d, multiplicative=multiplicative, mem_cap_bytes=self.cap)


def _dense(m: MassFunction, kind: str, engine: str, config: EngineConfig) -> np.ndarray:
    ops = _Dense(engine, m.frame.n, config)
    md = m.to_dense(limit=FMT_MAX_N)
    d = direction_of(kind)
    g = ops.zeta(md, d)
    if kind in ("q", "b"):
        return g
    if kind == "bel":
        return g - m[0]
    if kind == "pl":
        return 1.0 - g[::-1]
    if kind in ("mass-from-q", "mass-from-b"):
        return ops.mobius(g, d)
    weights = 1.0 / ops.mobius(g, d, multiplicative=True)
    if kind in ("w", "v"):
        return weights
    return ops.mobius(ops.zeta(1.0 / weights, d, multiplicative=True), d)


def dempster(m1: MassFunction, m2: MassFunction, engine: str = "focal", config: EngineConfig = EngineConfig()) -> MassFunction:
    """Dempster's rule computed by one engine (commonality product, then inversion)."""
    if engine == "focal":
        return dempster_combine_via_commonalities(m1, m2)
    if engine not in ("fmt", "naive"):
        raise ValidationError(f"unknown engine {engine!r}")
    ops = _Dense(engine, m1.frame.n, config)
    q12 = ops.zeta(m1.to_dense(limit=FMT_MAX_N), SUPERSET) * ops.zeta(m2.to_dense(limit=FMT_MAX_N), SUPERSET)
    m12 = ops.mobius(q12, SUPERSET)
    keep = np.flatnonzero(np.abs(m12) > 1e-12)
    return normalize_conflict(MassFunction(m1.frame, zip(keep.tolist(), m12[keep].tolist())))
