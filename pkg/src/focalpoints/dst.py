"""Belief-function representations computed on focal points.

``q`` and ``b`` live on the meet- and join-closures of ``supp(m)``; every
other subset takes the image of its nearest focal point, so full-powerset
views are lazy.  Conjunctive weights follow the convention
``q(y) = prod(w(x) ** -1 for x >= y)``, disjunctive ones
``b(y) = prod(v(x) ** -1 for x <= y)``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import NotAMass, ValidationError, ZeroCommonality, ZeroImage
from .focal import (
    FocalPointSet,
    closure,
    extend_zeta,
    extend_zeta_dense,
    mobius_on_points,
    mobius_on_points_multiplicative,
    values_on,
    zeta_on_points,
)
from .lattice import EPS, SUBSET, SUPERSET, Frame, OrderDirection, SetFunction, canonical_key, check_dense_size

log = logging.getLogger(__name__)

MASS_TOL = 1e-9


class MassFunction(SetFunction):
    """Nonnegative set function summing to one; mass on the empty set is allowed."""

    __slots__ = ()

    def __init__(self, frame: Frame, entries: Mapping[int, float] | Iterable = (), *, normalize: bool = False):
        items = entries.items() if isinstance(entries, Mapping) else entries
        items = [(int(k), float(v)) for k, v in items]
        for k, v in items:
            if v < -MASS_TOL:
                raise NotAMass(f"negative mass {v:.3g} on {frame.format(k)}")
        items = [(k, v) for k, v in items if v > EPS]
        total = math.fsum(v for _, v in items)
        if abs(total - 1.0) > MASS_TOL:
            if not normalize or total <= EPS:
                raise NotAMass(f"masses sum to {total!r}, not 1")
            log.info("renormalizing masses that summed to %r", total)
            items = [(k, v / total) for k, v in items]
        super().__init__(frame, items, 0.0)

    @classmethod
    def from_labels(cls, frame: Frame, masses: Mapping[Iterable[str], float], **kw) -> "MassFunction":
        return cls(frame, [(frame.mask(labels), v) for labels, v in masses.items()], **kw)

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        return cls(frame, {frame.full: 1.0})

    def core(self) -> int:
        """Union of the support."""
        out = 0
        for s in self:
            out |= s
        return out


class FocalFunction:
    """Zeta transform of a mass stored on focal points only."""

    direction: OrderDirection = SUBSET

    def __init__(self, fp: FocalPointSet, values):
        if fp.direction is not self.direction:
            raise ValidationError(f"{type(self).__name__} needs a {self.direction.value} focal-point set")
        self.fp = fp
        self.frame = fp.frame
        self.values = values_on(values, fp)
        self.values.setflags(write=False)

    def __call__(self, y: int) -> float:
        return extend_zeta(self.values, self.fp, y, 0.0)

    def on_points(self) -> dict[int, float]:
        return dict(zip(self.fp.points, self.values.tolist()))

    def to_dense(self) -> np.ndarray:
        return extend_zeta_dense(self.values, self.fp, 0.0)

    def __repr__(self):
        body = ", ".join(f"{self.frame.format(p)}: {v:.6g}" for p, v in self.on_points().items())
        return f"{type(self).__name__}({body})"


class CommonalityFunction(FocalFunction):
    direction = SUPERSET


class ImplicabilityFunction(FocalFunction):
    direction = SUBSET


class WeightKind(enum.Enum):
    CONJUNCTIVE = "w"
    DISJUNCTIVE = "v"

    @property
    def direction(self) -> OrderDirection:
        return SUPERSET if self is WeightKind.CONJUNCTIVE else SUBSET


class WeightFunction:
    """Decomposition weights: positive values on a focal-point set, 1 elsewhere.

    ``top`` is the greatest element of the decomposition domain for
    conjunctive weights (Ω or a smaller core) and the least element for
    disjunctive ones.
    """

    def __init__(self, kind: WeightKind, frame: Frame, values: Mapping[int, float], top: int, fp: FocalPointSet | None = None):
        self.kind = kind
        self.frame = frame
        self.top = frame.check(top)
        if fp is None:
            gens = {k for k, v in values.items() if abs(v - 1.0) > EPS} | {top}
            fp = closure(gens, kind.direction, frame)
        if fp.direction is not kind.direction:
            raise ValidationError("weight focal points have the wrong direction")
        stray = set(values) - fp.as_set()
        if stray:
            raise ValidationError(f"weights given off the focal points, e.g. at {frame.format(stray.pop())}")
        self.fp = fp
        self.values = np.array([float(values.get(p, 1.0)) for p in fp.points])
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0):
            raise ValidationError("weights must be positive and finite")
        self.values.setflags(write=False)

    def __call__(self, y: int) -> float:
        i = self.fp.index.get(y)
        return 1.0 if i is None else float(self.values[i])

    def on_points(self) -> dict[int, float]:
        return dict(zip(self.fp.points, self.values.tolist()))

    def support(self) -> tuple[int, ...]:
        """Points whose weight differs from 1, in canonical order."""
        return tuple(sorted((p for p, v in self.on_points().items() if abs(v - 1.0) > EPS), key=canonical_key))

    def __repr__(self):
        body = ", ".join(f"{self.frame.format(p)}: {v:.6g}" for p, v in self.on_points().items())
        return f"WeightFunction({self.kind.value}, {body})"


# -- conversions ------------------------------------------------------------

def mass_to_commonality(m: MassFunction) -> CommonalityFunction:
    fp = closure(m.support(), SUPERSET, m.frame)
    return CommonalityFunction(fp, zeta_on_points(m, fp))


def mass_to_implicability(m: MassFunction) -> ImplicabilityFunction:
    fp = closure(m.support(), SUBSET, m.frame)
    return ImplicabilityFunction(fp, zeta_on_points(m, fp))


def _to_mass(frame: Frame, fp: FocalPointSet, values: np.ndarray, validate: bool):
    f = mobius_on_points(values, fp)
    pairs = zip(fp.points, f.tolist())
    return MassFunction(frame, pairs) if validate else SetFunction(frame, pairs, 0.0)


def commonality_to_mass(q: CommonalityFunction, *, validate: bool = True) -> MassFunction:
    return _to_mass(q.frame, q.fp, q.values, validate)


def implicability_to_mass(b: ImplicabilityFunction, *, validate: bool = True) -> MassFunction:
    return _to_mass(b.frame, b.fp, b.values, validate)


def _restricted_domain(g: FocalFunction, top: int) -> FocalPointSet:
    """``g``'s focal points restricted to the decomposition domain bounded by ``top``.

    ``top`` is the least element of the domain in ``g``'s own order (a core
    ``C`` for commonalities, a base set for implicabilities).
    """
    fp = g.fp
    if top == g.frame.bottom(fp.direction) and top in fp:
        return fp
    if fp.direction is SUPERSET:
        pts = {p & top for p in fp.points}
        gens = {s & top for s in fp.generators}
    else:
        pts = {p | top for p in fp.points}
        gens = {s | top for s in fp.generators}
    # restriction commutes with the join, so this stays closed
    return FocalPointSet(g.frame, fp.direction, pts | {top}, gens | {top})


def _inverse_weights(g: FocalFunction, top: int, kind: WeightKind, zero_error) -> WeightFunction:
    dom = _restricted_domain(g, g.frame.check(top))
    images = np.array([g(p) for p in dom.points]) if dom is not g.fp else g.values
    if np.any(np.abs(images) <= EPS):
        bad = dom.points[int(np.flatnonzero(np.abs(images) <= EPS)[0])]
        raise zero_error(f"zero image at {g.frame.format(bad)}; the weights are undefined")
    h = mobius_on_points_multiplicative(images, dom)
    return WeightFunction(kind, g.frame, dict(zip(dom.points, (1.0 / h).tolist())), top, dom)


def commonality_to_conjunctive_weights(q: CommonalityFunction, top: int | None = None) -> WeightFunction:
    """Weights ``w`` on the meet-closure below ``top`` with ``q = prod(w ** -1 over supersets)``."""
    top = q.frame.full if top is None else top
    return _inverse_weights(q, top, WeightKind.CONJUNCTIVE, ZeroCommonality)


def implicability_to_disjunctive_weights(b: ImplicabilityFunction, bottom: int | None = None) -> WeightFunction:
    """Weights ``v`` on the join-closure above ``bottom`` with ``b = prod(v ** -1 over subsets)``."""
    bottom = 0 if bottom is None else bottom
    return _inverse_weights(b, bottom, WeightKind.DISJUNCTIVE, ZeroImage)


def _zeta_of_weights(w: WeightFunction) -> np.ndarray:
    inv = SetFunction(w.frame, zip(w.fp.points, (1.0 / w.values).tolist()), 1.0)
    return zeta_on_points(inv, w.fp)


def weights_to_commonality(w: WeightFunction) -> CommonalityFunction:
    if w.kind is not WeightKind.CONJUNCTIVE:
        raise ValidationError("commonalities come from conjunctive weights")
    return CommonalityFunction(w.fp, _zeta_of_weights(w))


def weights_to_implicability(w: WeightFunction) -> ImplicabilityFunction:
    if w.kind is not WeightKind.DISJUNCTIVE:
        raise ValidationError("implicabilities come from disjunctive weights")
    return ImplicabilityFunction(w.fp, _zeta_of_weights(w))


def weights_to_mass(w: WeightFunction, *, validate: bool = True):
    """Recompose a mass; with ``validate=False`` an invalid result is returned as a plain SetFunction."""
    return _to_mass(w.frame, w.fp, _zeta_of_weights(w), validate)


class LazySetFunction:
    """Function on the powerset evaluated on demand."""

    def __init__(self, frame: Frame, fn: Callable[[int], float]):
        self.frame = frame
        self._fn = fn

    def __call__(self, y: int) -> float:
        return self._fn(self.frame.check(y))

    __getitem__ = __call__

    def to_dense(self) -> np.ndarray:
        check_dense_size(self.frame.n)
        return np.array([self._fn(y) for y in self.frame.powerset()])


def belief(m: MassFunction, b: ImplicabilityFunction | None = None) -> LazySetFunction:
    b = mass_to_implicability(m) if b is None else b
    empty = m[0]
    return LazySetFunction(m.frame, lambda y: b(y) - empty)


def plausibility(m: MassFunction, b: ImplicabilityFunction | None = None) -> LazySetFunction:
    b = mass_to_implicability(m) if b is None else b
    full = m.frame.full
    return LazySetFunction(m.frame, lambda y: 1.0 - b(full ^ y))


@dataclass(frozen=True)
class Coarsening:
    """Frame elements merged into groups that never split a support element."""

    frame: Frame
    mass: MassFunction
    groups: tuple[int, ...]  # original mask of each coarse element
    original: Frame

    def refine(self, coarse_mask: int) -> int:
        out = 0
        for i, g in enumerate(self.groups):
            if coarse_mask >> i & 1:
                out |= g
        return out

    def coarsen(self, mask: int) -> int:
        out = 0
        for i, g in enumerate(self.groups):
            part = mask & g
            if part == g:
                out |= 1 << i
            elif part:
                raise ValidationError(f"{self.original.format(mask)} splits a coarse element")
        return out


def lossless_coarsen(m: MassFunction) -> Coarsening:
    """Group elements with identical membership across ``supp(m)``."""
    frame = m.frame
    support = m.support()
    groups: dict[tuple[bool, ...], int] = {}
    for i in range(frame.n):
        signature = tuple(bool(s >> i & 1) for s in support)
        groups[signature] = groups.get(signature, 0) | 1 << i
    masks = tuple(groups.values())
    coarse_frame = Frame("+".join(frame.labels_of(g)) for g in masks)
    result = Coarsening(coarse_frame, MassFunction.vacuous(coarse_frame), masks, frame)
    coarse_mass = MassFunction(coarse_frame, [(result.coarsen(s), v) for s, v in m.items()])
    return Coarsening(coarse_frame, coarse_mass, masks, frame)
