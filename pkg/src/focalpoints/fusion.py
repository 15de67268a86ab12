"""Combination rules and the conjunctive decomposition over a core.

The core ``C`` of a mass is the union of its support.  Decomposing over
``C`` instead of the whole frame only needs ``C`` to carry mass, which
discounting can always arrange.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dst import (
    CommonalityFunction,
    MassFunction,
    WeightFunction,
    WeightKind,
    commonality_to_conjunctive_weights,
    mass_to_commonality,
    weights_to_commonality,
    weights_to_mass,
)
from .errors import InvalidTarget, MaximumMissing, TotalConflict, ValidationError, ZeroCommonality
from .focal import closure, mask_array, mobius_on_points, zeta_on_points
from .lattice import EPS, SUBSET, SUPERSET, Frame, SetFunction

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.999


def _same_frame(m1: SetFunction, m2: SetFunction) -> Frame:
    if m1.frame != m2.frame:
        raise ValidationError("masses are defined on different frames")
    return m1.frame


def _pairwise(m1: SetFunction, m2: SetFunction, union: bool) -> MassFunction:
    frame = _same_frame(m1, m2)
    a = mask_array(m1.support(), frame.n)
    b = mask_array(m2.support(), frame.n)
    va = np.array([m1[s] for s in m1.support()])
    vb = np.array([m2[s] for s in m2.support()])
    keys = (a[:, None] | b[None, :]) if union else (a[:, None] & b[None, :])
    uniq, inverse = np.unique(keys.ravel(), return_inverse=True)
    sums = np.bincount(inverse.ravel(), weights=np.outer(va, vb).ravel(), minlength=len(uniq))
    return MassFunction(frame, zip((int(k) for k in uniq.tolist()), sums.tolist()))


def conjunctive_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Unnormalized conjunctive rule: products of masses accumulated on pairwise intersections."""
    return _pairwise(m1, m2, union=False)


def disjunctive_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    return _pairwise(m1, m2, union=True)


def normalize_conflict(m: MassFunction) -> MassFunction:
    """Drop the mass on the empty set and rescale the rest."""
    k = 1.0 - m[0]
    if k <= EPS:
        raise TotalConflict("the sources are in total conflict")
    return MassFunction(m.frame, [(s, v / k) for s, v in m.items() if s != 0])


def dempster_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    return normalize_conflict(conjunctive_combine(m1, m2))


def conjunctive_combine_via_commonalities(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Multiply commonalities on the meet-closure of both supports, then invert there."""
    frame = _same_frame(m1, m2)
    fp = closure(set(m1.support()) | set(m2.support()), SUPERSET, frame)
    q12 = zeta_on_points(m1, fp) * zeta_on_points(m2, fp)
    return MassFunction(frame, zip(fp.points, mobius_on_points(q12, fp).tolist()))


def dempster_combine_via_commonalities(m1: MassFunction, m2: MassFunction) -> MassFunction:
    return normalize_conflict(conjunctive_combine_via_commonalities(m1, m2))


def disjunctive_combine_via_implicabilities(m1: MassFunction, m2: MassFunction) -> MassFunction:
    frame = _same_frame(m1, m2)
    fp = closure(set(m1.support()) | set(m2.support()), SUBSET, frame)
    b12 = zeta_on_points(m1, fp) * zeta_on_points(m2, fp)
    return MassFunction(frame, zip(fp.points, mobius_on_points(b12, fp).tolist()))


def generalized_conjunctive_decomposition(m: MassFunction, q: CommonalityFunction | None = None) -> WeightFunction:
    """Conjunctive weights over the core ``C`` of ``m``; needs ``m(C) > 0``."""
    core = m.core()
    if core not in m:
        raise MaximumMissing(f"the core {m.frame.format(core)} carries no mass; discount first")
    q = mass_to_commonality(m) if q is None else q
    return commonality_to_conjunctive_weights(q, core)


@dataclass(frozen=True)
class DiscountSpec:
    alpha: float = DEFAULT_ALPHA
    target: int | None = None  # None: the core of the discounted mass

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie strictly between 0 and 1, got {self.alpha}")


def discount(m: MassFunction, spec: DiscountSpec) -> MassFunction:
    """Scale all masses by ``alpha`` and give ``1 - alpha`` to ``spec.target``."""
    core = m.core()
    target = core if spec.target is None else m.frame.check(spec.target)
    if core & ~target:
        raise InvalidTarget(f"{m.frame.format(target)} does not contain the core {m.frame.format(core)}")
    out = {s: spec.alpha * v for s, v in m.items()}
    out[target] = out.get(target, 0.0) + 1.0 - spec.alpha
    return MassFunction(m.frame, out)


def project_mass(m: MassFunction, core: int) -> MassFunction:
    """Move each mass ``m(B)`` onto ``B & core``."""
    core = m.frame.check(core)
    out: dict[int, float] = {}
    for s, v in m.items():
        out[s & core] = out.get(s & core, 0.0) + v
    return MassFunction(m.frame, out)


@dataclass(frozen=True)
class CautiousFusion:
    core: int
    w1: WeightFunction
    w2: WeightFunction
    w12: WeightFunction
    q12: CommonalityFunction
    mass: MassFunction
    discounted: tuple[bool, bool]


WeightOperator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def cautious_fusion(
    m1: MassFunction,
    m2: MassFunction,
    *,
    alpha: float = DEFAULT_ALPHA,
    auto_discount: bool = True,
    operator: WeightOperator = np.minimum,
) -> CautiousFusion:
    """Fuse decomposition weights over ``C = core(m1) & core(m2)``.

    Weights below ``C`` are combined pointwise with ``operator`` (weight 1
    where a source has none); the weight of ``C`` itself is then chosen so
    that the weights multiply to one, which keeps the result normalized.
    A source with no mass above ``C`` is first discounted onto its own core
    when ``auto_discount`` is set, with a logged warning.
    """
    frame = _same_frame(m1, m2)
    core = m1.core() & m2.core()
    weights = []
    discounted = []
    for i, m in enumerate((m1, m2), start=1):
        q = mass_to_commonality(m)
        hit = q(core) <= EPS
        if hit:
            if not auto_discount:
                raise ZeroCommonality(f"source {i} gives no commonality to {frame.format(core)}")
            log.warning("source %d discounted with alpha=%g onto its core before decomposition", i, alpha)
            q = mass_to_commonality(discount(m, DiscountSpec(alpha)))
        weights.append(commonality_to_conjunctive_weights(q, core))
        discounted.append(hit)
    w1, w2 = weights
    points = sorted((w1.fp.as_set() | w2.fp.as_set()) - {core})
    fused = operator(np.array([w1(p) for p in points]), np.array([w2(p) for p in points]))
    values = dict(zip(points, np.asarray(fused, dtype=float).tolist()))
    values[core] = 1.0 / float(np.prod(fused)) if points else 1.0
    values = {p: v for p, v in values.items() if abs(v - 1.0) > EPS or p == core}
    w12 = WeightFunction(WeightKind.CONJUNCTIVE, frame, values, core)
    q12 = weights_to_commonality(w12)
    mass = weights_to_mass(w12)
    return CautiousFusion(core, w1, w2, w12, q12, mass, (discounted[0], discounted[1]))


def cautious_combine(m1: MassFunction, m2: MassFunction, **kw) -> MassFunction:
    """Unnormalized fused mass (the empty set keeps its mass)."""
    return cautious_fusion(m1, m2, **kw).mass

