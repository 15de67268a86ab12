"""Propagating a change of one multiplicative factor to the zeta and Möbius sides.

If ``g`` is the product of ``h`` over the points below each element and
``f`` is the additive Möbius transform of ``g``, scaling ``h(x)`` by ``r``
scales ``g`` by ``r`` above ``x`` and adds ``(r - 1) * f_up`` to ``f``, where
``f_up`` is the Möbius transform of ``g`` restricted to the up-set of ``x``.
For belief functions this turns into a closed form using the projection of
``m`` onto ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dst import (
    CommonalityFunction,
    MassFunction,
    WeightFunction,
    WeightKind,
    commonality_to_conjunctive_weights,
    mass_to_commonality,
)
from .errors import NotAFocalPoint, NotAMass, ValidationError, ZeroImage, ZeroWeight
from .focal import FocalPointSet, _leq_vector, mobius_on_points, values_on
from .lattice import EPS, SUBSET, SetFunction

SIGNED_TOL = 1e-9


@dataclass(frozen=True)
class SignedMass:
    """Set function summing to one whose values may be negative."""

    inner: SetFunction

    def __post_init__(self):
        if self.inner.neutral != 0.0:
            raise ValidationError("a signed mass is additive")
        total = self.inner.total()
        if abs(total - 1.0) > SIGNED_TOL:
            raise NotAMass(f"values sum to {total!r}, not 1")

    @property
    def is_valid_mass(self) -> bool:
        return all(v >= -SIGNED_TOL for _, v in self.inner.items())

    def __getitem__(self, mask: int) -> float:
        return self.inner[mask]

    def to_mass(self) -> MassFunction:
        return MassFunction(self.inner.frame, self.inner.items())


def _sub_set(fp: FocalPointSet, keep: np.ndarray) -> FocalPointSet:
    return FocalPointSet(fp.frame, fp.direction, [fp.points[i] for i in np.flatnonzero(keep)], ())


def perturb_multiplicative(h: SetFunction, x: int, new_value: float, g_on_fp, fp: FocalPointSet):
    """Images of ``g`` and ``f`` on ``fp`` after ``h(x)`` becomes ``new_value``.

    Returns ``(g_new, f_new)``: an array aligned with ``fp.points`` and an
    additive SetFunction that is zero off ``fp``.
    """
    if x not in fp:
        raise NotAFocalPoint(f"{fp.frame.format(x)} is not a focal point")
    old = h[x]
    if abs(old) <= EPS or abs(new_value) <= EPS:
        raise ZeroImage("a zero factor cannot be rescaled")
    r = new_value / old
    g = values_on(g_on_fp, fp)
    f = mobius_on_points(g, fp)
    up = _leq_vector(fp.masks, x, fp.direction.dual)  # points y with x <= y
    g_new = np.where(up, r * g, g)
    f_new = f.copy()
    if up.any():
        f_new[up] += (r - 1.0) * mobius_on_points(g[up], _sub_set(fp, up))
    return g_new, SetFunction(fp.frame, zip(fp.points, f_new.tolist()), 0.0)


@dataclass
class AblationSession:
    """One mass with its commonalities and weights; projections are cached per point."""

    m: MassFunction
    q: CommonalityFunction | None = None
    w: WeightFunction | None = None
    _projections: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.q is None:
            self.q = mass_to_commonality(self.m)
        if self.w is None:
            self.w = commonality_to_conjunctive_weights(self.q)
        if self.w.kind is not WeightKind.CONJUNCTIVE:
            raise ValidationError("ablation works on conjunctive weights")

    @property
    def fp(self) -> FocalPointSet:
        return self.w.fp

    def projection(self, x: int) -> np.ndarray:
        """Mass moved onto ``B & x``, aligned with the focal points.

        Commonalities below ``x`` are unchanged by the projection, so it is
        the Möbius transform of ``q`` over the focal points inside ``x``.
        """
        if x not in self._projections:
            fp = self.fp
            inside = _leq_vector(fp.masks, x, SUBSET)  # subsets of x
            sub = _sub_set(fp, inside)
            out = np.zeros(len(fp))
            out[inside] = mobius_on_points(np.array([self.q(p) for p in sub.points]), sub)
            self._projections[x] = out
        return self._projections[x]

    def ablate(self, x: int, new_w: float) -> tuple[SignedMass, dict[int, float]]:
        fp = self.fp
        if x not in fp or x == self.w.top:
            raise NotAFocalPoint(f"{fp.frame.format(x)} is not an ablatable weight")
        old = self.w(x)
        if old <= 0 or new_w <= 0 or not math.isfinite(new_w):
            raise ZeroWeight("weights must stay positive")
        r = new_w / old
        inside = _leq_vector(fp.masks, x, SUBSET)
        q = np.array([self.q(p) for p in fp.points])
        m = np.array([self.m[p] for p in fp.points])
        q_new = np.where(inside, q, r * q)
        m_new = r * m + np.where(inside, (1.0 - r) * self.projection(x), 0.0)
        signed = SignedMass(SetFunction(fp.frame, zip(fp.points, m_new.tolist()), 0.0))
        return signed, dict(zip(fp.points, q_new.tolist()))


def ablate_weight(
    m: MassFunction, q: CommonalityFunction | None, w: WeightFunction | None, x: int, new_w: float
) -> tuple[SignedMass, dict[int, float]]:
    """Set ``w(x)`` to ``new_w``, renormalize through ``w(top)``, and return ``(m', q')``."""
    return AblationSession(m, q, w).ablate(x, new_w)
