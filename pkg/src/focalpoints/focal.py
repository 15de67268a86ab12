"""Focal points: join-closures of a support and the transforms restricted to them.

A zeta transform ``g`` of ``f`` is fully determined by its values on the
focal points of ``f`` (the closure of ``supp(f)`` under the join of the chosen
order), and ``f`` vanishes everywhere else.  Everything here works on those
points only, so costs scale with ``|fp|`` instead of ``2**N``.
"""

from __future__ import annotations

import functools
import operator
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import IncompleteInput, InvalidPartition, NotInSet, ValidationError, ZeroImage
from .lattice import (
    EPS,
    SUBSET,
    SUPERSET,
    Frame,
    OrderDirection,
    SetFunction,
    check_dense_size,
    join,
    leq,
    order_key,
)

# rows of the strict-order matrix materialized at once
_BLOCK_ENTRIES = 1 << 22
PARTITION_CHECK_MAX_N = 12


def mask_array(masks: Iterable[int], n: int) -> np.ndarray:
    """Masks as a numpy array; int64 while they fit, Python ints beyond that."""
    dtype = np.int64 if n <= 62 else object
    return np.fromiter(masks, dtype=dtype) if dtype is np.int64 else np.array(list(masks), dtype=object)


def leq_matrix(xs: np.ndarray, ys: np.ndarray, direction: OrderDirection) -> np.ndarray:
    """``out[i, j] = leq(xs[j], ys[i])``."""
    if direction is SUBSET:
        return (xs[None, :] & ~ys[:, None]) == 0
    return (ys[:, None] & ~xs[None, :]) == 0


def _leq_vector(xs: np.ndarray, y: int, direction: OrderDirection) -> np.ndarray:
    if direction is SUBSET:
        return (xs & ~y) == 0
    return (y & ~xs) == 0


def _join_all(xs: np.ndarray, direction: OrderDirection) -> int:
    op = operator.or_ if direction is SUBSET else operator.and_
    return int(functools.reduce(op, xs.tolist()))


class FocalPointSet:
    """Join-closed set of masks, stored bottom-up for its direction.

    Points are sorted by ascending cardinality for ``SUBSET`` and descending
    cardinality for ``SUPERSET`` (ties by mask value), so that every point
    comes after all points strictly below it.
    """

    def __init__(self, frame: Frame, direction: OrderDirection, points: Iterable[int], generators: Iterable[int] = ()):
        self.frame = frame
        self.direction = direction
        self.points = tuple(sorted(set(points), key=order_key(direction)))
        self.generators = frozenset(generators)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.masks = mask_array(self.points, frame.n)
        ranks = [p.bit_count() for p in self.points]
        # contiguous [start, stop) slices of equal cardinality, bottom-up
        self.levels: list[tuple[int, int]] = []
        start = 0
        for i in range(1, len(ranks) + 1):
            if i == len(ranks) or ranks[i] != ranks[start]:
                self.levels.append((start, i))
                start = i

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, mask: int) -> bool:
        return mask in self.index

    def as_set(self) -> frozenset[int]:
        return frozenset(self.points)

    def strictly_below_block(self, start: int, stop: int) -> np.ndarray:
        """Order matrix of rows ``start:stop`` against all earlier points.

        Only earlier points can lie strictly below, and points of equal
        cardinality never do, so callers pass level-aligned ranges.
        """
        return leq_matrix(self.masks[:start], self.masks[start:stop], self.direction)

    def row_chunks(self):
        """Level-aligned ``(start, stop)`` chunks small enough to materialize."""
        for lo, hi in self.levels:
            step = max(1, _BLOCK_ENTRIES // max(lo, 1))
            for start in range(lo, hi, step):
                yield start, min(hi, start + step)

    @functools.cached_property
    def strict_order(self) -> sparse.csr_matrix:
        """Sparse ``B[i, j] = 1`` iff point ``j`` is strictly below point ``i``."""
        rows, cols = [], []
        for start, stop in self.row_chunks():
            r, c = np.nonzero(self.strictly_below_block(start, stop))
            rows.append(r + start)
            cols.append(c)
        size = len(self.points)
        r = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
        c = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
        return sparse.csr_matrix((np.ones(r.size), (r, c)), shape=(size, size))

    @functools.cached_property
    def level_blocks(self) -> list[tuple[int, int, sparse.csr_matrix]]:
        order = self.strict_order
        return [(lo, hi, order[lo:hi]) for lo, hi in self.levels]

    def below(self, y: int) -> np.ndarray:
        """Indices of the points ``<= y``."""
        return np.flatnonzero(_leq_vector(self.masks, y, self.direction))

    def generator_provenance(self) -> dict[int, tuple[int, ...]]:
        """For each point, the generators whose join it is (empty for none)."""
        gens = mask_array(sorted(self.generators, key=order_key(self.direction)), self.frame.n)
        out = {}
        for p in self.points:
            hit = _leq_vector(gens, p, self.direction)
            out[p] = tuple(int(g) for g in gens[hit])
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FocalPointSet)
            and other.frame == self.frame
            and other.direction is self.direction
            and other.points == self.points
        )

    def __repr__(self):
        body = ", ".join(self.frame.format(p) for p in self.points)
        return f"FocalPointSet({self.direction.value}: {body})"


def closure(generators: Iterable[int], direction: OrderDirection, frame: Frame) -> FocalPointSet:
    """Smallest join-closed superset of ``generators``.

    Generators are added one at a time; when ``A`` is already closed, the
    closure of ``A + {s}`` is ``A + {s} + {s v a : a in A}``.  Joins of
    comparable pairs are skipped since they give back one of the two.
    """
    gens = sorted({frame.check(int(s)) for s in generators}, key=order_key(direction))
    if not gens:
        raise ValidationError("closure needs at least one generator")
    pts = mask_array([gens[0]], frame.n)
    members = {gens[0]}
    for s in gens[1:]:
        if s in members:
            continue
        below_s = _leq_vector(pts, s, direction)
        above_s = _leq_vector(pts, s, direction.dual)
        others = pts[~(below_s | above_s)]
        joined = others | s if direction is SUBSET else others & s
        new = [s] + [int(v) for v in np.unique(joined).tolist() if int(v) not in members]
        members.update(new)
        pts = np.concatenate([pts, mask_array(new, frame.n)])
    return FocalPointSet(frame, direction, members, gens)


def closure_properties_check(s: Iterable[int], s_prime: Iterable[int], direction: OrderDirection, frame: Frame) -> bool:
    """Extensivity, monotonicity (when ``s`` is within ``s_prime``) and idempotence."""
    s, s_prime = set(s), set(s_prime)
    cs = closure(s, direction, frame).as_set()
    ok = s <= cs
    ok &= closure(cs, direction, frame).as_set() == cs
    if s <= s_prime:
        ok &= cs <= closure(s_prime, direction, frame).as_set()
    return bool(ok)


def is_join_closed(points: Iterable[int], direction: OrderDirection) -> bool:
    pts = set(points)
    return all(join(p, r, direction) in pts for p in pts for r in pts)


# -- values on focal points -------------------------------------------------

def values_on(g_on_fp: Mapping[int, float] | Sequence[float] | np.ndarray, fp: FocalPointSet) -> np.ndarray:
    """Values aligned with ``fp.points``; mappings must cover every point."""
    if isinstance(g_on_fp, Mapping):
        missing = [p for p in fp.points if p not in g_on_fp]
        if missing:
            raise IncompleteInput(f"no image for focal point {fp.frame.format(missing[0])}")
        return np.array([float(g_on_fp[p]) for p in fp.points])
    values = np.asarray(g_on_fp, dtype=float)
    if values.shape != (len(fp),):
        raise IncompleteInput(f"expected {len(fp)} images, got shape {values.shape}")
    return values


def zeta_on_points(f: SetFunction, fp: FocalPointSet) -> np.ndarray:
    """Zeta transform of ``f`` evaluated at the focal points (sum or product over the support)."""
    if len(fp) == 0:
        return np.empty(0)
    if all(s in fp.index for s in f.support()):
        aligned = np.array([f[p] for p in fp.points])
        return zeta_aligned(aligned, fp, multiplicative=f.neutral == 1.0)
    supp = mask_array(f.support(), fp.frame.n)
    vals = np.array([f[s] for s in f.support()], dtype=float)
    out = np.empty(len(fp))
    step = max(1, _BLOCK_ENTRIES // max(len(supp), 1))
    for start in range(0, len(fp), step):
        hit = leq_matrix(supp, fp.masks[start : start + step], fp.direction)
        if f.neutral == 0.0:
            out[start : start + step] = hit.astype(float) @ vals
        else:
            out[start : start + step] = _signed_product(hit, vals)
    return out


def zeta_aligned(values: np.ndarray, fp: FocalPointSet, *, multiplicative: bool = False) -> np.ndarray:
    """Zeta transform of a function supported on ``fp``, given by its values on ``fp``."""
    order = fp.strict_order
    if not multiplicative:
        return values + order @ values
    if np.any(values == 0):
        raise ZeroImage("zero factors are not supported on the sparse product path")
    log_abs = np.log(np.abs(values))
    neg = (values < 0).astype(float)
    flips = neg + order @ neg
    mag = np.exp(log_abs + order @ log_abs)
    return np.where(np.rint(flips) % 2 == 1, -mag, mag)


def _signed_product(hit: np.ndarray, vals: np.ndarray) -> np.ndarray:
    if vals.size == 0:
        return np.ones(hit.shape[0])
    if np.any(vals == 0):
        raw = np.where(hit, vals[None, :], 1.0)
        return raw.prod(axis=1)
    h = hit.astype(float)
    mag = np.exp(h @ np.log(np.abs(vals)))
    flips = h @ (vals < 0).astype(float)
    return np.where(np.rint(flips) % 2 == 1, -mag, mag)


def mobius_on_points(g: np.ndarray, fp: FocalPointSet) -> np.ndarray:
    """Inversion by ``f(y) = g(y) - sum(f(x) for focal x < y)``, bottom-up."""
    f = np.zeros(len(fp))
    for lo, hi, below in fp.level_blocks:
        f[lo:hi] = g[lo:hi] - below @ f
    return f


def mobius_on_points_multiplicative(g: np.ndarray, fp: FocalPointSet) -> np.ndarray:
    """Inversion by ``h(y) = g(y) / prod(h(x) for focal x < y)`` in log space."""
    if np.any(np.abs(g) <= EPS):
        bad = fp.points[int(np.flatnonzero(np.abs(g) <= EPS)[0])]
        raise ZeroImage(f"zero image at {fp.frame.format(bad)} makes product inversion impossible")
    log_abs = np.log(np.abs(g))
    neg = (g < 0).astype(float)
    log_h = np.zeros(len(fp))
    neg_h = np.zeros(len(fp))
    for lo, hi, below in fp.level_blocks:
        log_h[lo:hi] = log_abs[lo:hi] - below @ log_h
        neg_h[lo:hi] = (neg[lo:hi] + below @ neg_h) % 2
    return np.where(neg_h == 1, -1.0, 1.0) * np.exp(log_h)


def efficient_mobius(g_on_fp, fp: FocalPointSet, *, explicit_eta: bool = False) -> SetFunction:
    """Möbius transform of ``g`` from its images on focal points only.

    The result is zero off ``fp``.  ``explicit_eta`` sums ``g(s) * eta(s, y)``
    point by point instead of running the recursion; it is quadratic per
    point and only meant for cross-checking.
    """
    g = values_on(g_on_fp, fp)
    if explicit_eta:
        f = np.array([sum(g[fp.index[s]] * v for s, v in eta_table(fp, y).values.items()) for y in fp.points])
    else:
        f = mobius_on_points(g, fp)
    return SetFunction(fp.frame, zip(fp.points, f.tolist()), 0.0)


def efficient_mobius_multiplicative(g_on_fp, fp: FocalPointSet) -> SetFunction:
    """Product-form inversion; the result is 1 off ``fp``."""
    h = mobius_on_points_multiplicative(values_on(g_on_fp, fp), fp)
    return SetFunction(fp.frame, zip(fp.points, h.tolist()), 1.0)


@dataclass(frozen=True)
class EtaTable:
    target: int
    values: dict[int, int]


def eta_table(fp: FocalPointSet, y: int) -> EtaTable:
    """``eta(s, y)`` for the focal points ``s <= y``, by downward recursion from ``y``."""
    if y not in fp:
        raise NotInSet(f"{fp.frame.format(y)} is not a focal point")
    idx = fp.below(y)  # bottom-up order, ends with y
    masks = fp.masks[idx]
    eta = np.zeros(len(idx), dtype=np.int64)
    eta[-1] = 1
    for k in range(len(idx) - 2, -1, -1):
        above = _leq_vector(masks[k + 1 :], int(masks[k]), fp.direction.dual)
        eta[k] = -eta[k + 1 :][above].sum()
    return EtaTable(y, {fp.points[i]: int(e) for i, e in zip(idx.tolist(), eta.tolist())})


def extend_zeta(g_on_fp, fp: FocalPointSet, y: int, neutral: float = 0.0) -> float:
    """Image of any ``y``: the image of the greatest focal point below it.

    That point is the join of all focal points below ``y``; with none below,
    the image is the neutral element.
    """
    fp.frame.check(y)
    if y in fp:
        return _lookup(g_on_fp, fp, y)
    hit = fp.masks[_leq_vector(fp.masks, y, fp.direction)]
    if hit.size == 0:
        return float(neutral)
    return _lookup(g_on_fp, fp, _join_all(hit, fp.direction))


def _lookup(g_on_fp, fp: FocalPointSet, p: int) -> float:
    if isinstance(g_on_fp, Mapping):
        if p not in g_on_fp:
            raise IncompleteInput(f"no image for focal point {fp.frame.format(p)}")
        return float(g_on_fp[p])
    return float(g_on_fp[fp.index[p]])


def cover_index_dense(fp: FocalPointSet) -> np.ndarray:
    """For every mask of the powerset, the index of the greatest focal point below it (-1 if none)."""
    n = fp.frame.n
    check_dense_size(n)
    full = fp.frame.full
    # work in SUBSET form: complementing turns the meet of supersets into a union
    flip = fp.direction is SUPERSET
    masks = np.array([full ^ p if flip else p for p in fp.points], dtype=np.int64)
    joined = np.zeros(1 << n, dtype=np.int64)
    present = np.zeros(1 << n, dtype=bool)
    joined[masks] = masks
    present[masks] = True
    for i in range(n):
        jv = joined.reshape(-1, 2, 1 << i)
        pv = present.reshape(-1, 2, 1 << i)
        jv[:, 1, :] |= jv[:, 0, :]
        pv[:, 1, :] |= pv[:, 0, :]
    lookup = np.full(1 << n, -1, dtype=np.int64)
    lookup[masks] = np.arange(len(masks))
    out = np.where(present, lookup[joined], -1)
    return out[::-1].copy() if flip else out


def extend_zeta_dense(g_on_fp, fp: FocalPointSet, neutral: float = 0.0) -> np.ndarray:
    g = values_on(g_on_fp, fp)
    idx = cover_index_dense(fp)
    return np.where(idx >= 0, np.append(g, neutral)[idx], neutral)


# -- image partitions -------------------------------------------------------

@dataclass(frozen=True)
class Part:
    minima: frozenset[int]
    maxima: frozenset[int]
    image: float


@dataclass
class ImagePartition:
    """A zeta transform described by convex parts of constant image."""

    frame: Frame
    direction: OrderDirection
    parts: list[Part]
    neutral: float = 0.0
    _validated: bool = field(default=False, repr=False)

    def members_dense(self, part: Part) -> np.ndarray:
        up = _upset_dense(part.minima, self.frame.n, self.direction)
        down = _upset_dense(part.maxima, self.frame.n, self.direction.dual)
        return up & down

    def validate(self) -> None:
        """Exhaustive disjoint-cover check, only run for small frames."""
        if self.frame.n > PARTITION_CHECK_MAX_N:
            return
        cover = np.zeros(1 << self.frame.n, dtype=np.int64)
        for part in self.parts:
            if not part.minima or not part.maxima:
                raise InvalidPartition("every part needs minimal and maximal elements")
            cover += self.members_dense(part)
        if np.any(cover == 0):
            y = int(np.flatnonzero(cover == 0)[0])
            raise InvalidPartition(f"{self.frame.format(y)} is in no part")
        if np.any(cover > 1):
            y = int(np.flatnonzero(cover > 1)[0])
            raise InvalidPartition(f"{self.frame.format(y)} is in several parts")
        self._validated = True

    def image(self, y: int) -> float:
        for part in self.parts:
            if any(leq(a, y, self.direction) for a in part.minima) and any(
                leq(y, b, self.direction) for b in part.maxima
            ):
                return part.image
        raise InvalidPartition(f"{self.frame.format(y)} is in no part")

    @classmethod
    def from_dense(
        cls, frame: Frame, direction: OrderDirection, g: np.ndarray, neutral: float = 0.0, decimals: int = 10
    ) -> "ImagePartition":
        """Partition a dense image array into convex parts of equal (rounded) image.

        Each value class is split into cover-connected components; a component
        that is not convex falls back to singleton parts.
        """
        n = frame.n
        check_dense_size(n, PARTITION_CHECK_MAX_N)
        g = np.asarray(g, dtype=float)
        keys = np.round(g, decimals)
        comp = _components(keys, n)
        parts = []
        for label in np.unique(comp):
            members = np.flatnonzero(comp == label)
            inside = np.zeros(1 << n, dtype=bool)
            inside[members] = True
            mins, maxs = _extremes(members, inside, n, direction)
            image = float(g[members[0]])
            hull = _upset_dense(mins, n, direction) & _upset_dense(maxs, n, direction.dual)
            if np.array_equal(hull, inside):
                parts.append(Part(frozenset(mins), frozenset(maxs), image))
            else:
                parts.extend(Part(frozenset([y]), frozenset([y]), float(g[y])) for y in members.tolist())
        return cls(frame, direction, parts, neutral)


def _upset_dense(generators: Iterable[int], n: int, direction: OrderDirection) -> np.ndarray:
    out = np.zeros(1 << n, dtype=bool)
    out[list(generators)] = True
    for i in range(n):
        v = out.reshape(-1, 2, 1 << i)
        if direction is SUBSET:
            v[:, 1, :] |= v[:, 0, :]
        else:
            v[:, 0, :] |= v[:, 1, :]
    return out


def _components(keys: np.ndarray, n: int) -> np.ndarray:
    """Label connected components of equal keys along cover edges (single-bit flips)."""
    parent = np.arange(keys.size)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ys = np.arange(keys.size)
    for i in range(n):
        lo = ys[(ys >> i) & 1 == 0]
        hi = lo | (1 << i)
        for a, b in zip(lo[keys[lo] == keys[hi]].tolist(), hi[keys[lo] == keys[hi]].tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(a) for a in range(keys.size)])


def _extremes(members: np.ndarray, inside: np.ndarray, n: int, direction: OrderDirection):
    """Minimal and maximal members (for ``direction``) of a component."""
    has_lower = np.zeros(members.size, dtype=bool)
    has_upper = np.zeros(members.size, dtype=bool)
    for i in range(n):
        bit = 1 << i
        with_bit = (members & bit) != 0
        # SUBSET: removing a bit goes down; SUPERSET: adding one does
        down_nb = np.where(with_bit, members ^ bit, -1) if direction is SUBSET else np.where(with_bit, -1, members | bit)
        up_nb = np.where(with_bit, -1, members | bit) if direction is SUBSET else np.where(with_bit, members ^ bit, -1)
        has_lower |= (down_nb >= 0) & inside[np.maximum(down_nb, 0)]
        has_upper |= (up_nb >= 0) & inside[np.maximum(up_nb, 0)]
    return members[~has_lower].tolist(), members[~has_upper].tolist()


def _partition_bottom_image(gp: ImagePartition) -> float:
    bottom = gp.frame.bottom(gp.direction)
    for part in gp.parts:
        if bottom in part.minima:
            return part.image
    return gp.image(bottom)


def _candidate_generators(gp: ImagePartition) -> tuple[set[int], set[int]]:
    if not gp._validated:
        gp.validate()
    bottom = gp.frame.bottom(gp.direction)
    m = {bottom} if abs(_partition_bottom_image(gp) - gp.neutral) <= EPS else set()
    g = set().union(*(part.minima for part in gp.parts))
    return g - m, m


def focal_points_from_partition(gp: ImagePartition) -> FocalPointSet:
    """Focal-point superset recovered from an image partition of ``g`` alone.

    With ``M`` the minimum of the lattice when its image is neutral and ``G``
    all part minima, returns the closure of ``G \\ M`` together with the joins
    of its elements with ``M``.  An empty result means ``f`` is zero.
    """
    gm, m = _candidate_generators(gp)
    if not gm:
        return FocalPointSet(gp.frame, gp.direction, (), ())
    y = {join(x, a, gp.direction) for x in gm for a in m}
    return closure(y | gm, gp.direction, gp.frame)


def focal_points_from_partition_nonneg(gp: ImagePartition) -> frozenset[int]:
    """For nonnegative ``f`` the part minima outside ``M`` already contain its focal points."""
    gm, _ = _candidate_generators(gp)
    return frozenset(gm)


def level_partition_oracle(s: Iterable[int], direction: OrderDirection, frame: Frame) -> np.ndarray:
    """For every mask, the set of generators below it, encoded as a Python int over generator positions."""
    check_dense_size(frame.n, PARTITION_CHECK_MAX_N)
    gens = sorted(set(s))
    ys = np.arange(1 << frame.n, dtype=np.int64)
    ids = np.zeros(ys.size, dtype=object)
    for k, x in enumerate(gens):
        hit = _leq_vector(ys, x, direction.dual)  # y >= x
        ids[hit] += 1 << k
    return ids


def level_partition_minima(s: Iterable[int], direction: OrderDirection, frame: Frame) -> set[int]:
    """Minimum of each part with a nonempty lower closure; raises if a part has several minima."""
    ids = level_partition_oracle(s, direction, frame)
    out = set()
    for key in set(ids.tolist()):
        if key == 0:
            continue
        members = np.flatnonzero(ids == key)
        inside = np.zeros(ids.size, dtype=bool)
        inside[members] = True
        mins, _ = _extremes(members, inside, frame.n, direction)
        if len(mins) != 1:
            raise ValidationError(f"level part {key:#x} has {len(mins)} minimal elements")
        out.add(int(mins[0]))
    return out
