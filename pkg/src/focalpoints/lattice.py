"""Powerset lattice primitives and the dense reference engines.

Subsets of a frame are plain Python ints used as bitmasks: bit ``i`` stands
for ``frame.labels[i]``.  Python ints are unbounded, so frames wider than a
machine word need no special handling.

The naive engine (direct sums over the support, Möbius inversion with the
recursively defined Möbius function) and the Fast Möbius Transform are dense:
they touch all ``2**N`` subsets and only exist as oracles and baselines.
"""

from __future__ import annotations

import enum
import functools
import math
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import FrameTooLarge, NotComparable, ValidationError, ZeroImage

EPS = 1e-12
NAIVE_MAX_N = 20
FMT_MAX_N = 30
DEFAULT_MEM_CAP_BYTES = 64 * 2**20


class OrderDirection(enum.Enum):
    """Inclusion (``SUBSET``) or reverse inclusion (``SUPERSET``)."""

    SUBSET = "subset"
    SUPERSET = "superset"

    @property
    def dual(self) -> "OrderDirection":
        return OrderDirection.SUPERSET if self is OrderDirection.SUBSET else OrderDirection.SUBSET


SUBSET = OrderDirection.SUBSET
SUPERSET = OrderDirection.SUPERSET


class Transform(enum.Enum):
    ZETA = "zeta"
    MOBIUS = "mobius"


ZETA = Transform.ZETA
MOBIUS = Transform.MOBIUS


def popcount(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def order_key(direction: OrderDirection):
    """Sort key listing elements bottom-up for ``direction``."""
    if direction is SUBSET:
        return canonical_key
    return lambda mask: (-mask.bit_count(), mask)


class Frame:
    """Ordered, duplicate-free labels of a frame of discernment."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise ValidationError("a frame needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate labels in frame {labels}")
        self.labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    @classmethod
    def of_size(cls, n: int) -> "Frame":
        return cls(f"e{i}" for i in range(n))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def mask(self, labels: Iterable[str]) -> int:
        out = 0
        for label in labels:
            try:
                out |= 1 << self._index[label]
            except KeyError:
                raise ValidationError(f"label {label!r} is not in the frame") from None
        return out

    def labels_of(self, mask: int) -> tuple[str, ...]:
        self.check(mask)
        return tuple(label for i, label in enumerate(self.labels) if mask >> i & 1)

    def format(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"

    def check(self, mask: int) -> int:
        if mask < 0 or mask >> len(self.labels):
            raise ValidationError(f"mask {mask:#x} has bits outside a frame of size {self.n}")
        return mask

    def complement(self, mask: int) -> int:
        return self.full ^ mask

    def bottom(self, direction: OrderDirection) -> int:
        """The minimum of the powerset under ``direction``."""
        return 0 if direction is SUBSET else self.full

    def top(self, direction: OrderDirection) -> int:
        return self.full if direction is SUBSET else 0

    def powerset(self) -> range:
        return range(1 << self.n)

    def __eq__(self, other):
        return isinstance(other, Frame) and other.labels == self.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"Frame({list(self.labels)!r})"


def leq(x: int, y: int, direction: OrderDirection) -> bool:
    if direction is SUBSET:
        return x & ~y == 0
    return y & ~x == 0


def join(x: int, y: int, direction: OrderDirection) -> int:
    return x | y if direction is SUBSET else x & y


class SetFunction:
    """Sparse real function on the powerset of a frame.

    Only values away from ``neutral`` (0 for sums, 1 for products) are
    stored; everything else evaluates to ``neutral``.  Entries are kept in
    canonical order: ascending cardinality, then mask value.
    """

    __slots__ = ("frame", "neutral", "_entries")

    def __init__(self, frame: Frame, entries: Mapping[int, float] | Iterable = (), neutral: float = 0.0):
        if neutral not in (0.0, 1.0):
            raise ValueError(f"neutral must be 0 or 1, got {neutral}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean = {}
        for mask, value in items:
            mask = frame.check(int(mask))
            value = float(value)
            if not math.isfinite(value):
                raise ValidationError(f"non-finite value at {frame.format(mask)}")
            if abs(value - neutral) > EPS:
                clean[mask] = value
        self.frame = frame
        self.neutral = float(neutral)
        self._entries = dict(sorted(clean.items(), key=lambda kv: canonical_key(kv[0])))

    def __getitem__(self, mask: int) -> float:
        return self._entries.get(mask, self.neutral)

    def __contains__(self, mask: int) -> bool:
        return mask in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    def total(self) -> float:
        return math.fsum(self._entries.values())

    def to_dense(self, limit: int = NAIVE_MAX_N) -> np.ndarray:
        check_dense_size(self.frame.n, limit)
        out = np.full(1 << self.frame.n, self.neutral)
        for mask, value in self._entries.items():
            out[mask] = value
        return out

    @classmethod
    def from_dense(cls, frame: Frame, values: np.ndarray, neutral: float = 0.0) -> "SetFunction":
        values = np.asarray(values, dtype=float)
        if values.size != 1 << frame.n:
            raise ValueError(f"expected {1 << frame.n} values, got {values.size}")
        keep = np.flatnonzero(np.abs(values - neutral) > EPS)
        return cls(frame, zip(keep.tolist(), values[keep].tolist()), neutral)

    def max_abs_diff(self, other: "SetFunction") -> float:
        keys = set(self._entries) | set(other._entries)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def __repr__(self):
        body = ", ".join(f"{self.frame.format(k)}: {v:.6g}" for k, v in self._entries.items())
        return f"{type(self).__name__}({body})"


def check_dense_size(n: int, limit: int = NAIVE_MAX_N) -> None:
    if n > limit:
        raise FrameTooLarge(f"dense representation refused for N={n} (limit {limit})")


def dense_bytes(n: int) -> int:
    return 8 << n


def naive_bytes(n: int) -> int:
    """Rough footprint of the naive inversion: one sparse entry per subset pair."""
    return 12 * 3**n + (8 << n)


def check_mem_cap(n: int, mem_cap_bytes: int = DEFAULT_MEM_CAP_BYTES) -> None:
    if n > FMT_MAX_N or dense_bytes(n) > mem_cap_bytes:
        raise FrameTooLarge(
            f"a dense array over 2^{n} subsets needs {dense_bytes(n)} bytes, cap is {mem_cap_bytes}"
        )


# -- Möbius function --------------------------------------------------------

def mobius_column(y: int, domain: Iterable[int], direction: OrderDirection) -> dict[int, int]:
    """``mu(z, y)`` for every ``z <= y`` of ``domain``, by downward recursion from ``y``."""
    key = order_key(direction)
    lower = sorted((z for z in set(domain) if leq(z, y, direction)), key=key, reverse=True)
    if not lower or lower[0] != y:
        raise ValidationError("y must belong to the domain")
    mu: dict[int, int] = {}
    for z in lower:
        if z == y:
            mu[z] = 1
        else:
            mu[z] = -sum(v for p, v in mu.items() if leq(z, p, direction))
    return mu


def mobius_function_naive(x: int, y: int, domain: Iterable[int], direction: OrderDirection) -> int:
    """Möbius function of the sub-poset ``(domain, direction)``.

    Uses the recursion ``mu(x, x) = 1`` and
    ``mu(x, y) = -sum(mu(z, y) for x < z <= y)``, restricted to ``domain``.
    """
    if not leq(x, y, direction):
        raise NotComparable(f"{x:#x} is not below {y:#x}")
    interval = [z for z in domain if leq(x, z, direction) and leq(z, y, direction)]
    if x not in interval:
        raise ValidationError("x must belong to the domain")
    return mobius_column(y, interval, direction)[x]


def _boolean_mobius_by_distance(n: int) -> np.ndarray:
    # The recursion on an interval [x, y] of the powerset, with terms grouped by
    # |y \ z|: exactly comb(k, j) elements z of (x, y] sit at distance j from y.
    mu = [1]
    for k in range(1, n + 1):
        mu.append(-sum(math.comb(k, j) * mu[j] for j in range(k)))
    return np.array(mu, dtype=float)


@functools.lru_cache(maxsize=4)
def _subset_pairs(n: int):
    """CSR pattern of ``x ⊆ y`` (row ``y``, column ``x``) plus ``|y| - |x|``."""
    step = sparse.csr_matrix(np.array([[1, 0], [1, 1]], dtype=np.int8))
    pattern = sparse.csr_matrix(np.ones((1, 1), dtype=np.int8))
    for _ in range(n):
        pattern = sparse.kron(pattern, step, format="csr")
    pattern.sort_indices()
    counts = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    rows = np.repeat(np.arange(1 << n), np.diff(pattern.indptr))
    distance = counts[rows] - counts[pattern.indices]
    for arr in (pattern.indptr, pattern.indices, distance):
        arr.setflags(write=False)
    return pattern.indptr, pattern.indices, distance


def _frame_bits(values: np.ndarray) -> int:
    n = values.size.bit_length() - 1
    if values.ndim != 1 or values.size != 1 << n:
        raise ValueError("dense arrays must have length 2**N")
    return n


# -- naive engine -----------------------------------------------------------

def _covering(x: int, ys: np.ndarray, direction: OrderDirection) -> np.ndarray:
    # the targets y with x <= y
    if direction is SUBSET:
        return (np.int64(x) & ~ys) == 0
    return (ys & ~np.int64(x)) == 0


def zeta_naive_dense(f: SetFunction, direction: OrderDirection) -> np.ndarray:
    """Dense zeta transform summing (or multiplying) over the stored support only."""
    check_dense_size(f.frame.n)
    ys = np.arange(1 << f.frame.n, dtype=np.int64)
    out = np.full(ys.size, f.neutral)
    for x, value in f.items():
        hit = _covering(x, ys, direction)
        if f.neutral == 0.0:
            out[hit] += value
        else:
            out[hit] *= value
    return out


def zeta_naive(f: SetFunction, direction: OrderDirection) -> SetFunction:
    return SetFunction.from_dense(f.frame, zeta_naive_dense(f, direction), f.neutral)


def mobius_naive_dense(
    g: np.ndarray,
    direction: OrderDirection,
    *,
    multiplicative: bool = False,
    mem_cap_bytes: int | None = None,
) -> np.ndarray:
    """Möbius inversion over the full powerset: ``f(y) = sum g(x) mu(x, y)``.

    With ``multiplicative`` the sum becomes a product with exponents ``mu``.
    """
    g = np.asarray(g, dtype=float)
    n = _frame_bits(g)
    check_dense_size(n)
    if mem_cap_bytes is not None and naive_bytes(n) > mem_cap_bytes:
        raise FrameTooLarge(f"naive inversion at N={n} needs about {naive_bytes(n)} bytes, cap is {mem_cap_bytes}")
    if direction is SUPERSET:
        # complementing every subset turns ⊇ into ⊆ and reverses the index order
        return mobius_naive_dense(g[::-1], SUBSET, multiplicative=multiplicative)[::-1].copy()
    indptr, indices, distance = _subset_pairs(n)
    mu = _boolean_mobius_by_distance(n)[distance]
    kernel = sparse.csr_matrix((mu, indices, indptr), shape=(g.size, g.size))
    if not multiplicative:
        return kernel @ g
    if np.any(np.abs(g) <= EPS):
        raise ZeroImage("multiplicative inversion needs nonzero images everywhere")
    log_abs = kernel @ np.log(np.abs(g))
    flips = abs(kernel) @ (g < 0).astype(float)
    return np.where(np.rint(flips) % 2 == 1, -1.0, 1.0) * np.exp(log_abs)


def mobius_naive(g: SetFunction, direction: OrderDirection) -> SetFunction:
    multiplicative = g.neutral == 1.0
    values = mobius_naive_dense(g.to_dense(), direction, multiplicative=multiplicative)
    return SetFunction.from_dense(g.frame, values, g.neutral)


# -- Fast Möbius Transform --------------------------------------------------

def fmt(
    values: Sequence[float] | np.ndarray,
    transform: Transform,
    direction: OrderDirection,
    *,
    multiplicative: bool = False,
    mem_cap_bytes: int = DEFAULT_MEM_CAP_BYTES,
) -> np.ndarray:
    """N-pass butterfly over a dense array indexed by subset mask.

    Returns a new array; the input is left untouched.
    """
    a = np.array(values, dtype=float)
    n = _frame_bits(a)
    check_mem_cap(n, mem_cap_bytes)
    if multiplicative and transform is MOBIUS and np.any(np.abs(a) <= EPS):
        raise ZeroImage("multiplicative inversion needs nonzero images everywhere")
    for i in range(n):
        pairs = a.reshape(-1, 2, 1 << i)
        without_bit, with_bit = pairs[:, 0, :], pairs[:, 1, :]
        # SUBSET: the partner below y is y without bit i; SUPERSET: y with bit i
        dst, src = (with_bit, without_bit) if direction is SUBSET else (without_bit, with_bit)
        if transform is ZETA:
            if multiplicative:
                dst *= src
            else:
                dst += src
        elif multiplicative:
            dst /= src
        else:
            dst -= src
    return a
