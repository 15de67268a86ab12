"""Seeded random instances for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .dst import MassFunction
from .lattice import Frame, SetFunction


def random_mask(rng: np.random.Generator, n: int) -> int:
    bits = rng.integers(0, 2, size=n)
    return int(sum(1 << i for i in np.flatnonzero(bits).tolist()))


def random_masks(rng: np.random.Generator, n: int, k: int, exclude=()) -> list[int]:
    """``k`` distinct uniform subsets (fewer if the powerset is too small)."""
    seen = set(exclude)
    out = []
    limit = (1 << n) - len(seen)
    while len(out) < min(k, limit):
        mask = random_mask(rng, n)
        if mask not in seen:
            seen.add(mask)
            out.append(mask)
    return out


def random_mass(
    rng: np.random.Generator,
    n: int,
    k: int,
    *,
    include_full: bool = False,
    include_empty: bool = False,
    frame: Frame | None = None,
) -> MassFunction:
    """Mass on ``k`` random subsets (forced ones included in the count)."""
    frame = Frame.of_size(n) if frame is None else frame
    forced = ([frame.full] if include_full else []) + ([0] if include_empty else [])
    forced = list(dict.fromkeys(forced))
    masks = forced + random_masks(rng, n, max(k - len(forced), 0), exclude=forced)
    weights = rng.uniform(0.05, 1.0, size=len(masks))
    weights /= weights.sum()
    return MassFunction(frame, zip(masks, weights.tolist()))


def random_set_function(
    rng: np.random.Generator, n: int, k: int, *, positive: bool = False, neutral: float = 0.0
) -> SetFunction:
    """Signed (or strictly positive) values on ``k`` random subsets."""
    frame = Frame.of_size(n)
    masks = random_masks(rng, n, k)
    if positive:
        values = np.exp(rng.normal(0.0, 0.3, size=len(masks)))
    else:
        values = rng.uniform(-1.0, 1.0, size=len(masks))
        values += np.where(values >= 0, 0.05, -0.05)
    return SetFunction(frame, zip(masks, values.tolist()), neutral)
