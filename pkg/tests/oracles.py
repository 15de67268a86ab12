"""Brute-force reference implementations, written straight from the definitions.

Deliberately slow and free of the package's own algorithms: plain loops
over the powerset, pairwise joins until a fixpoint, closed-form Möbius
values.
"""

from __future__ import annotations

import functools
import itertools
import math


def subsets(n):
    return range(1 << n)


def is_le(x, y, superset=False):
    return (y & ~x) == 0 if superset else (x & ~y) == 0


def zeta(f, n, superset=False, product=False):
    """g(y) = sum (or product) of f(x) over x <= y."""
    out = {}
    for y in subsets(n):
        acc = 1.0 if product else 0.0
        for x, v in f.items():
            if is_le(x, y, superset):
                acc = acc * v if product else acc + v
        out[y] = acc
    return out


def mobius(g, n, superset=False):
    """f(y) = sum g(x) (-1)^(|y|-|x|) over x <= y, the closed form on the powerset."""
    out = {}
    for y in subsets(n):
        acc = 0.0
        for x in subsets(n):
            if is_le(x, y, superset):
                acc += g[x] * (-1) ** abs(y.bit_count() - x.bit_count())
        out[y] = acc
    return out


def closure(gens, superset=False):
    pts = set(gens)
    while True:
        new = {(a & b) if superset else (a | b) for a in pts for b in pts} - pts
        if not new:
            return pts
        pts |= new


def mu_subposet(x, y, domain, superset=False):
    """Möbius function of a finite poset from its defining sum, with memoization."""
    domain = list(domain)

    @functools.lru_cache(maxsize=None)
    def mu(a):
        if a == y:
            return 1
        return -sum(mu(z) for z in domain if z != a and is_le(a, z, superset) and is_le(z, y, superset))

    return mu(x)


def conjunctive(m1, m2):
    out = {}
    for (a, u), (b, v) in itertools.product(m1.items(), m2.items()):
        out[a & b] = out.get(a & b, 0.0) + u * v
    return out


def weights_from_commonality(q, n, top):
    """w(A) = prod over A <= B <= top of q(B) ** ((-1) ** (|B| - |A| + 1))."""
    out = {}
    for a in subsets(n):
        if a & ~top:
            continue
        acc = 1.0
        for b in subsets(n):
            if (a & ~b) == 0 and (b & ~top) == 0:
                acc *= q[b] ** ((-1) ** (b.bit_count() - a.bit_count() + 1))
        out[a] = acc
    return out


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
