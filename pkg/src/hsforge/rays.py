"""Rational rays of N^q_+ and their recursive total order.

Every nonzero multi-index lies on exactly one ray ``N_+ * beta`` with
``beta`` primitive (entries with gcd 1).  Primitive vectors are ordered by
slope comparison of their first two coordinates, recursing on
``(gcd(b1, b2), b3, ..., bq)`` when those slopes tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cmp_to_key, lru_cache, reduce
from math import gcd

from .coideal import CoIdeal, MultiIndex, scale


class RayError(ValueError):
    pass


class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def gcd_vec(beta: MultiIndex) -> int:
    return reduce(gcd, beta, 0)


def primitive(beta: MultiIndex) -> MultiIndex:
    g = gcd_vec(beta)
    if g == 0:
        raise RayError("the zero vector lies on no ray")
    return tuple(b // g for b in beta)


def is_primitive(beta: MultiIndex) -> bool:
    return gcd_vec(beta) == 1


def g_map(beta: MultiIndex) -> tuple[int, int]:
    """Primitive form of the first two coordinates, or ``(0, 0)``."""
    if len(beta) < 2:
        raise RayError("g_map needs q >= 2")
    b1, b2 = beta[0], beta[1]
    g = gcd(b1, b2)
    if g == 0:
        return (0, 0)
    return (b1 // g, b2 // g)


def _cmp2(b, c) -> Cmp:
    lhs, rhs = c[1] * b[0], c[0] * b[1]
    if lhs < rhs:
        return Cmp.LESS
    if lhs > rhs:
        return Cmp.GREATER
    return Cmp.EQUAL


@lru_cache(maxsize=1 << 18)
def _cmp(b: MultiIndex, c: MultiIndex) -> Cmp:
    q = len(b)
    if q == 1:
        return Cmp.EQUAL
    if q == 2:
        return _cmp2(b, c)
    gb, gc = g_map(b), g_map(c)
    zb, zc = gb == (0, 0), gc == (0, 0)
    if zb and not zc:
        return Cmp.LESS
    if zc and not zb:
        return Cmp.GREATER
    if gb != gc:
        return _cmp2(gb, gc)
    return _cmp((gcd(b[0], b[1]),) + b[2:], (gcd(c[0], c[1]),) + c[2:])


def ray_compare(beta: MultiIndex, gamma: MultiIndex) -> Cmp:
    """Compare the rays through two nonzero vectors of the same length."""
    if len(beta) != len(gamma):
        raise RayError(f"length mismatch: {beta} vs {gamma}")
    return _cmp(primitive(tuple(beta)), primitive(tuple(gamma)))


ray_key = cmp_to_key(ray_compare)


def sorted_rays(delta: CoIdeal) -> list[MultiIndex]:
    """Primitive members of ``delta`` in ascending ray order."""
    prims = {primitive(m) for m in delta.nonzero()}
    if not prims:
        raise RayError("co-ideal {0} has no rays")
    return sorted(prims, key=ray_key)


@dataclass(frozen=True)
class RayData:
    beta: MultiIndex
    coideal: CoIdeal
    multiplicity: int
    orbit: tuple[MultiIndex, ...]


def multiplicity(delta: CoIdeal, beta: MultiIndex) -> int:
    n = 0
    while scale(n + 1, beta) in delta:
        n += 1
    return n


def ray_data(delta: CoIdeal, beta: MultiIndex) -> RayData:
    beta = tuple(beta)
    if not is_primitive(beta):
        raise RayError(f"{beta} is not primitive")
    if beta not in delta:
        raise RayError(f"{beta} is not a member of the co-ideal")
    m = multiplicity(delta, beta)
    return RayData(beta, delta, m, tuple(scale(n, beta) for n in range(1, m + 1)))


def in_T(delta: CoIdeal, beta: MultiIndex, gamma: MultiIndex) -> bool:
    """``gamma`` lies on a ray at or after ``beta``."""
    return gamma in delta and any(gamma) and ray_compare(gamma, beta) != Cmp.LESS


def in_S(delta: CoIdeal, beta: MultiIndex, gamma: MultiIndex) -> bool:
    """``gamma`` lies on a ray strictly before ``beta``."""
    return gamma in delta and any(gamma) and ray_compare(gamma, beta) == Cmp.LESS


def S_set(delta: CoIdeal, beta: MultiIndex) -> list[MultiIndex]:
    return [g for g in delta.nonzero() if ray_compare(g, beta) == Cmp.LESS]


def T_set(delta: CoIdeal, beta: MultiIndex) -> list[MultiIndex]:
    return [g for g in delta.nonzero() if ray_compare(g, beta) != Cmp.LESS]


def P_set(delta: CoIdeal, beta: MultiIndex) -> list[MultiIndex]:
    return [g for g in delta.nonzero() if primitive(g) == tuple(beta)]
