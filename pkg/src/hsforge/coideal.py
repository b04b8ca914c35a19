"""Multi-indices and finite co-ideals (downward-closed subsets) of N^q."""

from __future__ import annotations

import itertools
from math import comb, prod
from typing import Iterable, Iterator

from .config import settings

MultiIndex = tuple[int, ...]


class CoIdealError(ValueError):
    pass


def leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    if len(alpha) != len(beta):
        raise CoIdealError(f"length mismatch: {alpha} vs {beta}")
    return all(a <= b for a, b in zip(alpha, beta))


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


def sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a - b for a, b in zip(alpha, beta))


def scale(n: int, alpha: MultiIndex) -> MultiIndex:
    return tuple(n * a for a in alpha)


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def grlex_key(alpha: MultiIndex):
    return (sum(alpha), alpha)


def _check_cap(n: int):
    if n > settings.member_cap:
        raise CoIdealError(f"co-ideal would have {n} members, above cap {settings.member_cap}")


def is_coideal(q: int, members: Iterable[MultiIndex]) -> bool:
    """Downward closure, checked through the immediate predecessors of each member."""
    s = {tuple(m) for m in members}
    if any(len(m) != q or min(m, default=0) < 0 for m in s):
        return False
    for m in s:
        for i in range(q):
            if m[i] > 0 and m[:i] + (m[i] - 1,) + m[i + 1:] not in s:
                return False
    return True


class CoIdeal:
    """Finite co-ideal of N^q, members kept in graded-lex order."""

    __slots__ = ("q", "members", "_set", "_index")

    def __init__(self, q: int, members: Iterable[MultiIndex], check: bool = True):
        if q < 1:
            raise CoIdealError("q must be >= 1")
        ms = sorted({tuple(int(x) for x in m) for m in members}, key=grlex_key)
        _check_cap(len(ms))
        if check:
            if not ms:
                raise CoIdealError("co-ideal must be non-empty")
            if not is_coideal(q, ms):
                raise CoIdealError("member set is not downward closed")
        self.q = q
        self.members: tuple[MultiIndex, ...] = tuple(ms)
        self._set = frozenset(ms)
        self._index = {m: k for k, m in enumerate(ms)}

    @property
    def zero(self) -> MultiIndex:
        return (0,) * self.q

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self._set

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def index(self, alpha: MultiIndex) -> int:
        return self._index[tuple(alpha)]

    def nonzero(self) -> tuple[MultiIndex, ...]:
        return tuple(m for m in self.members if any(m))

    def issubset(self, other: "CoIdeal") -> bool:
        return self.q == other.q and self._set <= other._set

    def __eq__(self, other):
        if not isinstance(other, CoIdeal):
            return NotImplemented
        return self.q == other.q and self._set == other._set

    def __hash__(self):
        return hash((self.q, self._set))

    def __repr__(self):
        return f"CoIdeal(q={self.q}, size={len(self)})"

    def outer_corners(self) -> list[MultiIndex]:
        """Minimal elements of the complement: the monomials generating the ideal."""
        cand = set()
        for m in self.members:
            for i in range(self.q):
                nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
                if nxt not in self._set:
                    cand.add(nxt)
        out = []
        for c in cand:
            preds = [c[:i] + (c[i] - 1,) + c[i + 1:] for i in range(self.q) if c[i] > 0]
            if all(p in self._set for p in preds):
                out.append(c)
        return sorted(out, key=grlex_key)


def box_coideal(b: MultiIndex) -> CoIdeal:
    b = tuple(int(x) for x in b)
    if any(x < 0 for x in b):
        raise CoIdealError("box corner must be non-negative")
    _check_cap(prod(x + 1 for x in b))
    return CoIdeal(len(b), itertools.product(*(range(x + 1) for x in b)), check=False)


def _compositions(q: int, r: int) -> Iterator[MultiIndex]:
    """All alpha in N^q with |alpha| <= r."""
    if q == 1:
        for a in range(r + 1):
            yield (a,)
        return
    for a in range(r + 1):
        for rest in _compositions(q - 1, r - a):
            yield (a,) + rest


def total_degree_coideal(q: int, r: int) -> CoIdeal:
    if q < 1 or r < 0:
        raise CoIdealError("need q >= 1 and r >= 0")
    _check_cap(comb(r + q, q))
    return CoIdeal(q, _compositions(q, r), check=False)


def uni_coideal(m: int) -> CoIdeal:
    return box_coideal((m,))


def intersect(a: CoIdeal, b: CoIdeal) -> CoIdeal:
    if a.q != b.q:
        raise CoIdealError("co-ideals live in different N^q")
    return CoIdeal(a.q, a._set & b._set, check=False)


def degree_truncation(delta: CoIdeal, r: int) -> CoIdeal:
    """``delta ∩ {|alpha| <= r}``, the r-th level of the total-degree tower."""
    return CoIdeal(delta.q, (m for m in delta if sum(m) <= r), check=False)


def product_coideal(a: CoIdeal, b: CoIdeal) -> CoIdeal:
    _check_cap(len(a) * len(b))
    return CoIdeal(a.q + b.q, (x + y for x in a for y in b), check=False)
