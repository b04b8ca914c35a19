"""Truncated power series with operator coefficients, R[[s]]_Delta with R = End_k(A).

Coefficients are stored sparsely (only nonzero operators); each operator is a
dense matrix.  The unit group U(R; Delta) is the set of series whose constant
coefficient is the identity.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .algebra import FiniteAlgebra, LinOp
from .coideal import CoIdeal, MultiIndex, add, leq, sub


class SeriesError(ValueError):
    pass


class OpSeries:
    __slots__ = ("algebra", "coideal", "coeffs")

    def __init__(self, algebra: FiniteAlgebra, coideal: CoIdeal, coeffs: Mapping[MultiIndex, LinOp] = ()):
        self.algebra = algebra
        self.coideal = coideal
        clean: dict[MultiIndex, LinOp] = {}
        for alpha, op in dict(coeffs).items():
            alpha = tuple(alpha)
            if alpha not in coideal:
                raise SeriesError(f"index {alpha} is outside the co-ideal")
            if op.algebra != algebra:
                raise SeriesError("coefficient acts on a different algebra")
            if not op.is_zero():
                clean[alpha] = op
        self.coeffs = clean

    @classmethod
    def identity(cls, algebra: FiniteAlgebra, coideal: CoIdeal) -> "OpSeries":
        return cls(algebra, coideal, {coideal.zero: LinOp.identity(algebra)})

    @classmethod
    def from_sequence(cls, algebra: FiniteAlgebra, ops: Iterable[LinOp]) -> "OpSeries":
        """Uni-variate series ``(ops[0], ops[1], ...)`` of length ``len(ops) - 1``."""
        from .coideal import uni_coideal
        ops = list(ops)
        return cls(algebra, uni_coideal(len(ops) - 1), {(n,): op for n, op in enumerate(ops)})

    @property
    def q(self) -> int:
        return self.coideal.q

    @property
    def length(self) -> int:
        """For uni-variate series: the largest index of the co-ideal."""
        if self.q != 1:
            raise SeriesError("length is defined for uni-variate series only")
        return self.coideal.members[-1][0]

    def coeff(self, alpha) -> LinOp:
        alpha = tuple(alpha)
        op = self.coeffs.get(alpha)
        if op is not None:
            return op
        if alpha not in self.coideal:
            raise SeriesError(f"index {alpha} is outside the co-ideal")
        return LinOp.zero(self.algebra)

    __getitem__ = coeff

    def sequence(self) -> list[LinOp]:
        """Coefficients ``[D_0, ..., D_m]`` of a uni-variate series."""
        return [self.coeff((n,)) for n in range(self.length + 1)]

    def support(self) -> list[MultiIndex]:
        return [a for a in self.coideal if a in self.coeffs]

    def is_unit(self) -> bool:
        return self.coeff(self.coideal.zero) == LinOp.identity(self.algebra)

    def _compatible(self, other: "OpSeries"):
        if self.algebra != other.algebra:
            raise SeriesError("series over different algebras")
        if self.coideal != other.coideal:
            raise SeriesError("series over different co-ideals")

    def __eq__(self, other):
        if not isinstance(other, OpSeries):
            return NotImplemented
        if self.algebra != other.algebra or self.coideal != other.coideal:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(np.array_equal(op.matrix, other.coeffs[a].matrix) for a, op in self.coeffs.items())

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.algebra!r}, {self.coideal!r}, support={self.support()})"

    def __matmul__(self, other: "OpSeries") -> "OpSeries":
        return series_mul(self, other)


def series_mul(r: OpSeries, r2: OpSeries) -> OpSeries:
    """Cauchy product, discarding indices that leave the co-ideal."""
    r._compatible(r2)
    f = r.algebra.field
    delta = r.coideal
    acc: dict[MultiIndex, np.ndarray] = {}
    for beta, P in r.coeffs.items():
        for gamma, Q in r2.coeffs.items():
            alpha = add(beta, gamma)
            if alpha not in delta:
                continue
            prod = f.reduce(P.matrix @ Q.matrix)
            if alpha in acc:
                acc[alpha] = acc[alpha] + prod
            else:
                acc[alpha] = prod
    A = r.algebra
    return OpSeries(A, delta, {a: LinOp(A, f.reduce(m), reduce=False) for a, m in acc.items()})


def series_inverse(r: OpSeries) -> OpSeries:
    """Two-sided inverse of a unit, by graded recursion in graded-lex order."""
    if not r.is_unit():
        raise SeriesError("constant coefficient is not the identity")
    A = r.algebra
    f = A.field
    zero = r.coideal.zero
    rest = [(b, P.matrix) for b, P in r.coeffs.items() if b != zero]
    inv: dict[MultiIndex, np.ndarray] = {zero: A.identity_matrix}
    for alpha in r.coideal.members[1:]:
        acc = None
        for beta, P in rest:
            if not leq(beta, alpha):
                continue
            prev = inv.get(sub(alpha, beta))
            if prev is None:
                continue
            term = f.reduce(P @ prev)
            acc = term if acc is None else acc + term
        if acc is not None:
            m = f.reduce(-acc)
            if np.any(m):
                inv[alpha] = m
    return OpSeries(A, r.coideal, {a: LinOp(A, m, reduce=False) for a, m in inv.items()})


def truncate(r: OpSeries, sub_coideal: CoIdeal) -> OpSeries:
    if not sub_coideal.issubset(r.coideal):
        raise SeriesError("target co-ideal is not contained in the source co-ideal")
    return OpSeries(r.algebra, sub_coideal, {a: op for a, op in r.coeffs.items() if a in sub_coideal})


def ordered_compose(family: Iterable[OpSeries], algebra: FiniteAlgebra | None = None,
                    coideal: CoIdeal | None = None) -> OpSeries:
    """Left-to-right product ``r_1 r_2 ... r_n``; the identity for an empty family."""
    family = list(family)
    if not family:
        if algebra is None or coideal is None:
            raise SeriesError("empty family needs an explicit algebra and co-ideal")
        return OpSeries.identity(algebra, coideal)
    out = family[0]
    for r in family[1:]:
        out = series_mul(out, r)
    return out


def series_power(r: OpSeries, n: int) -> OpSeries:
    out = OpSeries.identity(r.algebra, r.coideal)
    for _ in range(n):
        out = series_mul(out, r)
    return out
