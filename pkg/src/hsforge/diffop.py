"""Order of linear differential operators on a finite algebra.

P has order ≤ d when every (d+1)-fold nested commutator with multiplication
operators vanishes.  Since ``Q -> [Q, mult(a)]`` is linear in both Q and a, it
suffices to track the span of the nested commutators with basis elements,
reduced to a basis at every level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import FiniteAlgebra, LinOp, mult_operator, op_bracket
from .hs import HSDeriv
from .linalg import row_basis


@dataclass
class OrderReport:
    operator: LinOp
    claimed_bound: int
    verdict: bool


@lru_cache(maxsize=32)
def _mult_matrices(A: FiniteAlgebra) -> np.ndarray:
    return np.stack([mult_operator(A, A.basis_vector(i)).matrix for i in range(A.dim)])


def _commutator_span(A: FiniteAlgebra, span: np.ndarray) -> np.ndarray:
    """Basis of the span of ``[Q, mult(b_i)]`` over rows Q of ``span`` (flattened matrices)."""
    n = A.dim
    Q = span.reshape(-1, 1, n, n)
    M = _mult_matrices(A)[None]
    brackets = A.field.reduce(Q @ M - M @ Q).reshape(-1, n * n)
    return row_basis(A.field, brackets)


def order_leq(P: LinOp, d: int) -> bool:
    if d < -1:
        raise ValueError("bound must be at least -1")
    A = P.algebra
    span = row_basis(A.field, P.matrix.reshape(1, -1))
    for _ in range(d + 1):
        if len(span) == 0:
            return True
        span = _commutator_span(A, span)
    return len(span) == 0


def operator_order(P: LinOp) -> int:
    """Smallest d with order ≤ d; -1 for the zero operator."""
    A = P.algebra
    span = row_basis(A.field, P.matrix.reshape(1, -1))
    d = -1
    while len(span):
        span = _commutator_span(A, span)
        d += 1
    return d


def lemma44_defect(D: HSDeriv, E: HSDeriv) -> tuple[LinOp, OrderReport]:
    """``[D_m, E_n] - D_{m-1} E_{n-1} [D_1, E_1]`` and whether its order is at most m+n-2."""
    m, n = D.length, E.length
    if m < 1 or n < 1:
        raise ValueError("lengths must be at least 1")
    lead = op_bracket(D.coeff((m,)), E.coeff((n,)))
    correction = D.coeff((m - 1,)) @ E.coeff((n - 1,)) @ op_bracket(D.coeff((1,)), E.coeff((1,)))
    defect = lead - correction
    bound = m + n - 2
    return defect, OrderReport(defect, bound, order_leq(defect, bound))
