"""Finite-dimensional commutative algebras and their k-linear endomorphisms.

An algebra is stored by its structure constants in coordinate form
(``b_i * b_j = sum_l c[i, j, l] b_l``), keeping only the nonzero entries so
that large monomial quotients stay cheap.  A dense copy of the tensor is built
on demand for small dimensions, where it makes products a pair of matmuls.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .config import settings
from .fields import FieldSpec

_DENSE_LIMIT = 128


class AlgebraError(ValueError):
    pass


class FiniteAlgebra:
    """Commutative, associative, unital algebra with a fixed basis.

    ``coo`` is a tuple ``(i, j, l, c)`` of equal-length arrays listing the
    nonzero structure constants.  ``generators[t]`` is the basis index of the
    t-th variable, or ``None`` when that variable is zero in the algebra.
    """

    def __init__(self, field: FieldSpec, basis_labels, coo, unit_index: int,
                 generators=(), exponents=None, check: bool = True):
        self.field = field
        self.basis_labels = [tuple(b) for b in basis_labels]
        self.dim = len(self.basis_labels)
        if self.dim < 1:
            raise AlgebraError("algebra must have dimension >= 1")
        ci, cj, cl, cv = coo
        self._ci = np.asarray(ci, dtype=np.int64)
        self._cj = np.asarray(cj, dtype=np.int64)
        self._cl = np.asarray(cl, dtype=np.int64)
        self._cv = field.array(cv)
        self.unit_index = unit_index
        self.generators = list(generators)
        self.exponents = None if exponents is None else tuple(exponents)
        if check:
            self._check_axioms()

    @classmethod
    def from_struct_consts(cls, field: FieldSpec, c, unit_index: int, basis_labels=None,
                           generators=(), check: bool = True) -> "FiniteAlgebra":
        c = field.array(c)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise AlgebraError("structure constants must be a dim x dim x dim table")
        i, j, l = np.nonzero(c)
        labels = basis_labels if basis_labels is not None else [(k,) for k in range(n)]
        return cls(field, labels, (i, j, l, c[i, j, l]), unit_index, generators, check=check)

    # -- identity -----------------------------------------------------------

    @cached_property
    def _key(self):
        entries = sorted(zip(self._ci.tolist(), self._cj.tolist(), self._cl.tolist(),
                             (self.field.fmt(v) for v in self._cv)))
        return (self.field, tuple(self.basis_labels), self.unit_index, tuple(entries))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.exponents is not None:
            return f"FiniteAlgebra({self.field}, exponents={list(self.exponents)}, dim={self.dim})"
        return f"FiniteAlgebra({self.field}, dim={self.dim})"

    # -- structure ----------------------------------------------------------

    @cached_property
    def struct_consts(self) -> np.ndarray:
        c = self.field.zeros((self.dim, self.dim, self.dim))
        c[self._ci, self._cj, self._cl] = self._cv
        return c

    @cached_property
    def _dense_right(self) -> np.ndarray:
        # rows (a, l), columns b: used as T[a, l, j] = sum_b c[a, b, l] V[b, j]
        return np.ascontiguousarray(self.struct_consts.transpose(0, 2, 1)).reshape(self.dim * self.dim, self.dim)

    def products(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """``W[:, i, j] = U[:, i] * V[:, j]`` for coordinate columns ``U``, ``V``."""
        f = self.field
        d = self.dim
        n, m = U.shape[1], V.shape[1]
        if d <= _DENSE_LIMIT:
            T = f.reduce(self._dense_right @ V).reshape(d, d * m)      # (a, l*m)
            W = f.reduce(U.T @ T).reshape(n, d, m)                      # (i, l, j)
            return np.ascontiguousarray(W.transpose(1, 0, 2))
        contrib = f.reduce(self._cv[:, None] * U[self._ci, :])         # (nnz, n)
        contrib = f.reduce(contrib[:, :, None] * V[self._cj, None, :])  # (nnz, n, m)
        W = f.zeros((d, n * m))
        np.add.at(W, self._cl, contrib.reshape(len(self._cl), n * m))
        return f.reduce(W).reshape(d, n, m)

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.products(u[:, None], v[:, None])[:, 0, 0]

    def basis_vector(self, i: int) -> np.ndarray:
        e = self.field.zeros(self.dim)
        e[i] = self.field.scalar(1)
        return e

    @property
    def one(self) -> np.ndarray:
        return self.basis_vector(self.unit_index)

    @property
    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def element(self, coords) -> np.ndarray:
        v = self.field.array(coords)
        if v.shape != (self.dim,):
            raise AlgebraError(f"element must have {self.dim} coordinates, got shape {v.shape}")
        return v

    def index_of(self, label) -> int:
        return self.basis_labels.index(tuple(label))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.field.random(rng, self.dim)

    @cached_property
    def identity_matrix(self) -> np.ndarray:
        return self.field.eye(self.dim)

    @cached_property
    def basis_products(self) -> np.ndarray:
        """``P[:, i, j]`` = coordinates of ``b_i * b_j``."""
        I = self.identity_matrix
        return self.products(I, I)

    def _check_axioms(self):
        f, d = self.field, self.dim
        if not 0 <= self.unit_index < d:
            raise AlgebraError("unit index out of range")
        P = self.basis_products
        if not np.array_equal(P, P.transpose(0, 2, 1)):
            raise AlgebraError("multiplication is not commutative")
        unit = P[:, self.unit_index, :]
        if not np.array_equal(unit, self.identity_matrix):
            raise AlgebraError(f"basis element {self.unit_index} is not a unit")
        P2 = P.reshape(d, d * d)
        I = self.identity_matrix
        # (b_i b_j) b_k == b_i (b_j b_k), one i at a time to bound memory
        for i in range(d):
            left = self.products(P[:, i, :], I)                        # (l, j, k)
            right = self.products(I[:, i:i + 1], P2).reshape(d, d, d)  # (l, j, k)
            if not np.array_equal(left, right):
                raise AlgebraError(f"multiplication is not associative (first bad index {i})")


def make_monomial_quotient(field: FieldSpec, exponents) -> FiniteAlgebra:
    """``k[x_1..x_n] / (x_1^{e_1}, ..., x_n^{e_n})`` with its monomial basis.

    Basis monomials ``x^a`` (``a_i < e_i``) are ordered with the exponent of
    ``x_1`` varying fastest, e.g. ``1, x, x^2, y, xy, ...`` for ``[3, 3]``.
    """
    exps = [int(e) for e in exponents]
    if not exps:
        raise AlgebraError("need at least one variable")
    if any(e < 1 for e in exps):
        raise AlgebraError("exponents must be >= 1")
    dim = int(np.prod(exps))
    if dim > settings.dim_cap:
        raise AlgebraError(f"dimension {dim} exceeds cap {settings.dim_cap}")
    n = len(exps)
    labels = np.array([tuple(reversed(t)) for t in itertools.product(*(range(e) for e in reversed(exps)))],
                      dtype=np.int64).reshape(dim, n)
    strides = np.cumprod([1] + exps[:-1]).astype(np.int64)
    s = labels[:, None, :] + labels[None, :, :]
    ok = np.all(s < np.asarray(exps), axis=2)
    i, j = np.nonzero(ok)
    l = s[i, j] @ strides
    coo = (i, j, l, np.ones(len(i), dtype=np.int64))
    gens = [int(strides[t]) if exps[t] > 1 else None for t in range(n)]
    return FiniteAlgebra(field, [tuple(int(x) for x in row) for row in labels], coo, 0, gens, exponents=exps)


class LinOp:
    """A k-linear endomorphism of an algebra; column ``j`` is the image of ``b_j``."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: FiniteAlgebra, matrix, reduce: bool = True):
        m = algebra.field.array(matrix) if reduce else matrix
        if m.shape != (algebra.dim, algebra.dim):
            raise AlgebraError(f"operator must be {algebra.dim}x{algebra.dim}, got {m.shape}")
        self.algebra = algebra
        self.matrix = m

    @classmethod
    def identity(cls, algebra: FiniteAlgebra) -> "LinOp":
        return cls(algebra, algebra.identity_matrix.copy(), reduce=False)

    @classmethod
    def zero(cls, algebra: FiniteAlgebra) -> "LinOp":
        return cls(algebra, algebra.field.zeros((algebra.dim, algebra.dim)), reduce=False)

    @classmethod
    def random(cls, algebra: FiniteAlgebra, rng: np.random.Generator) -> "LinOp":
        return cls(algebra, algebra.field.random(rng, (algebra.dim, algebra.dim)), reduce=False)

    def _same(self, other: "LinOp"):
        if not isinstance(other, LinOp):
            raise TypeError(f"expected LinOp, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraError("operators act on different algebras")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def __matmul__(self, other: "LinOp") -> "LinOp":
        self._same(other)
        return LinOp(self.algebra, self.field.matmul(self.matrix, other.matrix), reduce=False)

    def __add__(self, other: "LinOp") -> "LinOp":
        self._same(other)
        return LinOp(self.algebra, self.field.reduce(self.matrix + other.matrix), reduce=False)

    def __sub__(self, other: "LinOp") -> "LinOp":
        self._same(other)
        return LinOp(self.algebra, self.field.reduce(self.matrix - other.matrix), reduce=False)

    def __neg__(self) -> "LinOp":
        return LinOp(self.algebra, self.field.reduce(-self.matrix), reduce=False)

    def scale(self, c) -> "LinOp":
        return LinOp(self.algebra, self.field.reduce(self.matrix * self.field.scalar(c)), reduce=False)

    def __pow__(self, n: int) -> "LinOp":
        out = LinOp.identity(self.algebra)
        for _ in range(n):
            out = out @ self
        return out

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.field.reduce(self.matrix @ v)

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def __repr__(self):
        rows = "; ".join(" ".join(self.field.fmt(x) for x in row) for row in self.matrix)
        return f"LinOp([{rows}])"


def mult_operator(A: FiniteAlgebra, a) -> LinOp:
    """Matrix of ``x -> a * x``."""
    a = A.element(a)
    return LinOp(A, A.products(a[:, None], A.identity_matrix)[:, 0, :], reduce=False)


def op_compose(P: LinOp, Q: LinOp) -> LinOp:
    return P @ Q


def op_add(P: LinOp, Q: LinOp) -> LinOp:
    return P + Q


def op_sub(P: LinOp, Q: LinOp) -> LinOp:
    return P - Q


def op_scale(P: LinOp, c) -> LinOp:
    return P.scale(c)


def op_bracket(P: LinOp, Q: LinOp) -> LinOp:
    return P @ Q - Q @ P


def is_k_derivation(A: FiniteAlgebra, T: LinOp) -> bool:
    """Whether ``T(ab) = T(a) b + a T(b)`` on every pair of basis elements."""
    if T.algebra != A:
        raise AlgebraError("operator does not act on this algebra")
    f, d = A.field, A.dim
    lhs = f.matmul(T.matrix, A.basis_products.reshape(d, d * d)).reshape(d, d, d)
    I = A.identity_matrix
    rhs = f.reduce(A.products(T.matrix, I) + A.products(I, T.matrix))
    return bool(np.array_equal(lhs, rhs))
