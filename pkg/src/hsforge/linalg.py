"""Gaussian elimination over an exact field.

Row operations are vectorised with numpy; the same code serves F_p (int64)
and Q (object arrays of Fractions).
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec


def rref(field: FieldSpec, mat: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``mat``.

    Pivots are searched only among the first ``ncols`` columns (all of them by
    default), which lets callers reduce an augmented matrix.
    """
    a = field.reduce(np.array(mat, copy=True))
    rows, cols = a.shape
    if ncols is None:
        ncols = cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = field.reduce(a[hit] - np.outer(col[hit], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: FieldSpec, mat: np.ndarray) -> int:
    return len(rref(field, mat)[1])


def nullspace(field: FieldSpec, mat: np.ndarray) -> np.ndarray:
    """Basis of ``{x : mat @ x = 0}`` as the rows of the returned array."""
    r, piv = rref(field, mat)
    n = mat.shape[1]
    free = [c for c in range(n) if c not in set(piv)]
    basis = field.zeros((len(free), n))
    one = field.scalar(1)
    for t, f in enumerate(free):
        basis[t, f] = one
        for i, pc in enumerate(piv):
            basis[t, pc] = -r[i, f]
    return field.reduce(basis)


def solve_affine(field: FieldSpec, mat: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve ``mat @ x = rhs``.

    Returns ``(x0, kernel)`` where ``x0`` is the solution with every free
    variable set to zero (``None`` when inconsistent) and the rows of ``kernel``
    span the homogeneous solutions.
    """
    rows, n = mat.shape
    aug = field.zeros((rows, n + 1))
    aug[:, :n] = mat
    aug[:, n] = rhs
    r, piv = rref(field, aug, ncols=n)
    kernel = nullspace(field, mat)
    k = len(piv)
    if k < rows and np.any(r[k:, n]):
        return None, kernel
    x = field.zeros(n)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n]
    return x, kernel


def row_basis(field: FieldSpec, mat: np.ndarray) -> np.ndarray:
    """Nonzero rows of the reduced echelon form: a basis of the row span."""
    if mat.shape[0] == 0:
        return mat
    r, piv = rref(field, mat)
    return r[: len(piv)]
