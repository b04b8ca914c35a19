"""Integrability of derivations: explicit integrals and a staged search.

A derivation ``delta`` is m-integrable when some HS-derivation of length m has
``delta`` as its first component.  Two constructions produce such integrals
explicitly (commutators and p-th powers); for everything else there is a
greedy search that solves one affine system per degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .algebra import FiniteAlgebra, LinOp, is_k_derivation, op_bracket
from .coideal import MultiIndex, leq, uni_coideal
from .decompose import SupportError, peel_until
from .hs import (CertificationError, HSDeriv, external_product, hs_inverse, leibniz_check,
                 restrict_to_ray)
from .linalg import nullspace, solve_affine
from .rays import S_set, is_primitive, primitive
from .report import Certificate
from .series import OpSeries, series_mul, series_power, truncate


class IntegrabilityError(ValueError):
    pass


@dataclass
class IntegralCertificate:
    derivation: LinOp
    length: int
    integral: HSDeriv
    certificate: Certificate = field(default_factory=Certificate)

    @property
    def passed(self) -> bool:
        return self.certificate.passed

    def __bool__(self):
        return True


@dataclass
class SearchFailure:
    """The greedy search got stuck; this does not prove non-integrability."""

    derivation: LinOp
    length: int
    failed_step: int
    partial: HSDeriv
    reason: str = "no extension found along canonical path"

    passed = False

    def __bool__(self):
        return False


def _certify_integral(delta: LinOp, E: HSDeriv) -> IntegralCertificate:
    cert = Certificate()
    cert.add("component 1 equals derivation", E.coeff((1,)) == delta)
    rep = leibniz_check(E)
    cert.add("integral is an HS-derivation", rep.passed, "" if rep.passed else str(rep))
    return IntegralCertificate(delta, E.length, E, cert)


# -- commutators ------------------------------------------------------------------------

def bracket_series(D: HSDeriv, E: HSDeriv) -> HSDeriv:
    """``F = (D ⊠ E) ∘ (D* ⊠ E*)`` over ``box((m, m))``."""
    if D.q != 1 or E.q != 1:
        raise IntegrabilityError("bracket_integral takes uni-variate inputs")
    if D.length != E.length:
        raise IntegrabilityError(f"length mismatch: {D.length} vs {E.length}")
    if D.length < 1:
        raise IntegrabilityError("length must be at least 1")
    for X in (D, E):
        if not X.certified:
            rep = leibniz_check(X)
            if not rep.passed:
                raise CertificationError(f"input is not an HS-derivation: {rep}")
    F = series_mul(external_product(D, E), external_product(hs_inverse(D), hs_inverse(E)))
    return HSDeriv.wrap(F, certified=True)


def bracket_integral(D: HSDeriv, E: HSDeriv) -> IntegralCertificate:
    """An m-integral of ``[D_1, E_1]`` built from two length-m HS-derivations."""
    m = D.length
    F = bracket_series(D, E)
    axes = Certificate()
    for r in range(1, m + 1):
        for idx in ((0, r), (r, 0)):
            axes.add(f"F vanishes at {idx}", idx not in F.coeffs)
    if not axes.passed:
        raise CertificationError(f"commutator series is not trivial on the axes: {axes.summary()}")
    _, rest = peel_until(F, (1, 1))
    H = restrict_to_ray(rest, (1, 1))
    out = _certify_integral(op_bracket(D.coeff((1,)), E.coeff((1,))), H)
    out.certificate.checks[:0] = axes.checks
    return out


# -- p-th powers ------------------------------------------------------------------------

def _compositions(n: int, k: int):
    """Ordered k-tuples of positive integers summing to n."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def power_component_by_compositions(D: HSDeriv, p: int, n: int) -> LinOp:
    """``sum_k C(p,k) sum_{a_1+..+a_k=n, a_j>0} D_{a_1}...D_{a_k}``, reduced in the base field."""
    A = D.algebra
    acc = LinOp.zero(A)
    for k in range(1, min(p, n) + 1):
        c = comb(p, k)
        if A.field.p is not None and c % A.field.p == 0:
            continue
        inner = LinOp.zero(A)
        for a in _compositions(n, k):
            term = D.coeff((a[0],))
            for ai in a[1:]:
                term = term @ D.coeff((ai,))
            inner = inner + term
        acc = acc + inner.scale(c)
    return acc


def top_power_component(D: HSDeriv, p: int) -> LinOp:
    """``sum over |i| = N+1 with every i_j < N+1`` of ``D_{i_1}...D_{i_p}``, N the length of D."""
    A = D.algebra
    top = D.length + 1
    acc = LinOp.zero(A)
    ops = D.sequence()

    def rec(prefix_op: LinOp, remaining: int, slots: int):
        nonlocal acc
        if slots == 0:
            if remaining == 0:
                acc = acc + prefix_op
            return
        for i in range(0, min(remaining, top - 1) + 1):
            rec(prefix_op @ ops[i], remaining - i, slots - 1)

    rec(LinOp.identity(A), top, p)
    return acc


@dataclass
class PowerIntegral:
    derivation: LinOp
    length: int
    extended: HSDeriv
    certificate: Certificate
    integral: IntegralCertificate | SearchFailure | None = None

    @property
    def passed(self) -> bool:
        return self.certificate.passed and (self.integral is None or self.integral.passed)


def p_power_integral(D: HSDeriv, search: bool = False) -> PowerIntegral:
    """From D of length ``p^(a+1) - 1`` over F_p, an HS-derivation of length ``p^(a+1)``
    whose components vanish below p and equal ``D_1^p`` at p.

    That sequence witnesses ``D_1^p`` as ``p^a``-integrable; with ``search=True`` a
    ``p^a``-integral is also produced by the staged search.
    """
    p = D.algebra.field.p
    if p is None:
        raise IntegrabilityError("p-th power integrals need a prime field")
    if D.q != 1:
        raise IntegrabilityError("input must be uni-variate")
    N = D.length
    a, pk = 0, p
    while pk - 1 < N:
        pk *= p
        a += 1
    if pk - 1 != N:
        raise IntegrabilityError(f"length {N} is not of the form {p}^(a+1) - 1")
    if not D.certified:
        rep = leibniz_check(D)
        if not rep.passed:
            raise CertificationError(f"input is not an HS-derivation: {rep}")
    A = D.algebra
    powered = series_power(D, p)
    top = top_power_component(D, p)
    ops = powered.sequence() + [top]
    extended = OpSeries(A, uni_coideal(N + 1), {(n,): op for n, op in enumerate(ops)})
    cert = Certificate()
    padded = OpSeries(A, uni_coideal(N + 1), {(n,): op for n, op in enumerate(D.sequence())})
    cert.add("top term matches padded power", series_power(padded, p).coeff((N + 1,)) == top)
    for n in range(1, N + 1):
        cert.add(f"component {n} matches composition sum",
                 power_component_by_compositions(D, p, n) == ops[n])
    for n in range(1, p):
        cert.add(f"component {n} vanishes", ops[n].is_zero())
    delta_p = D.coeff((1,)) ** p
    cert.add(f"component {p} equals D_1^{p}", ops[p] == delta_p)
    rep = leibniz_check(extended)
    cert.add("extended sequence is an HS-derivation", rep.passed, "" if rep.passed else str(rep))
    E = HSDeriv.wrap(extended, certified=rep.passed)
    result = PowerIntegral(delta_p, p ** a, E, cert)
    if search:
        result.integral = is_m_integrable(delta_p, p ** a)
    return result


# -- staged search ----------------------------------------------------------------------

@lru_cache(maxsize=32)
def _leibniz_system(A: FiniteAlgebra) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrix of ``X -> X(b_i b_j) - X(b_i) b_j - b_i X(b_j)`` on unknowns ``X[u, t]``.

    Rows are indexed by ``(i, j, l)`` with ``i <= j``; the returned index arrays
    pick those pairs out of a full ``(l, i, j)`` right-hand side.
    """
    n = A.dim
    f = A.field
    c = A.struct_consts.astype(object) if f.p is None else A.struct_consts.astype(np.int64)
    eye = np.eye(n, dtype=c.dtype)
    # M[i, j, l, u, t]
    M = np.einsum("ijt,lu->ijlut", c, eye)
    M = M - np.einsum("ujl,ti->ijlut", c, eye)
    M = M - np.einsum("iul,tj->ijlut", c, eye)
    ii, jj = np.triu_indices(n)
    M = M[ii, jj].reshape(len(ii) * n, n * n)
    return f.reduce(M), ii, jj


def _extension_rhs(D: OpSeries) -> np.ndarray:
    """``sum_{0<k<m+1} D_k(b_i) D_{m+1-k}(b_j)`` laid out as ``[l, i, j]``."""
    A = D.algebra
    top = D.length + 1
    acc = np.zeros((A.dim,) * 3, dtype=A.field.dtype)
    for k in range(1, top):
        P, Q = D.coeffs.get((k,)), D.coeffs.get((top - k,))
        if P is None or Q is None:
            continue
        acc = acc + A.products(P.matrix, Q.matrix)
    return A.field.reduce(acc)


def extension_space(D: OpSeries) -> tuple[np.ndarray | None, np.ndarray]:
    """Affine solution set for the next component: a particular solution and a kernel basis.

    Solutions are flattened ``X[u, t]`` in row-major order.
    """
    A = D.algebra
    M, ii, jj = _leibniz_system(A)
    rhs = _extension_rhs(D)[:, ii, jj].T.reshape(-1)
    return solve_affine(A.field, M, rhs)


def extend_one_step(D: OpSeries, rng: np.random.Generator | None = None) -> LinOp | None:
    """A next component ``D_{m+1}`` keeping the Leibniz rule, or None if none exists.

    Without ``rng`` the free variables are set to zero; with it a uniformly
    random point of the solution set is returned.
    """
    A = D.algebra
    x0, kernel = extension_space(D)
    if x0 is None:
        return None
    if rng is not None and len(kernel):
        coef = A.field.random(rng, (len(kernel),))
        x0 = A.field.reduce(x0 + coef @ kernel)
    return LinOp(A, x0.reshape(A.dim, A.dim))


def derivation_basis(A: FiniteAlgebra) -> list[LinOp]:
    """A basis of the k-derivations of A."""
    M, _, _ = _leibniz_system(A)
    return [LinOp(A, row.reshape(A.dim, A.dim)) for row in nullspace(A.field, M)]


def _append(D: OpSeries, X: LinOp) -> HSDeriv:
    ops = D.sequence() + [X]
    return HSDeriv(D.algebra, uni_coideal(len(ops) - 1), {(n,): op for n, op in enumerate(ops)})


def is_m_integrable(delta: LinOp, m: int, rng: np.random.Generator | None = None,
                    restarts: int = 0) -> IntegralCertificate | SearchFailure:
    """Search for an m-integral of ``delta`` by extending ``(Id, delta)`` one degree at a time.

    The first pass uses the canonical solution at each degree.  ``restarts``
    extra passes draw random solutions from ``rng``.  A failure only says that
    no path tried reached length m.
    """
    A = delta.algebra
    if not is_k_derivation(A, delta):
        raise IntegrabilityError("input is not a k-derivation")
    if m < 1:
        raise IntegrabilityError("m must be at least 1")
    start = HSDeriv(A, uni_coideal(1), {(0,): LinOp.identity(A), (1,): delta})
    if restarts and rng is None:
        rng = np.random.default_rng(0)
    failure = None
    for attempt in range(restarts + 1):
        D = start
        chooser = None if attempt == 0 else rng
        while D.length < m:
            X = extend_one_step(D, chooser)
            if X is None:
                break
            D = _append(D, X)
        if D.length == m:
            return _certify_integral(delta, D)
        if failure is None or D.length + 1 > failure.failed_step:
            failure = SearchFailure(delta, m, D.length + 1, D)
    return failure


# -- integrals along a ray ----------------------------------------------------------------

@dataclass
class RayIntegralReport:
    ray: MultiIndex
    d: int
    s: int
    factor: HSDeriv
    certificate: Certificate
    integral: IntegralCertificate | SearchFailure

    @property
    def passed(self) -> bool:
        return self.certificate.passed and self.integral.passed


def ray_corollary_check(D: HSDeriv, alpha: MultiIndex, d: int, s: int,
                        restarts: int = 0) -> RayIntegralReport:
    """Show ``D_{d alpha}`` is ``p^s``-integrable when D vanishes below it off and on the ray.

    Hypotheses: characteristic p; ``d p^s alpha`` in the co-ideal; ``D_g = 0`` for
    every g on an earlier ray with ``g <= d alpha``; ``D_{r alpha} = 0`` for ``0 < r < d``.
    """
    p = D.algebra.field.p
    if p is None:
        raise IntegrabilityError("needs positive characteristic")
    alpha = tuple(alpha)
    if not is_primitive(alpha):
        raise IntegrabilityError(f"{alpha} is not primitive; its ray is {primitive(alpha)}")
    if d < 1 or s < 0:
        raise IntegrabilityError("need d >= 1 and s >= 0")
    delta = D.coideal
    L = d * p ** s
    far = tuple(L * a for a in alpha)
    if far not in delta:
        raise IntegrabilityError(f"{far} is not in the co-ideal")
    target = tuple(d * a for a in alpha)
    for g in S_set(delta, alpha):
        if leq(g, target) and g in D.coeffs:
            raise SupportError(f"D_{g} != 0 on an earlier ray below {target}", g)
    for r in range(1, d):
        g = tuple(r * a for a in alpha)
        if g in D.coeffs:
            raise SupportError(f"D_{g} != 0 below {target} on the ray", g)
    _, rest = peel_until(D, alpha)
    E = truncate(restrict_to_ray(rest, alpha), uni_coideal(L))
    E = HSDeriv.wrap(E, certified=True)
    cert = Certificate()
    for r in range(1, d + 1):
        cert.add(f"factor component {r} equals D at {r} * ray",
                 E.coeff((r,)) == D.coeff(tuple(r * a for a in alpha)))
    rep = leibniz_check(E)
    cert.add("truncated factor is an HS-derivation", rep.passed, "" if rep.passed else str(rep))
    found = is_m_integrable(D.coeff(target), p ** s, restarts=restarts)
    return RayIntegralReport(alpha, d, s, E, cert, found)


def vanishing_ray_sequence(A: FiniteAlgebra, e: int, length: int, seed: int) -> HSDeriv:
    """Seeded uni-variate HS-derivation of the given length with components 1..e-1 zero."""
    from .hs import generate_hs
    return generate_hs(A, uni_coideal(length), seed, vanish_below=e)
