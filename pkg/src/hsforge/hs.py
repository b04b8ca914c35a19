"""Hasse-Schmidt derivations, substitution maps and their action.

A Delta-variate HS-derivation is a unit series ``D`` in R[[s]]_Delta with
``D_0 = Id`` and ``D_a(xy) = sum_{b+c=a} D_b(x) D_c(y)``.  ``HSDeriv`` carries a
``certified`` flag: true when the Leibniz identities were checked, or when
the object was produced from certified inputs by an operation that preserves
them (composition, inverse, truncation, external product, substitution).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import series as S
from .algebra import AlgebraError, FiniteAlgebra, LinOp, mult_operator
from .coideal import CoIdeal, MultiIndex, add, box_coideal, leq, product_coideal, scale, sub, uni_coideal
from .config import settings
from .rays import Cmp, is_primitive, multiplicity, ray_compare

log = logging.getLogger(__name__)


class CertificationError(ValueError):
    pass


class HSDeriv(S.OpSeries):
    __slots__ = ("certified",)

    def __init__(self, algebra, coideal, coeffs=(), certified: bool = False):
        super().__init__(algebra, coideal, coeffs)
        self.certified = certified

    @classmethod
    def wrap(cls, r: S.OpSeries, certified: bool) -> "HSDeriv":
        out = cls.__new__(cls)
        out.algebra, out.coideal, out.coeffs = r.algebra, r.coideal, r.coeffs
        out.certified = certified
        if certified and settings.eager_certify:
            report = leibniz_check(out)
            if not report.passed:
                raise CertificationError(f"closure produced a non-HS series: {report}")
        return out

    @classmethod
    def identity(cls, algebra: FiniteAlgebra, coideal: CoIdeal) -> "HSDeriv":
        return cls(algebra, coideal, {coideal.zero: LinOp.identity(algebra)}, certified=True)

    @classmethod
    def from_sequence(cls, algebra: FiniteAlgebra, ops) -> "HSDeriv":
        return certify(S.OpSeries.from_sequence(algebra, ops))


# -- certification -------------------------------------------------------------

@dataclass(frozen=True)
class LeibnizReport:
    passed: bool
    alpha: MultiIndex | None = None
    pair: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return "Leibniz: pass"
        return f"Leibniz: fail at alpha={self.alpha} basis pair={self.pair} ({self.reason})"


def leibniz_check(D: S.OpSeries) -> LeibnizReport:
    """Exhaustive check of the HS identities over all members and basis pairs.

    The failing report names the smallest violating index in graded-lex order
    and the first violating basis pair there.
    """
    A = D.algebra
    f, d = A.field, A.dim
    zero = D.coideal.zero
    if D.coeff(zero) != LinOp.identity(A):
        return LeibnizReport(False, zero, None, "D_0 is not the identity")
    P2 = A.basis_products.reshape(d, d * d)
    supp = [(b, op.matrix) for b, op in D.coeffs.items()]
    for alpha in D.coideal.members[1:]:
        Da = D.coeffs.get(alpha)
        lhs = f.matmul(Da.matrix, P2).reshape(d, d, d) if Da is not None else f.zeros((d, d, d))
        rhs = None
        for beta, Mb in supp:
            if not leq(beta, alpha):
                continue
            Mc = D.coeffs.get(sub(alpha, beta))
            if Mc is None:
                continue
            w = A.products(Mb, Mc.matrix)
            rhs = w if rhs is None else rhs + w
        rhs = f.zeros((d, d, d)) if rhs is None else f.reduce(rhs)
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)
            i, j = min((int(b[1]), int(b[2])) for b in bad)
            return LeibnizReport(False, alpha, (i, j), "D_a(b_i b_j) != sum D_b(b_i) D_c(b_j)")
    return LeibnizReport(True)


def certify(r: S.OpSeries, strict: bool = True) -> HSDeriv:
    """Run the Leibniz check; raise on failure when ``strict``."""
    report = leibniz_check(r)
    if strict and not report.passed:
        raise CertificationError(str(report))
    out = HSDeriv.wrap(r, certified=False)
    out.certified = report.passed
    return out


# -- group structure ---------------------------------------------------------------

def hs_compose(D: HSDeriv, E: HSDeriv) -> HSDeriv:
    return HSDeriv.wrap(S.series_mul(D, E), D.certified and E.certified)


def hs_inverse(D: HSDeriv) -> HSDeriv:
    return HSDeriv.wrap(S.series_inverse(D), D.certified)


def hs_truncate(D: HSDeriv, sub_coideal: CoIdeal) -> HSDeriv:
    return HSDeriv.wrap(S.truncate(D, sub_coideal), D.certified)


def hs_ordered_compose(family: Sequence[HSDeriv], algebra=None, coideal=None) -> HSDeriv:
    family = list(family)
    out = S.ordered_compose(family, algebra, coideal)
    return HSDeriv.wrap(out, all(getattr(D, "certified", False) for D in family) if family else True)


def _cert(D) -> bool:
    return bool(getattr(D, "certified", False))


def external_product(D: S.OpSeries, E: S.OpSeries) -> HSDeriv:
    """``(D ⊠ E)_{(a, b)} = D_a ∘ E_b`` over the product co-ideal."""
    if D.algebra != E.algebra:
        raise AlgebraError("external product of derivations of different algebras")
    delta = product_coideal(D.coideal, E.coideal)
    coeffs = {a + b: P @ Q for a, P in D.coeffs.items() for b, Q in E.coeffs.items()}
    return HSDeriv.wrap(S.OpSeries(D.algebra, delta, coeffs), _cert(D) and _cert(E))


def external_product_many(factors: Sequence[S.OpSeries]) -> HSDeriv:
    out = factors[0]
    for E in factors[1:]:
        out = external_product(out, E)
    return out if isinstance(out, HSDeriv) else HSDeriv.wrap(out, _cert(out))


# -- series with algebra coefficients ----------------------------------------------

@lru_cache(maxsize=256)
def _scatter(coideal: CoIdeal) -> tuple[np.ndarray, np.ndarray]:
    """Pairs (a, b) of member positions whose sum stays inside, and the sum's position."""
    n = len(coideal)
    pa, pb, dest = [], [], []
    for i, x in enumerate(coideal.members):
        for j, y in enumerate(coideal.members):
            s = add(x, y)
            if s in coideal:
                pa.append(i)
                pb.append(j)
                dest.append(coideal.index(s))
    flat = np.asarray(pa, dtype=np.int64) * n + np.asarray(pb, dtype=np.int64)
    return flat, np.asarray(dest, dtype=np.int64)


def aseries_mul(A: FiniteAlgebra, coideal: CoIdeal, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Product in A[[t]]_coideal; series are (dim, len(coideal)) coefficient matrices."""
    f = A.field
    n = len(coideal)
    W = A.products(U, V).reshape(A.dim, n * n)
    flat, dest = _scatter(coideal)
    out = f.zeros((A.dim, n))
    np.add.at(out.T, dest, W[:, flat].T)
    return f.reduce(out)


def aseries_from_dict(A: FiniteAlgebra, coideal: CoIdeal, terms: Mapping[MultiIndex, np.ndarray]) -> np.ndarray:
    out = A.field.zeros((A.dim, len(coideal)))
    for gamma, c in terms.items():
        if tuple(gamma) in coideal:
            out[:, coideal.index(tuple(gamma))] = A.element(c)
    return out


# -- substitution maps -----------------------------------------------------------

@dataclass
class SubstitutionMap:
    """A-algebra map A[[s]]_source -> A[[t]]_target given by the images of the s_i.

    ``images[i]`` maps target multi-indices to algebra elements and has no
    constant term.  ``algebra`` may be omitted for monomial maps, whose
    coefficients are all 1.  ``monomial_exponents`` is set when every image is a single
    monomial with coefficient 1; the action then needs no algebra products.
    """

    algebra: FiniteAlgebra | None
    source: CoIdeal
    target: CoIdeal
    images: list
    monomial_exponents: list | None = None

    def __post_init__(self):
        if len(self.images) != self.source.q:
            raise ValueError("need one image per source variable")
        zero = self.target.zero
        clean = []
        for img in self.images:
            img = {tuple(k): v for k, v in dict(img).items()}
            for k, v in img.items():
                if k not in self.target:
                    raise ValueError(f"image index {k} outside the target co-ideal")
                if k == zero and (v is None or np.any(v)):
                    raise ValueError("substitution images must have zero constant term")
            if self.algebra is not None:
                img = {k: self.algebra.element(v) if v is not None else self.algebra.one for k, v in img.items()}
                img = {k: v for k, v in img.items() if np.any(v)}
            clean.append(img)
        self.images = clean

    @classmethod
    def monomial(cls, algebra: FiniteAlgebra, source: CoIdeal, target: CoIdeal, exponents) -> "SubstitutionMap":
        exponents = [tuple(e) for e in exponents]
        images = []
        for e in exponents:
            if not any(e):
                raise ValueError("monomial image must be non-constant")
            # None stands for the coefficient 1 of whatever algebra acts
            images.append({e: None} if e in target else {})
        return cls(algebra, source, target, images, monomial_exponents=exponents)

    def _image_matrices(self, A: FiniteAlgebra) -> list[np.ndarray]:
        return [aseries_from_dict(A, self.target, {k: A.one if v is None else v for k, v in img.items()})
                for img in self.images]

    def expand(self, alpha: MultiIndex, A: FiniteAlgebra | None = None) -> np.ndarray:
        """phi(s^alpha) as a (dim, len(target)) coefficient matrix."""
        A = A or self.algebra
        out = aseries_from_dict(A, self.target, {self.target.zero: A.one})
        for img, e in zip(self._image_matrices(A), alpha):
            for _ in range(e):
                out = aseries_mul(A, self.target, out, img)
        return out

    def is_well_defined(self, A: FiniteAlgebra | None = None) -> bool:
        """The defining ideal of the source maps to zero."""
        A = A or self.algebra
        return all(not np.any(self.expand(c, A)) for c in self.source.outer_corners())


def monomial_substitution(beta: MultiIndex, delta: CoIdeal, m: int | None = None,
                          algebra: FiniteAlgebra | None = None) -> SubstitutionMap:
    """``mu -> s^beta`` from A[[mu]]_m into A[[s]]_delta, m the multiplicity of beta."""
    beta = tuple(beta)
    if beta not in delta:
        raise ValueError(f"{beta} is not a member of the co-ideal")
    if not is_primitive(beta):
        raise ValueError(f"{beta} is not primitive")
    mult = multiplicity(delta, beta)
    if m is None:
        m = mult
    elif m != mult:
        raise ValueError(f"source length {m} differs from the multiplicity {mult} of {beta}")
    return SubstitutionMap.monomial(algebra, uni_coideal(m), delta, [beta])


def product_substitution(rays: Sequence[MultiIndex], delta: CoIdeal,
                         algebra: FiniteAlgebra | None = None) -> SubstitutionMap:
    """``t_i -> s^{beta_i}`` from the box of multiplicities into A[[s]]_delta."""
    ms = tuple(multiplicity(delta, b) for b in rays)
    return SubstitutionMap.monomial(algebra, box_coideal(ms), delta, list(rays))


def substitution_action(phi: SubstitutionMap, D: S.OpSeries) -> HSDeriv:
    """``phi • D = sum_a phi(s^a) D_a`` as a series over the target co-ideal."""
    if D.coideal != phi.source:
        raise ValueError("source co-ideal of the substitution differs from that of D")
    A = D.algebra
    f = A.field
    target = phi.target
    acc: dict[MultiIndex, np.ndarray] = {}
    if phi.monomial_exponents is not None:
        exps = phi.monomial_exponents
        for alpha, op in D.coeffs.items():
            gamma = target.zero
            for n, e in zip(alpha, exps):
                if n:
                    gamma = add(gamma, scale(n, e))
            if gamma not in target:
                continue
            acc[gamma] = op.matrix if gamma not in acc else acc[gamma] + op.matrix
    else:
        images = phi._image_matrices(A)
        powers: dict[tuple[int, int], np.ndarray] = {}

        def power(i: int, n: int) -> np.ndarray:
            if (i, n) not in powers:
                if n == 0:
                    powers[(i, n)] = aseries_from_dict(A, target, {target.zero: A.one})
                else:
                    powers[(i, n)] = aseries_mul(A, target, power(i, n - 1), images[i])
            return powers[(i, n)]

        for alpha, op in D.coeffs.items():
            exp = power(0, alpha[0])
            for i in range(1, len(alpha)):
                exp = aseries_mul(A, target, exp, power(i, alpha[i]))
            for k in np.nonzero(np.any(exp, axis=0))[0]:
                gamma = target.members[int(k)]
                term = mult_operator(A, exp[:, k]).matrix @ op.matrix
                acc[gamma] = term if gamma not in acc else acc[gamma] + term
    coeffs = {g: LinOp(A, f.reduce(m), reduce=False) for g, m in acc.items()}
    return HSDeriv.wrap(S.OpSeries(A, target, coeffs), _cert(D))


# -- generators and restriction -------------------------------------------------

def hs_from_units(A: FiniteAlgebra, delta: CoIdeal, units: Sequence[Mapping[MultiIndex, np.ndarray]]) -> HSDeriv:
    """HS-derivation of the algebra map x_i -> x_i u_i on a monomial quotient.

    ``units[i]`` maps members of ``delta`` to elements of A; the constant term
    is forced to 1.  Since A[[s]]_delta is commutative and
    ``(x_i u_i)^{e_i} = 0``, this extends to an algebra map A -> A[[s]]_delta
    congruent to the identity, whose coefficients form an HS-derivation.
    """
    if A.exponents is None:
        raise AlgebraError("generator needs a monomial quotient algebra")
    if len(units) != len(A.exponents):
        raise ValueError("need one unit per variable")
    f = A.field
    n = len(delta)
    zero = delta.zero
    U = []
    for u in units:
        terms = dict(u)
        terms[zero] = A.one
        U.append(aseries_from_dict(A, delta, terms))
    one = aseries_from_dict(A, delta, {zero: A.one})
    # powers[i][k] = u_i^k for k < e_i
    powers = []
    for i, e in enumerate(A.exponents):
        pw = [one]
        for _ in range(1, e):
            pw.append(aseries_mul(A, delta, pw[-1], U[i]))
        powers.append(pw)
    # image[:, k, :] = Phi(b_k) = b_k * prod_i u_i^{a_i}
    image = f.zeros((A.dim, A.dim, n))
    for k, label in enumerate(A.basis_labels):
        ser = one
        for i, a in enumerate(label):
            if a:
                ser = aseries_mul(A, delta, ser, powers[i][a])
        bk = A.basis_vector(k)[:, None]
        image[:, k, :] = A.products(bk, ser)[:, 0, :]
    coeffs = {alpha: LinOp(A, image[:, :, t], reduce=False) for t, alpha in enumerate(delta.members)}
    return HSDeriv.wrap(S.OpSeries(A, delta, coeffs), True)


def generate_hs(A: FiniteAlgebra, delta: CoIdeal, seed: int, vanish_below: int = 1) -> HSDeriv:
    """Random certified HS-derivation with ``D_a = 0`` for ``0 < |a| < vanish_below``.

    The coefficient of ``u_i`` at ``a`` is drawn from a generator keyed by
    ``(seed, i, a)``, so truncating the output to a smaller co-ideal equals
    generating directly on it.
    """
    if vanish_below < 1:
        raise ValueError("vanish_below must be >= 1")
    units = []
    for i in range(len(A.exponents or ())):
        terms = {}
        for alpha in delta.nonzero():
            if sum(alpha) >= vanish_below:
                rng = np.random.default_rng([seed, i, *alpha])
                terms[alpha] = A.random_element(rng)
        units.append(terms)
    D = hs_from_units(A, delta, units)
    return D


def restrict_to_ray(D: HSDeriv, beta: MultiIndex) -> HSDeriv:
    """``(E_r = D_{r beta})_{0 <= r <= m}``; certified only if D vanishes before ``beta``."""
    beta = tuple(beta)
    m = multiplicity(D.coideal, beta)
    ops = {(r,): D.coeff(scale(r, beta)) for r in range(m + 1)}
    E = S.OpSeries(D.algebra, uni_coideal(m), ops)
    ok = _cert(D) and all(ray_compare(g, beta) != Cmp.LESS for g in D.support() if any(g))
    return HSDeriv.wrap(E, ok)
