"""Decomposition of multi-variate HS-derivations along rays.

Over a finite co-ideal with rays ``beta^1 < ... < beta^C``, every ``D`` factors
uniquely as ``(psi_1 • E^1) ∘ ... ∘ (psi_C • E^C)`` where ``psi_i`` is the
monomial substitution ``mu -> s^{beta^i}`` and each ``E^i`` is uni-variate.
The factors are found by peeling rays in ascending order: the components of
the current remainder on the next ray form ``E``, and multiplying by
``psi • E*`` on the left clears that ray.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import LinOp
from .coideal import CoIdeal, MultiIndex, degree_truncation, leq, scale
from .hs import (CertificationError, HSDeriv, external_product_many, hs_compose, hs_inverse,
                 hs_ordered_compose, hs_truncate, leibniz_check, monomial_substitution,
                 product_substitution, restrict_to_ray, substitution_action)
from .rays import Cmp, P_set, S_set, gcd_vec, multiplicity, primitive, ray_compare, sorted_rays
from .report import Certificate
from .series import truncate


class SupportError(ValueError):
    """A support hypothesis of a peel step does not hold."""

    def __init__(self, msg: str, gamma: MultiIndex | None = None):
        super().__init__(msg)
        self.gamma = gamma


def _first_nonzero(D: HSDeriv, indices) -> MultiIndex | None:
    for g in indices:
        if g in D.coeffs:
            return g
    return None


@dataclass
class PeelResult:
    beta: MultiIndex
    factor: HSDeriv
    remainder: HSDeriv
    certificate: Certificate


def peel_ray(D: HSDeriv, beta: MultiIndex, verify: bool = True,
             alpha: MultiIndex | None = None) -> PeelResult:
    """Split ``D = (psi_beta • E) ∘ D'`` with ``D'`` vanishing on ``beta``'s ray and before it.

    ``D`` must vanish on every ray strictly before ``beta``.  When ``alpha`` is
    given and D also vanishes on the ray below ``alpha``, the certificate records
    that ``D'`` agrees with ``D`` below ``alpha``.
    """
    beta = tuple(beta)
    delta = D.coideal
    S = S_set(delta, beta)
    bad = _first_nonzero(D, S)
    if bad is not None:
        raise SupportError(f"D_{bad} != 0 although {bad} lies on a ray before {beta}", bad)
    E = restrict_to_ray(D, beta)
    psi = monomial_substitution(beta, delta)
    rest = hs_compose(substitution_action(psi, hs_inverse(E)), D)
    cert = Certificate()
    P = P_set(delta, beta)
    leftover = _first_nonzero(rest, S + P)
    cert.add(f"remainder vanishes up to ray {beta}", leftover is None,
             "" if leftover is None else f"nonzero at {leftover}")
    if verify:
        cert.add(f"refactor at ray {beta}", hs_compose(substitution_action(psi, E), rest) == D)
    if alpha is not None and all(g not in D.coeffs for g in P if leq(g, alpha)):
        below = [g for g in delta if leq(g, alpha)]
        cert.add(f"remainder agrees with input below {tuple(alpha)}",
                 all(rest.coeff(g) == D.coeff(g) for g in below))
    if not cert.passed:
        raise CertificationError(f"peel at {beta} failed: {cert.summary()}")
    return PeelResult(beta, E, rest, cert)


@dataclass
class Decomposition:
    coideal: CoIdeal
    rays: list[MultiIndex]
    factors: list[HSDeriv]
    certificate: Certificate = field(default_factory=Certificate)

    @property
    def lengths(self) -> list[int]:
        return [E.length for E in self.factors]

    def factor(self, beta: MultiIndex) -> HSDeriv:
        return self.factors[self.rays.index(tuple(beta))]


def peel_until(D: HSDeriv, beta: MultiIndex, verify: bool = False) -> tuple[list[PeelResult], HSDeriv]:
    """Peel every ray strictly before ``beta``; return the steps and the remainder."""
    steps = []
    cur = D
    for b in sorted_rays(D.coideal):
        if ray_compare(b, beta) != Cmp.LESS:
            break
        step = peel_ray(cur, b, verify=verify)
        steps.append(step)
        cur = step.remainder
    return steps, cur


def decompose(D: HSDeriv, certify: bool = True) -> Decomposition:
    """Factor ``D`` along all rays of its co-ideal, with a certificate."""
    if not D.certified:
        report = leibniz_check(D)
        if not report.passed:
            raise CertificationError(f"input is not an HS-derivation: {report}")
    delta = D.coideal
    rays = sorted_rays(delta)
    cert = Certificate()
    factors = []
    cur = D
    for i, beta in enumerate(rays[:-1]):
        step = peel_ray(cur, beta, verify=False)
        factors.append(step.factor)
        cur = step.remainder
        nxt = S_set(delta, rays[i + 1])
        bad = _first_nonzero(cur, nxt)
        cert.add(f"support discipline after {beta}", bad is None, "" if bad is None else f"nonzero at {bad}")
    last = rays[-1]
    stray = [g for g in cur.support() if any(g) and g not in set(P_set(delta, last))]
    if stray:
        raise SupportError(f"final remainder has support off the last ray at {stray[0]}", stray[0])
    factors.append(restrict_to_ray(cur, last))
    dec = Decomposition(delta, rays, factors, cert)
    if certify:
        for beta, E in zip(rays, factors):
            rep = leibniz_check(E)
            cert.add(f"factor {beta} is HS", rep.passed, "" if rep.passed else str(rep))
        cert.add("recomposition equals input", recompose(dec) == D)
    return dec


def recompose(dec: Decomposition) -> HSDeriv:
    expected = sorted_rays(dec.coideal)
    if list(dec.rays) != expected:
        raise ValueError(f"rays {dec.rays} are not the ordered rays {expected}")
    pieces = []
    for beta, E in zip(dec.rays, dec.factors):
        m = multiplicity(dec.coideal, beta)
        if E.length != m:
            raise ValueError(f"factor on {beta} has length {E.length}, expected {m}")
        pieces.append(substitution_action(monomial_substitution(beta, dec.coideal), E))
    return hs_ordered_compose(pieces)


def from_factors(coideal: CoIdeal, factors: list[HSDeriv]) -> HSDeriv:
    """Build ``(psi_1 • F^1) ∘ ... ∘ (psi_C • F^C)`` from factors in ray order."""
    return recompose(Decomposition(coideal, sorted_rays(coideal), list(factors)))


@dataclass
class BoxtimesForm:
    substitution: object
    product: HSDeriv
    certificate: Certificate


def boxtimes_decompose(D: HSDeriv, dec: Decomposition | None = None) -> BoxtimesForm:
    """``D = psi_Delta • (E^1 ⊠ ... ⊠ E^C)`` over the box of multiplicities."""
    if dec is None:
        dec = decompose(D, certify=False)
    psi = product_substitution(dec.rays, dec.coideal)
    product = external_product_many(dec.factors)
    cert = Certificate()
    cert.add("boxtimes form equals input", substitution_action(psi, product) == D)
    return BoxtimesForm(psi, product, cert)


# -- infinite co-ideals through finite towers ----------------------------------------

Provider = Callable[[int], HSDeriv]


def tower_factor(provider: Provider, beta: MultiIndex, r: int) -> HSDeriv:
    """The factor on ``beta`` of the level-``r`` derivation."""
    D = provider(r)
    _, rest = peel_until(D, beta)
    return restrict_to_ray(rest, beta)


def check_tower_step(provider: Provider, r: int) -> bool:
    """Level ``r + 1`` truncates to level ``r``."""
    lo, hi = provider(r), provider(r + 1)
    return truncate(hi, lo.coideal) == lo


def tower_decompose(provider: Provider, beta: MultiIndex, n: int, level: int | None = None) -> LinOp:
    """Component ``E^beta_n`` of the infinite decomposition.

    Computed at the first level containing ``n * beta`` (or ``level``) and at the
    next one; the two must agree, as must the provider's truncations.
    """
    beta = tuple(beta)
    r = level if level is not None else max(1, n * sum(beta))
    if not check_tower_step(provider, r):
        raise ValueError(f"provider levels {r} and {r + 1} are not truncation compatible")
    E_lo = tower_factor(provider, beta, r)
    E_hi = tower_factor(provider, beta, r + 1)
    if n > E_lo.length:
        raise ValueError(f"{n} * {beta} is not in the level-{r} co-ideal")
    if truncate(E_hi, E_lo.coideal) != E_lo:
        raise ValueError(f"factor on {beta} changes between levels {r} and {r + 1}")
    return E_lo.coeff((n,))


def degree_tower(D: HSDeriv) -> Provider:
    """Total-degree tower of a finite ``D``: level r is the truncation to ``|a| <= r``."""
    def provider(r: int) -> HSDeriv:
        return hs_truncate(D, degree_truncation(D.coideal, r))
    return provider


def ray_prefix_agrees(D: HSDeriv, beta: MultiIndex, alpha: MultiIndex) -> bool | None:
    """For ``alpha`` on ``beta``'s ray with D zero on earlier rays below ``alpha``:
    do the factor's components ``E_n`` equal ``D_{n beta}`` for ``n <= gcd(alpha)``?

    None when the vanishing hypothesis fails.
    """
    beta, alpha = tuple(beta), tuple(alpha)
    if primitive(alpha) != beta:
        raise ValueError(f"{alpha} is not on the ray of {beta}")
    if any(g in D.coeffs for g in S_set(D.coideal, beta) if leq(g, alpha)):
        return None
    _, rest = peel_until(D, beta)
    E = restrict_to_ray(rest, beta)
    return all(E.coeff((n,)) == D.coeff(scale(n, beta)) for n in range(gcd_vec(alpha) + 1))
