import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsforge.algebra import LinOp
from hsforge.coideal import box_coideal, total_degree_coideal, uni_coideal
from hsforge.hs import (CertificationError, HSDeriv, SubstitutionMap, certify, external_product, generate_hs,
                        hs_compose, hs_inverse, hs_truncate, leibniz_check, monomial_substitution,
                        product_substitution, restrict_to_ray, substitution_action)
from hsforge.series import OpSeries, SeriesError, series_inverse, series_mul, series_power, truncate

seeds = st.integers(0, 2**32 - 1)
COIDEALS = [box_coideal((2, 2)), total_degree_coideal(2, 3), box_coideal((1, 1, 1))]


def random_series(A, delta, rng):
    coeffs = {a: LinOp.random(A, rng) for a in delta.nonzero()}
    coeffs[delta.zero] = LinOp.identity(A)
    return OpSeries(A, delta, coeffs)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(COIDEALS))
def test_unit_group_laws(f5_33, seed, delta):
    rng = np.random.default_rng(seed)
    r, s, t = (random_series(f5_33, delta, rng) for _ in range(3))
    one = OpSeries.identity(f5_33, delta)
    assert series_mul(series_mul(r, s), t) == series_mul(r, series_mul(s, t))
    assert series_mul(r, one) == r == series_mul(one, r)
    inv = series_inverse(r)
    assert series_mul(r, inv) == one == series_mul(inv, r)


def test_inverse_needs_unit(f5_33):
    r = OpSeries(f5_33, uni_coideal(2), {(1,): LinOp.identity(f5_33)})
    with pytest.raises(SeriesError):
        series_inverse(r)


def test_out_of_range_index(f5_33):
    with pytest.raises(SeriesError):
        OpSeries(f5_33, uni_coideal(2), {(3,): LinOp.identity(f5_33)})


def test_power_and_truncate(f5_33):
    D = generate_hs(f5_33, uni_coideal(4), 9)
    assert series_power(D, 3) == series_mul(D, series_mul(D, D))
    assert truncate(series_power(D, 2), uni_coideal(2)) == series_power(truncate(D, uni_coideal(2)), 2)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(COIDEALS))
def test_generated_are_hs_and_closed_under_group_ops(f3_33, seed, delta):
    D, E = generate_hs(f3_33, delta, seed), generate_hs(f3_33, delta, seed + 1)
    assert leibniz_check(D).passed
    assert leibniz_check(hs_compose(D, E)).passed
    assert leibniz_check(hs_inverse(D)).passed
    assert leibniz_check(external_product(D, E)).passed


def test_rational_generation(q_32):
    D = generate_hs(q_32, box_coideal((2, 1)), 4)
    assert leibniz_check(D).passed
    assert hs_compose(D, hs_inverse(D)) == HSDeriv.identity(q_32, D.coideal)


def test_generation_commutes_with_truncation(f5_33):
    big = generate_hs(f5_33, total_degree_coideal(2, 5), 21)
    small = generate_hs(f5_33, total_degree_coideal(2, 3), 21)
    assert hs_truncate(big, small.coideal) == small


def test_vanish_below(f5_33):
    D = generate_hs(f5_33, box_coideal((2, 2)), 3, vanish_below=3)
    assert D.support() == [(0, 0), (1, 2), (2, 1), (2, 2)]


def test_leibniz_failure_names_first_index(f5_33):
    D = generate_hs(f5_33, box_coideal((2, 2)), 5)
    bumped = dict(D.coeffs)
    bumped[(1, 1)] = bumped[(1, 1)] + LinOp.identity(f5_33)
    rep = leibniz_check(OpSeries(f5_33, D.coideal, bumped))
    assert not rep.passed and rep.alpha == (1, 1) and rep.pair == (0, 0)
    with pytest.raises(CertificationError):
        certify(OpSeries(f5_33, D.coideal, bumped))


def test_bad_constant_term(f5_33):
    r = OpSeries(f5_33, uni_coideal(1), {})
    rep = leibniz_check(r)
    assert not rep.passed and rep.alpha == (0,)


def test_monomial_action_matches_general_expansion(f5_33):
    delta = box_coideal((2, 2))
    E = generate_hs(f5_33, uni_coideal(2), 8)
    fast = substitution_action(monomial_substitution((1, 1), delta), E)
    general = SubstitutionMap(f5_33, uni_coideal(2), delta, [{(1, 1): f5_33.one}])
    assert general.monomial_exponents is None
    assert substitution_action(general, E) == fast


def test_product_substitution_matches_general(f3_33):
    delta = box_coideal((1, 1))
    rays = [(0, 1), (1, 1), (1, 0)]
    src = box_coideal((1, 1, 1))
    P = generate_hs(f3_33, src, 2)
    fast = substitution_action(product_substitution(rays, delta), P)
    general = SubstitutionMap(f3_33, src, delta, [{b: f3_33.one} for b in rays])
    assert substitution_action(general, P) == fast


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_substitution_with_algebra_coefficients_keeps_hs(f3_33, seed):
    rng = np.random.default_rng(seed)
    delta = total_degree_coideal(2, 3)
    images = [{(1, 0): f3_33.random_element(rng), (0, 2): f3_33.random_element(rng)},
              {(0, 1): f3_33.random_element(rng), (1, 1): f3_33.random_element(rng)}]
    # source and target truncated at the same total degree: every image without constant term is allowed
    phi = SubstitutionMap(f3_33, delta, delta, images)
    assert phi.is_well_defined()
    out = substitution_action(phi, generate_hs(f3_33, delta, seed))
    assert leibniz_check(out).passed
    bad = SubstitutionMap(f3_33, box_coideal((1, 1)), delta, images)
    assert not bad.is_well_defined()
    D, E = generate_hs(f3_33, box_coideal((1, 1)), seed), generate_hs(f3_33, box_coideal((1, 1)), seed + 7)
    # a monomial substitution is a group homomorphism
    psi = SubstitutionMap.monomial(None, box_coideal((1, 1)), delta, [(1, 1), (2, 1)])
    assert psi.is_well_defined(f3_33)
    assert substitution_action(psi, hs_compose(D, E)) == hs_compose(substitution_action(psi, D),
                                                                    substitution_action(psi, E))


def test_substitution_validation(f5_33):
    with pytest.raises(ValueError):
        SubstitutionMap(f5_33, uni_coideal(1), uni_coideal(2), [{(0,): f5_33.one}])
    with pytest.raises(ValueError):
        monomial_substitution((2, 2), box_coideal((2, 2)))
    with pytest.raises(ValueError):
        monomial_substitution((1, 1), box_coideal((2, 2)), m=1)


def test_well_definedness_of_monomial_map():
    from hsforge.algebra import make_monomial_quotient
    from hsforge.fields import FieldSpec
    A = make_monomial_quotient(FieldSpec.prime(5), (2,))
    ok = monomial_substitution((1, 1), box_coideal((2, 2)))
    assert ok.is_well_defined(A)
    # mu -> s1 with mu^2 = 0 but s1^2 != 0 in the target
    bad = SubstitutionMap.monomial(None, uni_coideal(1), box_coideal((2, 2)), [(1, 0)])
    assert not bad.is_well_defined(A)


def test_restrict_to_ray_certified_only_when_earlier_rays_vanish(f5_33):
    D = generate_hs(f5_33, box_coideal((2, 2)), 1)
    assert restrict_to_ray(D, (0, 1)).certified
    assert not restrict_to_ray(D, (1, 1)).certified
