import numpy as np
from hypothesis import given, settings, strategies as st

from hsforge.algebra import LinOp, mult_operator, op_bracket
from hsforge.coideal import box_coideal, uni_coideal
from hsforge.diffop import lemma44_defect, operator_order, order_leq
from hsforge.hs import generate_hs
from hsforge.integrability import derivation_basis

seeds = st.integers(0, 2**32 - 1)


def test_zero_and_multiplication(f3_33):
    assert order_leq(LinOp.zero(f3_33), -1)
    a = mult_operator(f3_33, f3_33.random_element(np.random.default_rng(0)))
    assert order_leq(a, 0)
    assert not order_leq(LinOp.identity(f3_33) + derivation_basis(f3_33)[0], 0)


def test_derivations_have_order_one(f3_33):
    # an order-0 derivation would be multiplication by d(1) = 0
    for d in derivation_basis(f3_33):
        assert operator_order(d) == 1


def test_order_is_monotone(f3_33):
    P = LinOp.random(f3_33, np.random.default_rng(4))
    d = operator_order(P)
    assert order_leq(P, d) and not order_leq(P, d - 1)
    assert order_leq(P, d + 1)


def ops_with_orders(A, rng):
    D = generate_hs(A, uni_coideal(3), int(rng.integers(2**31)))
    picks = [(D[(n,)], n) for n in range(4)] + [(mult_operator(A, A.random_element(rng)), 0)]
    return picks[int(rng.integers(len(picks)))]


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_composition_and_bracket_bounds(f3_33, seed):
    rng = np.random.default_rng(seed)
    (P, d), (Q, e) = ops_with_orders(f3_33, rng), ops_with_orders(f3_33, rng)
    assert order_leq(P, d) and order_leq(Q, e)
    assert order_leq(P @ Q, d + e)
    assert order_leq(op_bracket(P, Q), d + e - 1)


def test_components_have_degree_order(f3_33):
    D = generate_hs(f3_33, box_coideal((2, 2)), 3)
    assert all(order_leq(D[a], sum(a)) for a in D.coideal)


def test_defect_for_length_one_vanishes(f3_33):
    D, E = generate_hs(f3_33, uni_coideal(1), 1), generate_hs(f3_33, uni_coideal(1), 2)
    defect, rep = lemma44_defect(D, E)
    assert defect.is_zero() and rep.verdict and rep.claimed_bound == 0


def test_defect_bound_over_f5_line():
    from hsforge.algebra import make_monomial_quotient
    from hsforge.fields import FieldSpec
    A = make_monomial_quotient(FieldSpec.prime(5), (4,))
    for seed in range(20):
        D, E = generate_hs(A, uni_coideal(2), seed), generate_hs(A, uni_coideal(1), seed + 100)
        assert lemma44_defect(D, E)[1].verdict
