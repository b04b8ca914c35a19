"""Acceptance criteria, all exact.

Each criterion prints one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import time
from functools import cmp_to_key
from itertools import product

from hsforge.algebra import make_monomial_quotient, op_bracket
from hsforge.closed_forms import BracketForms, box22_factors, intro_g22
from hsforge.coideal import box_coideal, total_degree_coideal, uni_coideal
from hsforge.decompose import boxtimes_decompose, decompose, from_factors, recompose, tower_decompose, tower_factor
from hsforge.diffop import lemma44_defect, order_leq
from hsforge.fields import FieldSpec
from hsforge.hs import HSDeriv, generate_hs, leibniz_check
from hsforge.integrability import bracket_integral, bracket_series, is_m_integrable, p_power_integral
from hsforge.rays import Cmp, is_primitive, primitive, multiplicity, ray_compare, sorted_rays

RESULTS: list[str] = []


def record(name: str, ok: bool, detail: str, started: float) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({time.perf_counter() - started:.1f}s)"
    print(line)
    RESULTS.append(line)
    return ok


def algebra(p, exps):
    return make_monomial_quotient(FieldSpec.prime(p), exps)


def criterion_1():
    t = time.perf_counter()
    delta = box_coideal((2, 2))
    rays = sorted_rays(delta)
    mults = tuple(multiplicity(delta, b) for b in rays)
    ok = rays == [(0, 1), (1, 2), (1, 1), (2, 1), (1, 0)] and mults == (2, 1, 2, 1, 2)
    return record("1 ray order of box(2,2)", ok, f"rays={rays} multiplicities={mults}", t)


def criterion_2():
    t = time.perf_counter()
    violations = {"split": 0, "extremes": 0, "order": 0, "class": 0}
    counts = []
    for q in (2, 3, 4):
        vecs = [b for b in product(range(13), repeat=q) if 0 < sum(b) <= 12]
        prims = [b for b in vecs if is_primitive(b)]
        # lambda + sigma = beta: exactly one of the three configurations
        for beta in vecs:
            for lam in product(*(range(x + 1) for x in beta)):
                sig = tuple(x - y for x, y in zip(beta, lam))
                if not any(lam) or not any(sig):
                    continue
                lb, bs = ray_compare(lam, beta), ray_compare(beta, sig)
                equal = lb == Cmp.EQUAL and bs == Cmp.EQUAL and ray_compare(lam, sig) == Cmp.EQUAL
                down = ray_compare(sig, beta) == Cmp.LESS and ray_compare(beta, lam) == Cmp.LESS
                up = lb == Cmp.LESS and bs == Cmp.LESS
                if equal + down + up != 1:
                    violations["split"] += 1
        lo, hi = (0,) * (q - 1) + (1,), (1,) + (0,) * (q - 1)
        for g in prims:
            if g != lo and ray_compare(lo, g) != Cmp.LESS:
                violations["extremes"] += 1
            if g != hi and ray_compare(g, hi) != Cmp.LESS:
                violations["extremes"] += 1
        for b in vecs:
            g = primitive(b)
            if ray_compare(b, g) != Cmp.EQUAL:
                violations["class"] += 1
        # a sort followed by a full pairwise scan: totality and transitivity
        ordered = sorted(prims, key=cmp_to_key(ray_compare))
        for i, a in enumerate(ordered):
            for c in ordered[i + 1:]:
                if ray_compare(a, c) != Cmp.LESS or ray_compare(c, a) != Cmp.GREATER:
                    violations["order"] += 1
        counts.append(f"q={q}:{len(vecs)} vectors/{len(prims)} rays")
    ok = not any(violations.values())
    return record("2 order axioms, |b| <= 12", ok, f"{', '.join(counts)}; violations={violations}", t)


DECOMP_COIDEALS = [("box(2,2)", box_coideal((2, 2))), ("box(3,2)", box_coideal((3, 2))),
                   ("total_degree(2,4)", total_degree_coideal(2, 4))]


def criterion_3():
    t = time.perf_counter()
    A = algebra(5, (3, 3))
    bad = []
    for name, delta in DECOMP_COIDEALS:
        for seed in range(100):
            D = generate_hs(A, delta, seed)
            dec = decompose(D, certify=True)
            discipline = all(c.passed for c in dec.certificate.checks if c.name.startswith("support"))
            leib = all(leibniz_check(E).passed for E in dec.factors)
            rt = recompose(dec) == D
            bx = boxtimes_decompose(D, dec).certificate.passed
            if not (discipline and leib and rt and bx and dec.certificate.passed):
                bad.append((name, seed))
    return record("3 decomposition round trip", not bad, f"300 instances, failures={bad[:5]}", t)


def criterion_4():
    t = time.perf_counter()
    A = algebra(5, (3, 3))
    delta = box_coideal((2, 2))
    bad = []
    for seed in range(50):
        D = generate_hs(A, delta, seed)
        dec = decompose(D)
        forms = box22_factors(D)
        for beta, ops in forms.items():
            if dec.factor(beta).sequence()[1:] != ops:
                bad.append((seed, beta))
    return record("4 box(2,2) closed forms", not bad,
                  f"50 seeds x (E1, E2_1, E3_1, E3_2, E4_1, E5), mismatches={bad[:5]}", t)


def criterion_5():
    t = time.perf_counter()
    A = algebra(5, (3, 3))
    bad = []
    for name, delta in DECOMP_COIDEALS:
        rays = sorted_rays(delta)
        for seed in range(100):
            facs = [generate_hs(A, uni_coideal(multiplicity(delta, b)), 1000 * seed + i) for i, b in enumerate(rays)]
            if decompose(from_factors(delta, facs)).factors != facs:
                bad.append((name, seed))
    return record("5 uniqueness of factors", not bad, f"300 instances, failures={bad[:5]}", t)


def criterion_6():
    t = time.perf_counter()
    A = algebra(5, (3, 3))
    bad = []
    for seed in range(50):
        D, E = generate_hs(A, uni_coideal(2), 2 * seed), generate_hs(A, uni_coideal(2), 2 * seed + 1)
        G = bracket_series(D, E)
        axes = all(G.coeff(idx).is_zero() for idx in ((1, 0), (2, 0), (0, 1), (0, 2)))
        one = G.coeff((1, 1)) == op_bracket(D.coeff((1,)), E.coeff((1,)))
        two = G.coeff((2, 2)) == intro_g22(D, E)
        diag = leibniz_check(HSDeriv(A, uni_coideal(2), {(n,): G.coeff((n, n)) for n in range(3)})).passed
        if not (axes and one and two and diag):
            bad.append(seed)
    return record("6 length-2 commutator", not bad, f"50 pairs, failures={bad[:5]}", t)


def criterion_7():
    t = time.perf_counter()
    bad = []
    n = 0
    for label, A in (("F5[x,y]/(x3,y3)", algebra(5, (3, 3))), ("F2[x,y,z]/(x2,y2,z2)", algebra(2, (2, 2, 2)))):
        for m in (2, 3, 4):
            for seed in range(50):
                D, E = generate_hs(A, uni_coideal(m), 2 * seed), generate_hs(A, uni_coideal(m), 2 * seed + 1)
                res = bracket_integral(D, E)
                bracket = op_bracket(D.coeff((1,)), E.coeff((1,)))
                ok = res.passed and res.length == m and res.integral.coeff((1,)) == bracket
                if m == 4:
                    forms = BracketForms(D, E)
                    H = res.integral
                    ok = ok and [forms.H2(), forms.H3(), forms.H4()] == [H.coeff((2,)), H.coeff((3,)), H.coeff((4,))]
                n += 1
                if not ok:
                    bad.append((label, m, seed))
    return record("7 commutator integrals", not bad, f"{n} pairs, H2-H4 at m=4, failures={bad[:5]}", t)


def criterion_8():
    t = time.perf_counter()
    cases = [(2, 1, (2, 2)), (2, 2, (2, 2)), (3, 1, (3,)), (3, 1, (3, 3))]
    bad = []
    for p, a, exps in cases:
        A = algebra(p, exps)
        for seed in range(50):
            D = generate_hs(A, uni_coideal(p ** (a + 1) - 1), seed)
            res = p_power_integral(D)
            E = res.extended
            ok = (res.certificate.passed and E.length == p ** (a + 1)
                  and all(E.coeff((k,)).is_zero() for k in range(1, p))
                  and E.coeff((p,)) == D.coeff((1,)) ** p and leibniz_check(E).passed)
            if not ok:
                bad.append((p, a, exps, seed))
    return record("8 p-th powers", not bad, f"(p,a) in (2,1),(2,2),(3,1) on 4 algebras x 50 seeds, failures={bad[:5]}", t)


def criterion_9():
    t = time.perf_counter()
    cases = [(2, 2, 1, (2, 2)), (2, 3, 1, (2, 2)), (3, 2, 1, (3, 3))]
    bad = []
    for p, e, s, exps in cases:
        A = algebra(p, exps)
        for seed in range(25):
            D = generate_hs(A, uni_coideal(e * p ** s), seed, vanish_below=e)
            res = is_m_integrable(D.coeff((e,)), p ** s)
            if not (res and res.passed):
                bad.append((p, e, s, seed))
    return record("9 vanishing-prefix integrability", not bad, f"75 searches, not found={bad[:5]}", t)


def criterion_10():
    t = time.perf_counter()
    A = algebra(3, (3, 3))
    bad = []
    negatives = {}
    for m, n in ((1, 1), (2, 1), (2, 2), (3, 2)):
        fired = 0
        for seed in range(50):
            D, E = generate_hs(A, uni_coideal(m), 2 * seed), generate_hs(A, uni_coideal(n), 2 * seed + 1)
            _, rep = lemma44_defect(D, E)
            if not (rep.verdict and rep.claimed_bound == m + n - 2):
                bad.append((m, n, seed))
            if not order_leq(op_bracket(D.coeff((m,)), E.coeff((n,))), m + n - 2):
                fired += 1
        negatives[(m, n)] = fired
    vacuous = [k for k, v in negatives.items() if v == 0]
    ok = not bad and any(negatives.values())
    detail = (f"200 defects within m+n-2, failures={bad[:5]}; uncorrected bracket exceeds the bound in "
              f"{negatives} seeds; vacuous at this scale: {vacuous or 'none'}")
    return record("10 order defect bound", ok, detail, t)


def criterion_11():
    t = time.perf_counter()
    bad = []
    checked = 0
    levels = (3, 4, 5)
    for q, A in ((2, algebra(5, (3, 3))), (3, algebra(3, (2, 2, 2)))):
        for seed in range(3):
            # one generator pattern: every level draws the same coefficients
            provider = lambda r, A=A, q=q, seed=seed: generate_hs(A, total_degree_coideal(q, r), seed)
            for beta in sorted_rays(total_degree_coideal(q, 3)):
                factors = {r: tower_factor(provider, beta, r) for r in levels}
                for n in (1, 2):
                    present = [r for r in levels if n * sum(beta) <= r]
                    for lo, hi in zip(present, present[1:]):
                        checked += 1
                        direct = factors[lo].coeff((n,)) == factors[hi].coeff((n,))
                        routed = tower_decompose(provider, beta, n, level=lo) == factors[lo].coeff((n,))
                        if not (direct and routed):
                            bad.append((q, seed, beta, n, lo))
    return record("11 tower compatibility", not bad, f"{checked} level pairs, failures={bad[:5]}", t)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11]


def test_criterion_01_ray_order():
    assert criterion_1()


def test_criterion_02_order_axioms():
    assert criterion_2()


def test_criterion_03_decomposition_round_trip():
    assert criterion_3()


def test_criterion_04_closed_forms():
    assert criterion_4()


def test_criterion_05_uniqueness():
    assert criterion_5()


def test_criterion_06_length_two_commutator():
    assert criterion_6()


def test_criterion_07_commutator_integrals():
    assert criterion_7()


def test_criterion_08_p_powers():
    assert criterion_8()


def test_criterion_09_vanishing_prefix_integrability():
    assert criterion_9()


def test_criterion_10_order_defect():
    assert criterion_10()


def test_criterion_11_towers():
    assert criterion_11()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
