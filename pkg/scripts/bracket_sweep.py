"""Integrate commutators [D_1, E_1] of random HS-derivations to length m.

Reports, per (algebra, m), how many integrals were certified and how many
matched the hand-expanded components (m = 4 only).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from _config import parse_config

from hsforge import generate_hs, make_monomial_quotient, uni_coideal
from hsforge.closed_forms import BracketForms
from hsforge.fields import FieldSpec
from hsforge.integrability import bracket_integral


@dataclass(frozen=True)
class BracketSweepConfig:
    lengths: tuple = (2, 3, 4)
    pairs: int = 20
    # (p, exponents) per algebra
    algebras: tuple = ((5, (3, 3)), (2, (2, 2, 2)), (3, (3, 3)))


def run(cfg: BracketSweepConfig) -> bool:
    ok_all = True
    print(f"{'algebra':>22} {'m':>3} {'certified':>10} {'closed forms':>13} {'s':>6}")
    for p, exps in cfg.algebras:
        A = make_monomial_quotient(FieldSpec.prime(p), exps)
        name = f"F{p}/{'x'.join(map(str, exps))}"
        for m in cfg.lengths:
            t = time.perf_counter()
            certified = matched = 0
            for seed in range(cfg.pairs):
                D, E = generate_hs(A, uni_coideal(m), 2 * seed), generate_hs(A, uni_coideal(m), 2 * seed + 1)
                res = bracket_integral(D, E)
                certified += res.passed
                if m == 4:
                    forms = BracketForms(D, E)
                    H = res.integral
                    matched += [forms.H2(), forms.H3(), forms.H4()] == [H.coeff((k,)) for k in (2, 3, 4)]
            closed = f"{matched}/{cfg.pairs}" if m == 4 else "-"
            ok_all &= certified == cfg.pairs and (m != 4 or matched == cfg.pairs)
            print(f"{name:>22} {m:>3} {certified:>6}/{cfg.pairs:<3} {closed:>13} {time.perf_counter() - t:>6.2f}")
    return ok_all


if __name__ == "__main__":
    raise SystemExit(0 if run(parse_config(BracketSweepConfig, __doc__)) else 1)
