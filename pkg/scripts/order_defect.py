"""Operator orders of [D_m, E_n] with and without the correction D_{m-1} E_{n-1} [D_1, E_1].

For each (m, n) prints how often the corrected operator respects the bound
m + n - 2, how often the plain commutator exceeds it, and the largest plain
order seen (which shows when the comparison is vacuous on a small algebra).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from _config import parse_config

from hsforge import generate_hs, make_monomial_quotient, uni_coideal
from hsforge.algebra import LinOp, op_bracket
from hsforge.diffop import lemma44_defect, operator_order
from hsforge.fields import FieldSpec


@dataclass(frozen=True)
class OrderConfig:
    p: int = 3
    exponents: tuple = (3, 3)
    pairs: tuple = ((1, 1), (2, 1), (2, 2), (3, 2), (3, 3))
    seeds: int = 50


def run(cfg: OrderConfig) -> bool:
    A = make_monomial_quotient(FieldSpec.prime(cfg.p), cfg.exponents)
    # a dense random matrix has the largest order any operator can have here
    top = operator_order(LinOp.random(A, np.random.default_rng(0)))
    print(f"largest operator order on this algebra: {top}")
    print(f"{'(m,n)':>7} {'bound':>6} {'defect ok':>10} {'plain over':>11} {'max plain':>10}")
    ok_all = True
    for m, n in cfg.pairs:
        good = over = 0
        worst = -1
        for seed in range(cfg.seeds):
            D, E = generate_hs(A, uni_coideal(m), 2 * seed), generate_hs(A, uni_coideal(n), 2 * seed + 1)
            _, rep = lemma44_defect(D, E)
            good += rep.verdict
            k = operator_order(op_bracket(D.coeff((m,)), E.coeff((n,))))
            over += k > m + n - 2
            worst = max(worst, k)
        ok_all &= good == cfg.seeds
        print(f"{str((m, n)):>7} {m + n - 2:>6} {good:>6}/{cfg.seeds:<3} {over:>7}/{cfg.seeds:<3} {worst:>10}")
    return ok_all


if __name__ == "__main__":
    raise SystemExit(0 if run(parse_config(OrderConfig, __doc__)) else 1)
