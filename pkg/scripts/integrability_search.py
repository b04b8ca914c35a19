"""Staged extension search on derivations with a guaranteed integral, plus known obstructions.

Positive rows: for each (p, e, s), the e-th component of a random
HS-derivation whose components 1..e-1 vanish is searched for an integral of
length p^s.  Negative rows: d/dx on F_p[x]/(x^p), which has no integral of
length p.  A stuck search is only conclusive when the failing step depends on
D_1 alone (length 2); otherwise it reports the canonical path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from _config import parse_config

from hsforge import generate_hs, is_m_integrable, make_monomial_quotient, uni_coideal
from hsforge.algebra import LinOp
from hsforge.fields import FieldSpec


@dataclass(frozen=True)
class SearchConfig:
    cases: tuple = ((2, 2, 1), (2, 3, 1), (3, 2, 1), (2, 2, 2))
    seeds: int = 25
    restarts: int = 0


def _algebra(p: int):
    return make_monomial_quotient(FieldSpec.prime(p), (2, 2) if p == 2 else (3, 3))


def _d_dx(A) -> LinOp:
    """Partial derivative in the first variable on a monomial quotient."""
    f = A.field
    M = f.zeros((A.dim, A.dim))
    for j, mono in enumerate(A.basis_labels):
        if mono[0] > 0:
            target = (mono[0] - 1,) + tuple(mono[1:])
            M[A.index_of(target), j] = f.scalar(mono[0])
    return LinOp(A, M)


def run(cfg: SearchConfig) -> bool:
    ok_all = True
    print(f"{'p':>2} {'e':>2} {'s':>2} {'length':>7} {'found':>8} {'s':>6}")
    for p, e, s in cfg.cases:
        A = _algebra(p)
        t = time.perf_counter()
        found = 0
        for seed in range(cfg.seeds):
            D = generate_hs(A, uni_coideal(e * p ** s), seed, vanish_below=e)
            found += bool(is_m_integrable(D.coeff((e,)), p ** s, restarts=cfg.restarts))
        ok_all &= found == cfg.seeds
        print(f"{p:>2} {e:>2} {s:>2} {p ** s:>7} {found:>4}/{cfg.seeds:<3} {time.perf_counter() - t:>6.2f}")
    print("obstructions:")
    for p, exps, m in ((2, (2,), 2), (3, (3,), 3)):
        A = make_monomial_quotient(FieldSpec.prime(p), exps)
        res = is_m_integrable(_d_dx(A), m, restarts=cfg.restarts)
        where = "found an integral" if res else f"no extension along the canonical path at step {res.failed_step}"
        print(f"  d/dx on F{p}[x]/(x^{exps[0]}) to length {m}: {where}")
        ok_all &= not res
    return ok_all


if __name__ == "__main__":
    raise SystemExit(0 if run(parse_config(SearchConfig, __doc__)) else 1)
