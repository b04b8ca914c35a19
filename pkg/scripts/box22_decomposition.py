"""Decompose random HS-derivations over box((2, 2)) and compare with the closed forms.

Prints one row per seed: factor lengths, whether every factor matches its
hand-expanded formula, and whether the boxtimes form reproduces the input.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from _config import parse_config

from hsforge import box_coideal, decompose, generate_hs, make_monomial_quotient, recompose
from hsforge.closed_forms import box22_factors
from hsforge.decompose import boxtimes_decompose
from hsforge.fields import FieldSpec


@dataclass(frozen=True)
class Box22Config:
    p: int = 5
    exponents: tuple = (3, 3)
    seeds: int = 10
    first_seed: int = 0


def run(cfg: Box22Config) -> bool:
    A = make_monomial_quotient(FieldSpec.prime(cfg.p), cfg.exponents)
    delta = box_coideal((2, 2))
    ok_all = True
    print(f"{'seed':>5} {'lengths':>16} {'closed':>7} {'round':>6} {'boxtimes':>9} {'ms':>7}")
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
        t = time.perf_counter()
        D = generate_hs(A, delta, seed)
        dec = decompose(D)
        closed = all(dec.factor(b).sequence()[1:] == ops for b, ops in box22_factors(D).items())
        round_trip = recompose(dec) == D
        bx = boxtimes_decompose(D, dec).certificate.passed
        ok = closed and round_trip and bx and dec.certificate.passed
        ok_all &= ok
        ms = 1000 * (time.perf_counter() - t)
        print(f"{seed:>5} {str(dec.lengths):>16} {closed!s:>7} {round_trip!s:>6} {bx!s:>9} {ms:>7.1f}")
    return ok_all


if __name__ == "__main__":
    raise SystemExit(0 if run(parse_config(Box22Config, __doc__)) else 1)
