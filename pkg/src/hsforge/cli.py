"""Command-line front end.

Every command writes one JSON report to stdout and a short human summary to
stderr.  Exit status: 0 when all checks pass, 1 when a certificate fails, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Any

from . import serialize as io
from .algebra import AlgebraError, FiniteAlgebra, make_monomial_quotient, op_bracket
from .closed_forms import box22_factors, intro_g22
from .coideal import CoIdeal, CoIdealError, box_coideal, total_degree_coideal, uni_coideal
from .decompose import SupportError, boxtimes_decompose, decompose
from .diffop import lemma44_defect, order_leq
from .fields import FieldSpec
from .hs import CertificationError, HSDeriv, generate_hs, leibniz_check
from .integrability import (IntegrabilityError, bracket_integral, bracket_series, is_m_integrable,
                            p_power_integral)
from .rays import RayError, multiplicity, sorted_rays
from .report import Certificate
from .series import SeriesError

COMMANDS = ("ray-order", "decompose", "bracket", "p-power", "integrate", "verify", "order",
            "lemma44", "demo", "generate")
DEMOS = ("example-3-3", "intro-length-2")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    seed: int = 0
    flags: dict[str, Any] = field(default_factory=dict)


@dataclass
class RunResult:
    status: int
    report: dict
    summary: str
    text: str | None = None  # replaces the JSON on stdout when set


# -- argument helpers -------------------------------------------------------------------

def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from exc


def _coideal_from_flags(flags: dict, inputs: dict) -> CoIdeal:
    if "coideal" in inputs:
        return io.coideal_from_json(io.load_file(inputs["coideal"]))
    q = flags.get("q")
    if flags.get("box") is not None:
        b = flags["box"]
        if q is not None and len(b) != q:
            raise InputError(f"--box has {len(b)} entries but --q is {q}")
        return box_coideal(tuple(b))
    if flags.get("total_degree") is not None:
        if q is None:
            raise InputError("--total-degree needs --q")
        return total_degree_coideal(q, flags["total_degree"])
    raise InputError("give --box, --total-degree or --input with a co-ideal document")


def _algebra_from_flags(flags: dict) -> FiniteAlgebra:
    f = FieldSpec.rationals() if flags.get("p") in (None, 0) else FieldSpec.prime(flags["p"])
    return make_monomial_quotient(f, flags.get("exponents") or [3, 3])


def _load_hs(path: str) -> HSDeriv:
    r = io.series_from_json(io.load_file(path))
    if not isinstance(r, HSDeriv):
        r = HSDeriv(r.algebra, r.coideal, r.coeffs)
    return r


def _require_hs(D: HSDeriv, label: str, cert: Certificate) -> bool:
    if D.certified:
        return True
    rep = leibniz_check(D)
    D.certified = rep.passed
    return cert.add(f"{label} is an HS-derivation", rep.passed, "" if rep.passed else str(rep))


def _series_doc(r) -> dict:
    return io.series_to_json(r)


def _fail_early(report: dict, cert: Certificate, summary: str) -> RunResult:
    report["certificate"] = cert.to_dict()
    return RunResult(1, report, summary + ": " + cert.summary())


def _finish(report: dict, cert: Certificate, what: str) -> RunResult:
    report["certificate"] = cert.to_dict()
    return RunResult(0 if cert.passed else 1, report, f"{what}: {cert.summary()}")


# -- commands ---------------------------------------------------------------------------

def cmd_ray_order(cfg: RunConfig) -> RunResult:
    delta = _coideal_from_flags(cfg.flags, cfg.inputs)
    rays = [(b, multiplicity(delta, b)) for b in sorted_rays(delta)]
    lines = [f"({','.join(map(str, b))}) m={m}" for b, m in rays]
    report = {"command": "ray-order", "coideal": io.coideal_to_json(delta),
              "rays": [{"ray": list(b), "multiplicity": m} for b, m in rays]}
    text = None if cfg.flags.get("json") else "\n".join(lines) + "\n"
    return RunResult(0, report, f"{len(rays)} rays", text)


def cmd_generate(cfg: RunConfig) -> RunResult:
    A = _algebra_from_flags(cfg.flags)
    if cfg.flags.get("m") is not None:
        delta = uni_coideal(cfg.flags["m"])
    else:
        delta = _coideal_from_flags(cfg.flags, cfg.inputs)
    D = generate_hs(A, delta, cfg.seed, vanish_below=cfg.flags.get("vanish_below") or 1)
    return RunResult(0, _series_doc(D), f"generated HS-derivation on {len(delta)} indices")


def cmd_verify(cfg: RunConfig) -> RunResult:
    D = _load_hs(_input(cfg, "input"))
    rep = leibniz_check(D)
    cert = Certificate()
    cert.add("Leibniz rule", rep.passed, "" if rep.passed else str(rep))
    report = {"command": "verify", "input": cfg.inputs["input"]}
    if not rep.passed:
        report["first_failure"] = {"alpha": list(rep.alpha) if rep.alpha is not None else None,
                                   "pair": list(rep.pair) if rep.pair is not None else None}
    return _finish(report, cert, "verify")


def cmd_decompose(cfg: RunConfig) -> RunResult:
    D = _load_hs(_input(cfg, "input"))
    cert = Certificate()
    report: dict[str, Any] = {"command": "decompose", "input": cfg.inputs["input"]}
    if not _require_hs(D, "input", cert):
        return _fail_early(report, cert, "decompose")
    dec = decompose(D, certify=bool(cfg.flags.get("certify")))
    cert.extend(dec.certificate)
    report["factors"] = [{"ray": list(b), "length": E.length, "series": _series_doc(E)}
                         for b, E in zip(dec.rays, dec.factors)]
    if cfg.flags.get("emit_boxtimes"):
        bx = boxtimes_decompose(D, dec)
        cert.extend(bx.certificate)
        report["boxtimes"] = {"box": [E.length for E in dec.factors], "product": _series_doc(bx.product)}
    return _finish(report, cert, "decompose")


def cmd_bracket(cfg: RunConfig) -> RunResult:
    D, E = _load_hs(_input(cfg, "d")), _load_hs(_input(cfg, "e"))
    cert = Certificate()
    report: dict[str, Any] = {"command": "bracket", "d": cfg.inputs["d"], "e": cfg.inputs["e"]}
    if not (_require_hs(D, "D", cert) and _require_hs(E, "E", cert)):
        return _fail_early(report, cert, "bracket")
    res = bracket_integral(D, E)
    cert.extend(res.certificate)
    report["length"] = res.length
    report["derivation"] = io.linop_to_json(res.derivation)
    report["integral"] = _series_doc(res.integral)
    return _finish(report, cert, "bracket")


def cmd_p_power(cfg: RunConfig) -> RunResult:
    D = _load_hs(_input(cfg, "d"))
    cert = Certificate()
    report: dict[str, Any] = {"command": "p-power", "d": cfg.inputs["d"]}
    if not _require_hs(D, "D", cert):
        return _fail_early(report, cert, "p-power")
    res = p_power_integral(D, search=bool(cfg.flags.get("search")))
    cert.extend(res.certificate)
    report["derivation"] = io.linop_to_json(res.derivation)
    report["integral_length"] = res.length
    report["extended"] = _series_doc(res.extended)
    if res.integral is not None:
        cert.add("search found an integral", res.integral.passed)
        if res.integral:
            report["integral"] = _series_doc(res.integral.integral)
    return _finish(report, cert, "p-power")


def cmd_integrate(cfg: RunConfig) -> RunResult:
    import numpy as np
    delta = io.linop_from_json(io.load_file(_input(cfg, "delta")))
    m = cfg.flags.get("m")
    if m is None:
        raise InputError("--m is required")
    restarts = cfg.flags.get("restarts") or 0
    res = is_m_integrable(delta, m, rng=np.random.default_rng(cfg.seed), restarts=restarts)
    report: dict[str, Any] = {"command": "integrate", "delta": cfg.inputs["delta"], "m": m}
    cert = Certificate()
    if res:
        cert.extend(res.certificate)
        report["integral"] = _series_doc(res.integral)
    else:
        cert.add("integral found", False, f"{res.reason} (stuck at component {res.failed_step})")
        report["failed_step"] = res.failed_step
    return _finish(report, cert, "integrate")


def cmd_order(cfg: RunConfig) -> RunResult:
    P = io.linop_from_json(io.load_file(_input(cfg, "input")))
    bound = cfg.flags.get("bound")
    if bound is None:
        raise InputError("--bound is required")
    verdict = order_leq(P, bound)
    report = {"command": "order", "input": cfg.inputs["input"], "bound": bound, "verdict": verdict}
    return RunResult(0, report, f"order <= {bound}: {verdict}")


def cmd_lemma44(cfg: RunConfig) -> RunResult:
    D, E = _load_hs(_input(cfg, "d")), _load_hs(_input(cfg, "e"))
    cert = Certificate()
    report: dict[str, Any] = {"command": "lemma44", "d": cfg.inputs["d"], "e": cfg.inputs["e"]}
    if not (_require_hs(D, "D", cert) and _require_hs(E, "E", cert)):
        return _fail_early(report, cert, "lemma44")
    defect, rep = lemma44_defect(D, E)
    cert.add(f"defect has order <= {rep.claimed_bound}", rep.verdict)
    report["defect"] = io.linop_to_json(defect)
    report["bound"] = rep.claimed_bound
    return _finish(report, cert, "lemma44")


def demo_example_3_3(cfg: RunConfig) -> RunResult:
    A = _algebra_from_flags(cfg.flags)
    delta = box_coideal((2, 2))
    D = generate_hs(A, delta, cfg.seed)
    cert = Certificate()
    rays = sorted_rays(delta)
    mults = [multiplicity(delta, b) for b in rays]
    cert.add("ray order", rays == [(0, 1), (1, 2), (1, 1), (2, 1), (1, 0)], str(rays))
    cert.add("multiplicities", mults == [2, 1, 2, 1, 2], str(mults))
    dec = decompose(D, certify=True)
    cert.extend(dec.certificate)
    forms = box22_factors(D)
    names = {(0, 1): "E1", (1, 2): "E2", (1, 1): "E3", (2, 1): "E4", (1, 0): "E5"}
    for beta, ops in forms.items():
        E = dec.factor(beta)
        for n, op in enumerate(ops, start=1):
            cert.add(f"{names[beta]}_{n} closed form", E.coeff((n,)) == op)
    cert.extend(boxtimes_decompose(D, dec).certificate)
    report = {"command": "demo", "name": "example-3-3", "algebra": io.algebra_to_json(A),
              "seed": cfg.seed, "rays": [{"ray": list(b), "multiplicity": m} for b, m in zip(rays, mults)],
              "factors": [{"ray": list(b), "series": _series_doc(E)} for b, E in zip(dec.rays, dec.factors)]}
    return _finish(report, cert, "example-3-3")


def demo_intro_length_2(cfg: RunConfig) -> RunResult:
    A = _algebra_from_flags(cfg.flags)
    D = generate_hs(A, uni_coideal(2), 2 * cfg.seed)
    E = generate_hs(A, uni_coideal(2), 2 * cfg.seed + 1)
    G = bracket_series(D, E)
    cert = Certificate()
    for idx in ((1, 0), (2, 0), (0, 1), (0, 2)):
        cert.add(f"G{idx} = 0", idx not in G.coeffs)
    cert.add("G(1,1) = [D1,E1]", G.coeff((1, 1)) == op_bracket(D.coeff((1,)), E.coeff((1,))))
    cert.add("G(2,2) eight-term formula", G.coeff((2, 2)) == intro_g22(D, E))
    diag = HSDeriv(A, uni_coideal(2), {(n,): G.coeff((n, n)) for n in range(3)})
    rep = leibniz_check(diag)
    cert.add("diagonal is an HS-derivation", rep.passed, "" if rep.passed else str(rep))
    cert.extend(bracket_integral(D, E).certificate, prefix="integral: ")
    report = {"command": "demo", "name": "intro-length-2", "algebra": io.algebra_to_json(A),
              "seed": cfg.seed, "d": _series_doc(D), "e": _series_doc(E), "g": _series_doc(G)}
    return _finish(report, cert, "intro-length-2")


def cmd_demo(cfg: RunConfig) -> RunResult:
    name = cfg.flags.get("name")
    if name == "example-3-3":
        return demo_example_3_3(cfg)
    if name == "intro-length-2":
        return demo_intro_length_2(cfg)
    raise InputError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")


HANDLERS = {
    "ray-order": cmd_ray_order, "decompose": cmd_decompose, "bracket": cmd_bracket,
    "p-power": cmd_p_power, "integrate": cmd_integrate, "verify": cmd_verify, "order": cmd_order,
    "lemma44": cmd_lemma44, "demo": cmd_demo, "generate": cmd_generate,
}


def _input(cfg: RunConfig, key: str) -> str:
    path = cfg.inputs.get(key)
    if not path:
        raise InputError(f"--{key} is required for {cfg.command}")
    return path


# ValueError last: bad primes, bad exponents and similar validation failures
MALFORMED = (InputError, io.FormatError, IntegrabilityError, SeriesError, CoIdealError, AlgebraError,
             RayError, OSError, ValueError)


def run(cfg: RunConfig) -> RunResult:
    try:
        return HANDLERS[cfg.command](cfg)
    except (CertificationError, SupportError) as exc:
        return RunResult(1, {"command": cfg.command, "error": str(exc)}, f"certificate failed: {exc}")
    except MALFORMED as exc:
        return RunResult(2, {"command": cfg.command, "error": str(exc)}, f"malformed input: {exc}")


# -- argparse -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hsforge", description="Hasse-Schmidt derivation toolkit")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input")
    ap.add_argument("--d")
    ap.add_argument("--e")
    ap.add_argument("--delta", help="derivation document for integrate")
    ap.add_argument("--q", type=int)
    ap.add_argument("--box", type=_int_list)
    ap.add_argument("--total-degree", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--p", type=int, help="prime; 0 or absent for the rationals")
    ap.add_argument("--exponents", type=_int_list)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bound", type=int)
    ap.add_argument("--name", choices=DEMOS)
    ap.add_argument("--vanish-below", type=int)
    ap.add_argument("--restarts", type=int)
    ap.add_argument("--certify", action="store_true")
    ap.add_argument("--emit-boxtimes", action="store_true")
    ap.add_argument("--search", action="store_true", help="p-power: also search for the integral")
    ap.add_argument("--json", action="store_true", help="ray-order: JSON instead of the listing")
    return ap


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    inputs = {k: getattr(ns, k) for k in ("input", "d", "e", "delta") if getattr(ns, k)}
    if ns.command == "ray-order" and ns.input:
        inputs = {"coideal": ns.input}
    if not 0 <= ns.seed < 2**64:
        raise SystemExit("seed must be a 64-bit natural number")
    flags = {k: getattr(ns, k) for k in ("q", "box", "total_degree", "m", "p", "exponents", "bound",
                                         "name", "vanish_below", "restarts", "certify",
                                         "emit_boxtimes", "search", "json")}
    return RunConfig(ns.command, inputs, ns.seed, flags)


def main(argv=None) -> int:
    cfg = config_from_args(argv)
    res = run(cfg)
    sys.stdout.write(res.text if res.text is not None else io.dumps(res.report) + "\n")
    sys.stderr.write(res.summary + "\n")
    return res.status


if __name__ == "__main__":
    sys.exit(main())
