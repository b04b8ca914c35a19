"""JSON interchange for algebras, co-ideals, operators and series.

Field entries are written as decimal strings (residues, or ``num/den`` over
ℚ) so documents are exact and byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import FiniteAlgebra, LinOp, make_monomial_quotient
from .coideal import CoIdeal, box_coideal, total_degree_coideal
from .fields import FieldSpec
from .hs import HSDeriv
from .series import OpSeries


class FormatError(ValueError):
    """A document does not match the expected schema."""


def _need(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{what}: missing key {key!r}")
    return doc[key]


# -- fields and algebras ----------------------------------------------------------------

def field_to_json(f: FieldSpec) -> dict:
    return {"rationals": True} if f.p is None else {"p": f.p}


def field_from_json(doc: dict) -> FieldSpec:
    if not isinstance(doc, dict):
        raise FormatError("field: expected an object")
    if doc.get("rationals") is True:
        return FieldSpec.rationals()
    p = _need(doc, "p", "field")
    try:
        return FieldSpec.prime(int(p))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"field: {exc}") from exc


def algebra_to_json(A: FiniteAlgebra) -> dict:
    if A.exponents is None:
        raise FormatError("only monomial quotient algebras have a JSON form")
    return {"field": field_to_json(A.field), "exponents": list(A.exponents)}


def algebra_from_json(doc: dict) -> FiniteAlgebra:
    f = field_from_json(_need(doc, "field", "algebra"))
    ex = _need(doc, "exponents", "algebra")
    if not isinstance(ex, list) or not all(isinstance(e, int) and e >= 1 for e in ex):
        raise FormatError("algebra: exponents must be a list of positive integers")
    return make_monomial_quotient(f, ex)


# -- co-ideals ------------------------------------------------------------------------

def coideal_to_json(delta: CoIdeal) -> dict:
    q = delta.q
    top = tuple(max(m[i] for m in delta.members) for i in range(q))
    if len(delta) == int(np.prod([t + 1 for t in top])):
        return {"q": q, "box": list(top)}
    r = max(sum(m) for m in delta.members)
    if delta == total_degree_coideal(q, r):
        return {"q": q, "total_degree": r}
    return {"q": q, "members": [list(m) for m in delta.members]}


def coideal_from_json(doc: dict) -> CoIdeal:
    q = _need(doc, "q", "coideal")
    if not isinstance(q, int) or q < 1:
        raise FormatError("coideal: q must be a positive integer")
    try:
        if "box" in doc:
            b = doc["box"]
            if len(b) != q:
                raise FormatError(f"coideal: box has {len(b)} entries for q={q}")
            return box_coideal(tuple(int(x) for x in b))
        if "total_degree" in doc:
            return total_degree_coideal(q, int(doc["total_degree"]))
        if "members" in doc:
            members = [tuple(int(x) for x in m) for m in doc["members"]]
            if any(len(m) != q for m in members):
                raise FormatError("coideal: member length differs from q")
            return CoIdeal(q, members)
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"coideal: {exc}") from exc
    raise FormatError("coideal: expected one of box, total_degree, members")


# -- matrices, operators, series --------------------------------------------------------

def matrix_to_json(f: FieldSpec, m: np.ndarray) -> list[list[str]]:
    return [[f.fmt(x) for x in row] for row in m]


def matrix_from_json(f: FieldSpec, rows, dim: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim or any(not isinstance(r, list) or len(r) != dim for r in rows):
        raise FormatError(f"matrix: expected {dim}x{dim} nested lists")
    try:
        return f.array([[f.parse(str(x)) for x in row] for row in rows])
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"matrix entry: {exc}") from exc


def linop_to_json(P: LinOp) -> dict:
    return {"algebra": algebra_to_json(P.algebra), "matrix": matrix_to_json(P.field, P.matrix)}


def linop_from_json(doc: dict, algebra: FiniteAlgebra | None = None) -> LinOp:
    A = algebra or algebra_from_json(_need(doc, "algebra", "operator"))
    return LinOp(A, matrix_from_json(A.field, _need(doc, "matrix", "operator"), A.dim))


def _key(alpha) -> str:
    return ",".join(str(a) for a in alpha)


def series_to_json(r: OpSeries) -> dict:
    doc: dict[str, Any] = {
        "algebra": algebra_to_json(r.algebra),
        "coideal": coideal_to_json(r.coideal),
        "coeffs": {_key(a): matrix_to_json(r.algebra.field, r.coeffs[a].matrix) for a in r.support()},
    }
    if isinstance(r, HSDeriv):
        doc["certified"] = bool(r.certified)
    return doc


def series_from_json(doc: dict) -> OpSeries | HSDeriv:
    """Parse a series; documents carrying a ``certified`` flag become HS-derivations.

    A ``certified: true`` flag is never trusted: it is re-checked on load.
    """
    A = algebra_from_json(_need(doc, "algebra", "series"))
    delta = coideal_from_json(_need(doc, "coideal", "series"))
    raw = _need(doc, "coeffs", "series")
    if not isinstance(raw, dict):
        raise FormatError("series: coeffs must be an object")
    coeffs = {}
    for k, rows in raw.items():
        try:
            alpha = tuple(int(x) for x in k.split(","))
        except ValueError as exc:
            raise FormatError(f"series: bad index key {k!r}") from exc
        if len(alpha) != delta.q or alpha not in delta:
            raise FormatError(f"series: index {alpha} is outside the co-ideal")
        coeffs[alpha] = LinOp(A, matrix_from_json(A.field, rows, A.dim))
    if "certified" not in doc:
        return OpSeries(A, delta, coeffs)
    from .hs import leibniz_check
    D = HSDeriv(A, delta, coeffs)
    if doc["certified"]:
        D.certified = leibniz_check(D).passed
    return D


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
