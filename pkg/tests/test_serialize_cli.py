import json
import subprocess
import sys

import pytest

from hsforge import serialize as io
from hsforge.algebra import LinOp
from hsforge.cli import RunConfig, main, run
from hsforge.coideal import CoIdeal, box_coideal, total_degree_coideal, uni_coideal
from hsforge.hs import HSDeriv, generate_hs


@pytest.mark.parametrize("delta", [box_coideal((2, 3)), total_degree_coideal(3, 2),
                                   CoIdeal(2, [(0, 0), (1, 0), (0, 1), (2, 0)]), uni_coideal(4)],
                         ids=["box", "total", "members", "uni"])
def test_coideal_round_trip(delta):
    doc = io.coideal_to_json(delta)
    assert io.coideal_from_json(json.loads(json.dumps(doc))) == delta


def test_coideal_forms():
    assert io.coideal_to_json(box_coideal((2, 2))) == {"q": 2, "box": [2, 2]}
    assert io.coideal_to_json(total_degree_coideal(2, 4)) == {"q": 2, "total_degree": 4}


@pytest.mark.parametrize("fix", ["f5_33", "q_32"])
def test_series_round_trip(fix, request):
    A = request.getfixturevalue(fix)
    D = generate_hs(A, box_coideal((2, 1)), 3)
    text = io.dumps(io.series_to_json(D))
    back = io.series_from_json(json.loads(text))
    assert isinstance(back, HSDeriv) and back.certified
    assert back == D
    assert io.dumps(io.series_to_json(back)) == text


def test_rational_entries_are_fractions(q_32):
    D = generate_hs(q_32, uni_coideal(2), 1)
    entries = {x for rows in io.series_to_json(D)["coeffs"].values() for row in rows for x in row}
    assert any("/" in x for x in entries)


def test_linop_round_trip(f5_33):
    import numpy as np
    P = LinOp.random(f5_33, np.random.default_rng(0))
    assert io.linop_from_json(json.loads(io.dumps(io.linop_to_json(P)))) == P


def test_certified_flag_is_rechecked(f5_33):
    D = generate_hs(f5_33, uni_coideal(1), 3)
    doc = io.series_to_json(D)
    doc["coeffs"]["1"][0][0] = str((int(doc["coeffs"]["1"][0][0]) + 1) % 5)
    assert not io.series_from_json(doc).certified


@pytest.mark.parametrize("doc", [
    {"field": {"p": 4}, "exponents": [2]},
    {"field": {"p": 5}},
    {"field": {"p": 5}, "exponents": [0]},
])
def test_bad_algebra_documents(doc):
    with pytest.raises(ValueError):
        io.algebra_from_json(doc)


def test_bad_series_documents(f5_33):
    good = io.series_to_json(generate_hs(f5_33, uni_coideal(1), 3))
    for mutate in (lambda d: d["coeffs"].update({"7": d["coeffs"]["1"]}),
                   lambda d: d["coeffs"].update({"1": [["1"]]}),
                   lambda d: d.pop("coideal")):
        doc = json.loads(json.dumps(good))
        mutate(doc)
        with pytest.raises(io.FormatError):
            io.series_from_json(doc)


# -- CLI --------------------------------------------------------------------------------

def test_ray_order_listing(capsys):
    assert main(["ray-order", "--q", "2", "--box", "2,2"]) == 0
    out = capsys.readouterr().out
    assert out == "(0,1) m=2\n(1,2) m=1\n(1,1) m=2\n(2,1) m=1\n(1,0) m=2\n"


def test_demos_pass_and_are_deterministic(capsys):
    args = ["demo", "--name", "example-3-3", "--p", "5", "--exponents", "3,3", "--seed", "7"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["certificate"]["passed"]
    assert main(["demo", "--name", "intro-length-2"]) == 0


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(io.dumps(doc))
    return str(path)


def test_exit_codes(tmp_path, f5_33):
    D = generate_hs(f5_33, box_coideal((2, 2)), 1)
    good = write(tmp_path, "d.json", io.series_to_json(D))
    doc = io.series_to_json(D)
    doc["coeffs"]["1,0"][0][1] = str((int(doc["coeffs"]["1,0"][0][1]) + 1) % 5)
    bad = write(tmp_path, "bad.json", doc)
    assert run(RunConfig("decompose", {"input": good}, flags={"certify": True, "emit_boxtimes": True})).status == 0
    res = run(RunConfig("verify", {"input": bad}))
    assert res.status == 1
    assert res.report["first_failure"]["alpha"] == [1, 0]
    assert run(RunConfig("decompose", {"input": bad})).status == 1
    assert run(RunConfig("decompose", {"input": str(tmp_path / "missing.json")})).status == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert run(RunConfig("verify", {"input": str(tmp_path / "junk.json")})).status == 2


def test_bracket_p_power_integrate_order_lemma(tmp_path, f3_33):
    d = write(tmp_path, "d.json", io.series_to_json(generate_hs(f3_33, uni_coideal(2), 1)))
    e = write(tmp_path, "e.json", io.series_to_json(generate_hs(f3_33, uni_coideal(2), 2)))
    e3 = write(tmp_path, "e3.json", io.series_to_json(generate_hs(f3_33, uni_coideal(3), 2)))
    assert run(RunConfig("bracket", {"d": d, "e": e})).status == 0
    assert run(RunConfig("bracket", {"d": d, "e": e3})).status == 2
    assert run(RunConfig("lemma44", {"d": d, "e": e3})).status == 0
    p8 = write(tmp_path, "p8.json", io.series_to_json(generate_hs(f3_33, uni_coideal(8), 4)))
    assert run(RunConfig("p-power", {"d": p8}, flags={"search": True})).status == 0
    # length 2 = 3^1 - 1 is the a = 0 case; length 3 is not of the form 3^(a+1) - 1
    assert run(RunConfig("p-power", {"d": d})).status == 0
    assert run(RunConfig("p-power", {"d": e3})).status == 2
    delta = write(tmp_path, "delta.json", io.linop_to_json(generate_hs(f3_33, uni_coideal(1), 4)[(1,)]))
    res = run(RunConfig("integrate", {"delta": delta}, flags={"m": 3}))
    assert res.status == 0 and "integral" in res.report
    res = run(RunConfig("order", {"input": delta}, flags={"bound": 1}))
    assert res.status == 0 and res.report["verdict"] is True


def test_integrate_reports_stuck_search(tmp_path):
    import numpy as np
    from hsforge.algebra import make_monomial_quotient
    from hsforge.fields import FieldSpec
    A = make_monomial_quotient(FieldSpec.prime(2), (2,))
    delta = write(tmp_path, "dx.json", io.linop_to_json(LinOp(A, np.array([[0, 1], [0, 0]]))))
    res = run(RunConfig("integrate", {"delta": delta}, flags={"m": 2}))
    assert res.status == 1 and res.report["failed_step"] == 2


def test_generate_then_verify_subprocess(tmp_path):
    out = subprocess.run([sys.executable, "-m", "hsforge", "generate", "--p", "3", "--exponents", "3",
                          "--q", "2", "--total-degree", "3", "--seed", "5"],
                         capture_output=True, text=True, check=True)
    path = tmp_path / "g.json"
    path.write_text(out.stdout)
    done = subprocess.run([sys.executable, "-m", "hsforge", "verify", "--input", str(path)],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert "1/1 checks passed" in done.stderr


def test_malformed_flags():
    assert run(RunConfig("ray-order", flags={"q": 2, "box": [2]})).status == 2
    assert run(RunConfig("demo", flags={"name": "nope"})).status == 2
    with pytest.raises(SystemExit) as info:
        main(["ray-order", "--box", "a,b"])
    assert info.value.code == 2
