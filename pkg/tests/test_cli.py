import io
import json
import os

import pytest

from weightkit.certificates import (recheck_factorization, recheck_triangle)
from weightkit.cli import main
from weightkit.io import load_complex, load_map

from conftest import FIXTURES

DOCS = os.path.join(FIXTURES, "documents")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    text = out.getvalue()
    last = text.strip().splitlines()[-1] if text.strip() else ""
    result = json.loads(last[len("RESULT "):]) if last.startswith("RESULT ") \
        else None
    return code, text, result


def doc(name):
    return os.path.join(DOCS, name)


def test_kills_zero_map_all_methods():
    code, _, res = run("kills", doc("zero_map.json"), "--m", "0", "--n", "0",
                       "--method", "all")
    assert code == 0
    assert set(res["methods"].values()) == {True}


def test_paper_examples():
    code, text, res = run("paper-examples")
    assert code == 0 and res["verified"]
    with open(os.path.join(FIXTURES, "even_dim_report.txt")) as fh:
        assert fh.read() in text


def test_homology_command():
    code, _, res = run("homology", doc("torsion.json"))
    assert code == 0 and res["homology"] == {"0": "0", "1": "Z/2"}


def test_without_false_exit_one():
    code, _, res = run("without", doc("torsion.json"), "--m", "0", "--n", "0")
    assert code == 1 and res["verdict"] is False


def test_input_errors_exit_two(tmp_path):
    assert run("homology", doc("bad_square.json"))[0] == 2
    assert run("homology", str(tmp_path / "none.json"))[0] == 2
    assert run("without", doc("torsion.json"), "--m", "1", "--n", "0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("homology", str(bad))[0] == 2
    with pytest.raises(SystemExit) as e:
        run("kills")
    assert e.value.code == 2


def test_avoid_certificate_reverifies():
    code, _, res = run("avoid", doc("even_dim.json"), "--m", "0", "--n", "0")
    assert code == 0 and res["exists"]
    M = load_complex(doc("even_dim.json"))
    assert recheck_triangle(M, res["certificate"])
    # tampering with one homotopy entry breaks it
    cert = res["certificate"]
    k = next(iter(cert["phi_psi"] or cert["psi_phi"]), None)
    key = "phi_psi" if cert["phi_psi"] else "psi_phi"
    if k is not None:
        cert[key][k][0][0] = str(int(cert[key][k][0][0]) + 1)
        assert not recheck_triangle(M, cert)


def test_truncate_certificate():
    code, _, res = run("truncate", doc("torsion.json"), "--l", "-1")
    assert code == 0 and res["verified"]
    assert recheck_triangle(load_complex(doc("torsion.json")),
                            res["certificate"])


def test_kills_certificate_reverifies():
    g = load_map(doc("zero_map.json"))
    code, _, res = run("kills", doc("zero_map.json"), "--m", "-1", "--n", "0")
    assert code == 0
    assert recheck_factorization(g, (-1, 0),
                                 res["certificate"]["factorization"])


def test_even_dim_without_weight_zero():
    code, _, res = run("without", doc("even_dim.json"), "--m", "0", "--n", "0")
    assert code == 0 and res["verdict"]
    assert recheck_factorization(
        __import__("weightkit").ChainMap.identity(
            load_complex(doc("even_dim.json"))),
        (0, 0), res["certificate"]["factorization"])


def test_weak_homotopy_certificate():
    code, _, res = run("without", doc("even_dim.json"), "--m", "0", "--n", "0",
                       "--method", "weakhtpy")
    assert code == 0 and "ranged_witness" in res["certificate"]


def test_detect_and_em():
    code, _, res = run("detect-weights", doc("torsion.json"), "--functor",
                       "tensor:F2")
    assert code == 0 and res["weights"] == [-1, 0]
    assert res["pure_homology"]["tensor:F2"]["1"] == "F2"
    code, _, res = run("em-cohomology", doc("torsion.json"), "--group", "Q/Z")
    assert code == 0 and res["cohomology"]["-1"] == "Z/2"
    assert run("em-cohomology", doc("even_dim.json"), "--group", "Z")[0] == 2


def test_normal_form_command():
    code, _, res = run("normal-form", doc("torsion.json"))
    assert code == 0 and res["pieces"][0]["kind"] == "torsion"


def test_fuzz_command(tmp_path):
    args = ("fuzz", "--seed", "3", "--trials", "5", "--property",
            "methods_agree", "--out", str(tmp_path))
    code, text, res = run(*args)
    assert code == 0 and res["ok"]
    assert (tmp_path / "report.txt").read_text() in text
    assert run(*args)[1] == text
    assert run("fuzz", "--trials", "0")[0] == 2
