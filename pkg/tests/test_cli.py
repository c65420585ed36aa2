import os

from modmahler.cases import bad_case_path
from modmahler.cli import main


def test_verify_exit_codes(capsys):
    assert main(["verify", "P6"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", bad_case_path("residue_violation")]) == 1
    assert "aborted at stage 'residue'" in capsys.readouterr().out
    assert main(["verify", "P6", "--tol", "1e-14"]) == 1


def test_verify_report(tmp_path):
    out = tmp_path / "rep"
    assert main(["verify", "P2", "--report", str(out)]) == 0
    names = set(os.listdir(out))
    assert {"P2.tsv", "P2_quadrature.png", "P2_qexp.png", "summary.tsv", "summary.png"} <= names
    rows = dict(line.split("\t", 1) for line in (out / "P2.tsv").read_text().split("\n\n")[0].splitlines()[1:])
    assert rows["passed"].strip() == "True"


def test_json_output(capsys):
    import json
    assert main(["verify", "smyth3", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["passed"] and d["rhs_exact"] == {"zeta3/pi2": "7/2"}


def test_other_subcommands(capsys):
    assert main(["cases"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 7
    assert main(["mahler", "--poly", "1 + X + Y + Z", "--grid", "32", "--levels", "3"]) == 0
    assert "jensen" in capsys.readouterr().out
    assert main(["lvalue", "--eis", "E3[chi4,1,1]"]) == 0
    assert "-1/4*zeta3/pi2" in capsys.readouterr().out
    assert main(["qexp", "--form", "f8", "--order", "5"]) == 0
    assert "-2*q^2" in capsys.readouterr().out
    assert main(["decompose", "--poly", "Y", "--alpha", "1/2", "--beta", "oo"]) == 0
    assert "2*(-1 0; -2 -1)_*X{0,oo}" in capsys.readouterr().out
    assert main(["siegel", "--unit", "-i * g(0,3)^2 * g(0,1)^-2 @ level 8", "--cusp", "oo", "1/2"]) == 0
    assert "value 1" in capsys.readouterr().out


def test_bad_input_exit_code(capsys):
    assert main(["mahler", "--poly", "X + W"]) == 2
