import io
import json
import subprocess
import sys

import pytest

import goldens as G
from bsroots import bsengine, cli
from bsroots.errors import NotStabilized


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def sing_file(tmp_path):
    def make(recs):
        p = tmp_path / "sing.json"
        p.write_text(json.dumps(recs))
        return str(p)
    return make


def test_spectrum_two_elevenths_three_elevenths():
    code, out = run(["spectrum", "--weights", "2/11,3/11"])
    assert code == 0
    assert out == "T^17+T^15+T^14+T^13+T^12+2T^11+T^10+T^9+T^8+T^7+T^5\n"


def test_spectrum_json_and_type():
    code, out = run(["spectrum", "--type", "E6", "--format", "json"])
    data = json.loads(out)
    assert code == 0 and data["milnor"] == 6 and data["m"] == 12


def test_local_bs_from_poly():
    code, out = run(["local-bs", "--local-poly", "x^2+y^3", "--format", "json"])
    data = json.loads(out)
    assert data["reduced"] == ["5/6", "7/6"] and data["alpha_tilde"] == "5/6"


def test_arnold_and_gamma():
    assert run(["arnold", "--n", "4", "--d", "6"]) == (0, "68\n")
    code, out = run(["gamma", "--n", "3", "--d", "5", "--format", "tsv"])
    assert out.splitlines()[1] == "gamma\t1\t3\t6\t10\t12\t12\t10\t6\t3\t1"


def test_deltas_f2():
    assert run(["deltas", "x^5+x^2*y^3+y^4*z"]) == (0, "T^7+T^6+T^4+T^3\n")


def test_tables_f1_json():
    code, out = run(["tables", "x^5+y^4*z", "--format", "json"])
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"gamma", "mu", "nu", "mu_dblprime", "mu_prime", "delta"}
    mp = data["mu_prime"]
    assert mp["values"][6 - mp["offset"]] == 1


def test_tables_text_layout():
    code, out = run(["tables", "x^5+y^4*z", "--kmin", "5", "--kmax", "7"])
    lines = out.splitlines()
    assert lines[0].split() == ["k", "5", "6", "7"]
    assert lines[-1].split() == ["delta", "1", "1"]


def test_e2_with_sandwich_check(sing_file):
    path = sing_file([{"weights": ["3/14", "1/7"]}, {"weights": ["3/7", "1/7"]}])
    code, out = run(["e2", "x^4*y^2*z+z^7", "--sing", path, "--format", "tsv",
                     "--kmin", "3", "--kmax", "19"])
    assert code == 0
    rows = {r.split("\t")[0]: r.split("\t")[1:] for r in out.splitlines()}
    assert [int(v or 0) for v in rows["mu2"]] == [0, 1, 1, 1, 2, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0]


def test_analyze_f1_ok(sing_file):
    path = sing_file([{"weights": ["1/5", "1/4"]}])
    code, out = run(["analyze", "x^5+y^4*z", "--sing", path, "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["R0"] == ["6/5", "7/5", "8/5", "9/5"]
    assert bsengine.RootReport.from_json(out) == G.report("f1")


def test_analyze_f4_undetermined(sing_file):
    path = sing_file([{"local_poly": "x^4*z+z^7", "vars": ["x", "z"]},
                      {"weights": ["3/7", "1/7"]}])
    code, out = run(["analyze", "x^4*y^2*z+z^7", "--sing", path])
    assert code == 3
    assert "undetermined = {3/7}" in out


def test_analyze_w_violation(sing_file, capsys):
    path = sing_file([{"weights": ["1/5", "1/4"]}])
    code, _ = run(["analyze", "x^5+x^3*y^2+y^4*z", "--sing", path])
    assert code == 2
    assert "11" in capsys.readouterr().err


def test_analyze_lines():
    code, out = run(["analyze", "--lines", "x*y*z*(x+y+z)", "--format", "json"])
    data = json.loads(out)
    assert code == 0 and data["chi_U"] == json.loads(G.report(G.Case(
        "g", "", "xyz", (), lines="x*y*z*(x+y+z)")).to_json())["chi_U"]


@pytest.mark.parametrize("argv", [
    ["deltas", "x^5+y^4"],
    ["deltas", "x^^2"],
    ["analyze", "x^5+y^4*z"],
    ["spectrum"],
    ["spectrum", "--weights", "1/0"],
    ["tables", "x^3+y^3+z^3", "--kmax", "99"],
    ["analyze", "x^3+y^3+z^3", "--sing", "/nonexistent.json"],
])
def test_input_errors_exit_1(argv):
    assert run(argv)[0] == 1


@pytest.mark.parametrize("argv", [["bogus"], ["arnold", "--n", "x"]])
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as ei:
        run(argv)
    assert ei.value.code == 1


def test_invariant_failure_exit_4(monkeypatch):
    def boom(*a, **k):
        raise NotStabilized("forced")
    monkeypatch.setattr(bsengine, "compute_tables", boom)
    assert run(["deltas", "x^3+y^3+z^3"])[0] == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bsroots", "arnold", "--n", "3", "--d", "7"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "21\n"
