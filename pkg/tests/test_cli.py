import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from igusa import cli
from igusa.catalog import fan_p1xp1_swap, quadric_affine, quadric_strata

MODULES = ("exactcore", "clemens", "localzeta", "galois", "pointcount", "denef", "tauber", "toric", "rootdata", "heights")


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = invoke(capsys, *argv)
    assert code == 0, out
    data = json.loads(out)
    assert data["schema"] == cli.SCHEMA and data["inputs"]["command"] == argv[0]
    return data


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def quadric_file(tmp_path):
    return write(tmp_path, "quadric.json", quadric_affine().to_json())


AFFINE_LINE = {"dim": 1, "q": 3, "components": [{"id": "a", "f": 1}], "strata": [{"A": [], "N": 2}, {"A": ["a"], "N": 1}]}


def test_count(capsys, quadric_file):
    data = report(capsys, "count", "--system", quadric_file, "--modulus", "5", "--primes-up-to", "13", "--weil", "2", "--levels", "3")
    counts = {row["modulus"]: row["count"] for row in data["outputs"]["counts"]}
    assert counts == {5: 30, 2: 4, 3: 6, 7: 42, 11: 110, 13: 182}
    assert [v["volume"] for v in data["outputs"]["weil_volumes"]] == ["1", "3/4", "3/4"]


def test_count_strata(capsys, tmp_path):
    spec = quadric_strata()
    path = write(tmp_path, "strata.json", {"ambient": spec.ambient.to_json(), "components": {k: v.to_json() for k, v in spec.components.items()}})
    data = report(capsys, "count", "--strata", path, "--modulus", "5")
    assert {tuple(r["A"]): r["count"] for r in data["outputs"]["counts"]} == {(): 30, ("D",): 6}


def test_count_budget_exit_code(capsys, quadric_file):
    code, out = invoke(capsys, "count", "--system", quadric_file, "--modulus", "97", "--budget", "100")
    assert code == cli.EXIT_BUDGET
    assert json.loads(out)["error"]["type"] == "budget"


def test_validation_exit_codes(capsys, tmp_path, quadric_file):
    code, out = invoke(capsys, "wonderful", "A", "2", "1,0")
    assert code == cli.EXIT_INVALID and json.loads(out)["error"]["type"] == "validation"
    assert invoke(capsys, "count", "--system", str(tmp_path / "missing.json"), "--modulus", "3")[0] == cli.EXIT_INVALID
    assert invoke(capsys, "count", "--modulus", "3")[0] == cli.EXIT_INVALID
    assert invoke(capsys, "height", "0", "0")[0] == cli.EXIT_INVALID
    assert invoke(capsys, "tauber", "--ratfun", "1/(1-u-u**2)", "--q", "2")[0] == cli.EXIT_INVALID
    assert invoke(capsys, "nonsense")[0] == cli.EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert invoke(capsys, "denef", "--data", str(bad), "--line", str(bad))[0] == cli.EXIT_INVALID


def test_denef(capsys, tmp_path):
    data_path = write(tmp_path, "data.json", AFFINE_LINE)
    line_path = write(tmp_path, "line.json", {"a": {"lambda": "1", "rho": "1"}})
    data = report(capsys, "denef", "--data", data_path, "--line", line_path, "--series", "30")
    out = data["outputs"]
    assert out["pole"]["a"] == "1" and out["pole"]["b"] == 1
    assert out["zeta_at_ones"] == "1"
    assert out["reconstruction_matches"] is True
    assert len(out["series"]) == 31


def test_tauber_ratfun(capsys):
    data = report(capsys, "tauber", "--ratfun", "1/(1-u)^2", "--q", "2")
    (pole,) = data["outputs"]["poles"]
    assert pole["deg_Q"] == 2 and pole["Q"][-1] == "1/2"
    data = report(capsys, "tauber", "--ratfun", "1/(1-4*u**2)", "--q", "2")
    assert data["outputs"]["limits"]["progressions"] == pytest.approx([4 / 3, 2 / 3])


def test_tauber_mixed_orders_note(capsys):
    data = report(capsys, "tauber", "--ratfun", "1/((1-u)**2*(1+u))", "--q", "2", "--period", "2")
    assert data["outputs"]["limits"]["progressions"] is None and data["notes"]
    data = report(capsys, "tauber", "--ratfun", "1/((1-u)**2*(1+u))", "--q", "2", "--period", "2", "--allow-lower-order")
    assert data["outputs"]["limits"]["progressions"] == pytest.approx([0.25, 0.25])


def test_tauber_archimedean(capsys):
    data = report(capsys, "tauber", "--a", "-1", "--b", "1", "--leading", "1", "--z0", "1")
    assert data["outputs"]["asymptotic"]["theta"] == "-1" and data["outputs"]["asymptotic"]["constant"] == "1"
    data = report(capsys, "tauber", "--a", "1", "--b", "1", "--leading", "6", "--place", "2:1", "--place", "3:1")
    assert data["outputs"]["asymptotic"]["theta"] == "3" and data["outputs"]["asymptotic"]["log_degree"] == 2


def test_clemens(capsys, tmp_path):
    incidence = {
        "components": [{"id": "C1"}, {"id": "C2"}, {"id": "C3a"}, {"id": "C3b"}],
        "faces": [
            {"A": ["C1"], "Z": "E1", "has_point": False},
            {"A": ["C2"], "Z": "E2", "has_point": True},
            {"A": ["C3a"], "Z": "E3a", "has_point": True},
            {"A": ["C3b"], "Z": "E3b", "has_point": True},
        ],
        "generators": [[0, 1, 3, 2]],
    }
    path = write(tmp_path, "incidence.json", incidence)
    line = write(tmp_path, "line.json", {c: {"lambda": "1", "rho": "0"} for c in ["C1", "C2", "C3a", "C3b"]})
    data = report(capsys, "clemens", "--incidence", path, "--line", line)
    assert data["outputs"]["analytic"]["faces"] == [{"A": ["C2"], "Z": "E2", "has_point": True, "dim": 0}]
    assert data["outputs"]["analytic_orbit_dimensions"] == {"{C2}:E2": 0}
    assert data["outputs"]["restricted"]["b"] == 1


def test_toric(capsys, tmp_path):
    path = write(tmp_path, "fan.json", fan_p1xp1_swap().to_json())
    out = report(capsys, "toric", "--fan", path)["outputs"]
    assert out["invariant_basis"] == [[1, 1]]
    assert out["analytic_matches_induced"] is True
    assert [row["dim"] for row in out["analytic_face_dimensions"]] == [0, 0]


def test_wonderful(capsys):
    out = report(capsys, "wonderful", "A", "2", "1,1")["outputs"]
    assert out["sigma"] == "2" and out["t"] == 2
    out = report(capsys, "wonderful", "A", "2", "1,1", "--weights", "2,1;1,2")["outputs"]
    assert out["hull"]["sigma"] == "4/3"


def test_height_abscissa_constant(capsys):
    out = report(capsys, "height", "2/3", "1")["outputs"]
    assert out["height"] == 3 and out["product_of_local_norms"] == "3"
    out = report(capsys, "abscissa", "--lambda", "1/2,3/2", "--rho", "1,2", "--epsilon", "0,-1", "--n-minus-d", "0")["outputs"]
    assert out["log_discrepancy"]["a"] == "2/3"
    out = report(capsys, "abscissa", "--lambda", "1,1", "--d", "2,3", "--flags", "0,0")["outputs"]
    assert out["global"]["a"] == "3" and out["local"]["a"] == "-inf"
    out = report(capsys, "constant", "--a", "2", "--b", "3", "--lambda", "1,1,1", "--integral", "4")["outputs"]
    assert out["constant"] == "1"


def test_csv(capsys):
    code, out = invoke(capsys, "--csv", "example", "binary-forms", "--max-degree", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,a,b,matches_2_over_n"
    assert lines[1] == "3,2/3,1,True"
    code, out = invoke(capsys, "--csv", "height", "2/3", "1")
    assert code == 0 and out.splitlines()[0] == "key,value"


def strip_timing(text):
    data = json.loads(text)
    del data["timing"]
    return json.dumps(data)


@pytest.mark.parametrize(
    "argv",
    [
        ("wonderful", "G", "2", "1,2"),
        ("tauber", "--ratfun", "(1+u)/((1-2*u)*(1-u**2))", "--q", "3"),
        ("example", "toric"),
    ],
)
def test_deterministic_output(capsys, argv):
    first = invoke(capsys, *argv)[1]
    second = invoke(capsys, *argv)[1]
    assert strip_timing(first) == strip_timing(second)
    assert json.loads(first)["inputs_digest"] == json.loads(second)["inputs_digest"]


def test_float_format():
    assert cli.dumps(0.1) == "0.10000000000000001"
    assert cli.dumps(2.0) == "2.0"
    assert cli.dumps(float("inf")) == '"inf"'


@pytest.mark.parametrize("name", ["x2p1", "toric", "wonderful", "binary-forms"])
def test_examples_finish_quickly(capsys, name):
    start = time.perf_counter()
    data = report(capsys, "example", name)
    assert time.perf_counter() - start < 60
    assert data["outputs"]


def test_x2p1_report(capsys):
    out = report(capsys, "example", "x2p1", "--prime-bound", "100000")["outputs"]
    assert out["point_counts_match"] is True
    assert out["dyadic_volumes"][-1]["volume"] == "3/4"
    assert abs(out["regularized_product"]["value"] - out["regularized_product"]["target_6_over_pi2"]) < 1e-4
    assert out["vol_D_R"] == pytest.approx(3.141592653589793, abs=1e-9)
    assert out["constant"]["constant"] == pytest.approx(3.0)


def test_examples_touch_every_module(capsys):
    seen = set()
    root = str(Path(cli.__file__).parent)

    def tracer(frame, event, arg):
        if event == "call" and frame.f_code.co_filename.startswith(root):
            seen.add(Path(frame.f_code.co_filename).stem)

    sys.setprofile(tracer)
    try:
        for argv in (("example", "x2p1", "--prime-bound", "1000", "--count-bound", "13"), ("example", "toric"), ("example", "wonderful"), ("example", "binary-forms", "--max-degree", "4")):
            assert cli.run(list(argv)) == 0
    finally:
        sys.setprofile(None)
    capsys.readouterr()
    assert set(MODULES) <= seen


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "igusa", "wonderful", "A", "2", "1,1"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["outputs"]["sigma"] == "2"
