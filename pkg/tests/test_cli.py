from __future__ import annotations

import json

import numpy as np
import pytest

from holonomy.cli import main
from holonomy.gstar import mat2_to_json, random_sl2
from holonomy.tangle import CLOSED_TREFOIL, TREFOIL


@pytest.fixture
def colors(tmp_path, rng):
    paths = []
    for i in range(2):
        g = random_sl2(rng, 0.2)
        p = tmp_path / f"c{i}.json"
        p.write_text(json.dumps({"matrix": mat2_to_json(g), "branch": 1}))
        paths.append(p)
    return paths


def _run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_verify_gstar(tmp_path):
    code, rep = _run(["verify", "gstar", "--samples", "50", "--seed", "3"], tmp_path)
    assert code == 0
    assert rep["passed"] and rep["schema_version"] == 1
    assert rep["reports"][0]["suite"] == "gstar"


def test_verify_failing_tolerance_exits_one(tmp_path):
    code, rep = _run(["verify", "gstar", "--samples", "20", "--tol", "gstar_product=0"],
                     tmp_path)
    assert code == 1 and not rep["passed"]


def test_verify_deterministic(tmp_path):
    argv = ["verify", "reps", "--samples", "5", "--seed", "11"]
    main(argv + ["--out", str(tmp_path / "a.json")])
    main(argv + ["--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.parametrize("argv", [
    ["verify", "gstar", "--l", "4"],
    ["verify", "gstar", "--l", "1"],
    ["verify", "gstar", "--tol", "nonsense=1"],
    ["verify", "gstar", "--tol", "broken"],
    ["verify", "nosuchsuite"],
    ["oracle", "kashaev", "--knot", "5_2", "--N", "3"],
    ["oracle", "kashaev", "--knot", "4_1", "--N", "0"],
])
def test_usage_errors(argv, tmp_path):
    assert main(argv) == 2


def test_rmatrix(colors, tmp_path):
    code, rep = _run(["rmatrix", "--x", str(colors[0]), "--y", str(colors[1]),
                      "--lifts", "1", "2"], tmp_path)
    assert code == 0
    # lifts are reported as Casimir values; outputs carry them swapped
    assert rep["lifts"]["out"] == rep["lifts"]["in"][::-1]
    assert rep["residuals"]["contract"] < 1e-8
    M = np.array(rep["matrix"])
    assert M.shape == (9, 9, 2)


def test_rmatrix_bad_lift(colors):
    assert main(["rmatrix", "--x", str(colors[0]), "--y", str(colors[1]),
                 "--lifts", "0", "3"]) == 2


def test_rmatrix_malformed_color(tmp_path, colors):
    bad = tmp_path / "bad.json"
    bad.write_text('{"matrix": [[1, 0], [0, 0]]}')
    assert main(["rmatrix", "--x", str(bad), "--y", str(colors[1])]) == 2
    bad.write_text("{not json")
    assert main(["rmatrix", "--x", str(bad), "--y", str(colors[1])]) == 2


def test_rmatrix_nongeneric_color_is_runtime_error(tmp_path, colors):
    # lower-triangular entry zero: Fbar^l vanishes and no cyclic module exists
    g = np.array([[1.2, 0.3], [0.0, 1 / 1.2]])
    p = tmp_path / "ng.json"
    p.write_text(json.dumps({"matrix": mat2_to_json(g)}))
    assert main(["rmatrix", "--x", str(p), "--y", str(colors[1])]) == 3


def test_invariant_trefoil(tmp_path, colors):
    t = tmp_path / "trefoil.txt"
    t.write_text(TREFOIL + "\n")
    cols = tmp_path / "cols.json"
    cols.write_text("[" + colors[0].read_text() + "]")
    code, rep = _run(["invariant", str(t), "--colors", str(cols)], tmp_path)
    assert code == 0
    assert rep["string_knot"]
    assert rep["residuals"]["centrality"] < 1e-8


def test_invariant_closed(tmp_path, colors):
    t = tmp_path / "closed.txt"
    t.write_text(CLOSED_TREFOIL)
    cols = tmp_path / "cols.json"
    cols.write_text("[" + colors[0].read_text() + "]")
    code, rep = _run(["invariant", str(t), "--colors", str(cols)], tmp_path)
    assert code == 0
    assert rep["expected_zero"] and rep["near_zero"]


def test_invariant_width_mismatch(tmp_path, colors):
    t = tmp_path / "x.txt"
    t.write_text("xp 1\n")
    cols = tmp_path / "cols.json"
    cols.write_text("[" + colors[0].read_text() + "]")
    assert main(["invariant", str(t), "--colors", str(cols)]) == 2
    t.write_text("twist 1\n")
    assert main(["invariant", str(t), "--colors", str(cols)]) == 2


def test_oracle_kashaev(tmp_path):
    code, rep = _run(["oracle", "kashaev", "--knot", "4_1", "--N", "3"], tmp_path)
    assert code == 0
    assert abs(rep["value"][0] - 13) < 1e-12 and abs(rep["value"][1]) < 1e-12
    code, hi = _run(["oracle", "kashaev", "--knot", "4_1", "--N", "3", "--precision", "high"],
                    tmp_path, "hi.json")
    assert code == 0 and abs(hi["value"][0] - 13) < 1e-12


def test_oracle_limit(tmp_path):
    code, rep = _run(["oracle", "limit", "--knot", "3_1", "--l", "3"], tmp_path)
    assert code == 0
    assert "oracle" in rep and "aligned_cauchy_diffs" in rep


def test_stdout_when_no_out(capsys):
    assert main(["oracle", "kashaev", "--knot", "3_1", "--N", "2"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["knot"] == "3_1"


def test_verify_ybe_example(tmp_path):
    code, rep = _run(["verify", "ybe", "--l", "3", "--samples", "20", "--seed", "7"], tmp_path)
    assert code == 0
    names = {c["name"]: c for c in rep["reports"][0]["checks"]}
    assert names["ybe.residual[l=3]"]["value"] < 1e-7


def test_documented_exit_codes(tmp_path, capsys):
    assert main(["verify", "algebra", "--l", "4"]) == 2
    assert main(["oracle", "kashaev", "--knot", "9_99", "--N", "5"]) == 2
    assert main(["oracle", "kashaev", "--knot", "4_1", "--N", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == [1.0, 0.0]


def test_rmatrix_identity_colors_exit_three(tmp_path):
    p = tmp_path / "one.json"
    p.write_text(json.dumps({"matrix": mat2_to_json(np.eye(2)), "branch": 1}))
    assert main(["rmatrix", "--x", str(p), "--y", str(p)]) == 3
