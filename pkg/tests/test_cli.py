import json

import numpy as np
import pytest

from htype.cli import main
from htype.clifford import octonion_generators
from htype.geodesic import Trajectory
from htype.verification import run_suite


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_algebra_octonion(tmp_path, capsys):
    assert main(["algebra", "--p", "1", "--out", str(tmp_path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["n"], doc["m"], doc["rho"], doc["validation"]["passed"]) == (8, 7, 8, True)
    assert json.loads((tmp_path / "algebra.json").read_text()) == doc


def test_algebra_heisenberg(tmp_path, capsys):
    cfg = write(tmp_path, {"generators": "builtin:heisenberg", "p": 1})
    assert main(["algebra", "--config", cfg]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["n"], doc["m"], doc["p"], doc["q"]) == (2, 1, 1, 1)


def test_algebra_broken_inline(tmp_path, capsys):
    J = octonion_generators().J.tolist()
    J[2][0][3] = 0
    cfg = write(tmp_path, {"generators": J, "p": 1})
    assert main(["algebra", "--config", cfg]) == 3
    doc = json.loads(capsys.readouterr().out)
    assert "square_minus_identity" in doc["violations"]


def test_algebra_bad_config(tmp_path):
    assert main(["algebra", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["algebra", "--config", write(tmp_path, {"generators": "builtin:nothing"})]) == 2
    assert main(["algebra", "--p", "5"]) == 2
    assert main(["algebra", "--config", write(tmp_path, {"generators": "builtin:octonion", "n": 4})]) == 2
    cfg = write(tmp_path, {"generators": "builtin:clifford", "n": 2, "m": 2})
    assert main(["algebra", "--config", cfg]) == 2


def test_spectrum(capsys):
    assert main(["spectrum", "--p", "1", "--u", "1,0,0,0,0,0,0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["s"], doc["r"], doc["quartets"]) == (1, 4, [])
    assert main(["spectrum", "--p", "4", "--u", "1,2,3,4,5,6,7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["s"], doc["r"], len(doc["quartets"])) == (0, 0, 2)


def test_spectrum_zero_u(capsys):
    assert main(["spectrum", "--p", "2", "--u", "0,0,0,0,0,0,0"]) == 2
    assert "ZeroCenterVelocity" in capsys.readouterr().err
    assert main(["spectrum", "--u", "1,2"]) == 2


def test_geodesic_csv(tmp_path, capsys):
    cfg = write(tmp_path, {"generators": "builtin:heisenberg", "p": 1})
    out = tmp_path / "run"
    assert main(["geodesic", "--config", cfg, "--v0dot", "1,0", "--u0dot", "1",
                 "--samples", "101", "--out", str(out), "--oracle-check"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["momentum_drift"] <= 1e-8 and summary["oracle_deviation"] <= 1e-6
    tr = Trajectory.from_csv((out / "geodesic.csv").read_text())
    assert len(tr) == 101 and str(tr.causal) == "timelike"


def test_geodesic_straight_line(tmp_path, capsys):
    assert main(["geodesic", "--p", "2", "--v0dot", "1,0,0,0,0,0,0,1", "--u0dot", "0,0,0,0,0,0,0",
                 "--out", str(tmp_path)]) == 0
    tr = Trajectory.from_csv((tmp_path / "geodesic.csv").read_text())
    assert not np.any(tr.U) and np.array_equal(tr.V[:, 0], tr.times)


def test_geodesic_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        assert main(["geodesic", "--p", "3", "--seed", "11", "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "geodesic.csv").read_bytes() == (tmp_path / "b" / "geodesic.csv").read_bytes()


@pytest.mark.parametrize("args,count", [(["--p", "2"], 4), (["--p", "4"], 4), (["--p", "1"], 4)])
def test_plot_counts(tmp_path, capsys, args, count):
    assert main(["plot", *args, "--out", str(tmp_path)]) == 0
    files = sorted(p.name for p in tmp_path.glob("*.svg"))
    assert len(files) == count
    for f in files:
        text = (tmp_path / f).read_text()
        assert text.startswith("<svg") and "<polyline" in text and "<circle" in text


def test_plot_kinds(tmp_path, capsys):
    cfg = write(tmp_path, {"generators": "builtin:heisenberg", "p": 1})
    assert main(["plot", "--config", cfg, "--out", str(tmp_path / "h")]) == 0
    assert [p.name for p in (tmp_path / "h").glob("*.svg")] == ["block1_real.svg"]
    assert main(["plot", "--p", "2", "--out", str(tmp_path / "o")]) == 0
    names = sorted(p.name for p in (tmp_path / "o").glob("*.svg"))
    assert [n.split("_")[1] for n in names] == ["imaginary.svg", "imaginary.svg", "spiralplus.svg",
                                                "spiralminus.svg"]


def test_plot_zero_u0dot(tmp_path, capsys):
    assert main(["plot", "--p", "1", "--u0dot", "0,0,0,0,0,0,0", "--out", str(tmp_path)]) == 2


def test_plot_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        main(["plot", "--p", "3", "--seed", "4", "--out", str(tmp_path / d)])
    for f in (tmp_path / "a").glob("*.svg"):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_verify_passes_and_is_reproducible(tmp_path, capsys):
    assert main(["verify", "--seed", "7", "--out", str(tmp_path)]) == 0
    first = capsys.readouterr().out
    assert main(["verify", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["passed"] and len(doc["checks"]) >= 10


@pytest.mark.parametrize("fault,check", [("generator", "fixture_generators_valid"),
                                         ("oracle", "closed_form_vs_oracle")])
def test_verify_fault_injection(capsys, fault, check):
    assert main(["verify", "--inject-fault", fault]) == 1
    failed = [r.name for r in run_suite(0, fault) if not r.passed]
    assert failed == [check]
