import csv
import io
import json
import math
import subprocess
import sys

import pytest

from youngtasep import young
from youngtasep.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_entropy_pair(capsys):
    code, out, _ = run(capsys, "entropy", "4", "2")
    assert code == 0
    (r,) = rows(out)
    assert float(r["closed"]) == pytest.approx(0.346574, abs=1e-6)
    assert float(r["numeric"]) == pytest.approx(0.346574, abs=1e-6)
    assert float(r["abs_diff"]) < 1e-10


def test_entropy_sweep(capsys):
    code, out, _ = run(capsys, "entropy", "--sweep", "12")
    assert code == 0
    rs = rows(out)
    assert len(rs) == 66 and max(float(r["abs_diff"]) for r in rs) < 1e-10


def test_entropy_sweep_parallel_matches(capsys):
    _, serial, _ = run(capsys, "entropy", "--sweep", "6")
    code, par, _ = run(capsys, "entropy", "--sweep", "6", "--jobs", "2")
    assert code == 0 and par == serial


def test_entropy_domain_error(capsys):
    code, _, err = run(capsys, "entropy", "4", "4")
    assert code == 2 and "DomainError" in err
    assert run(capsys, "entropy")[0] == 2


def test_entropy_tolerance_failure(capsys):
    # an impossible tolerance turns the comparison into a verification failure
    assert run(capsys, "entropy", "5", "2", "--tol", "-1")[0] == 1


def test_verify_suite(capsys):
    code, out, err = run(capsys, "verify", "mtasep")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["schema_version"] == 1
    names = " ".join(c["name"] for c in rep["checks"])
    assert "Parry" in names
    assert all(c["passed"] for c in rep["checks"])
    assert err.count("[PASS]") == len(rep["checks"])


def test_verify_all(capsys, tmp_path):
    out_file = tmp_path / "rep.json"
    code, _, _ = run(capsys, "verify", "all", "--out", str(out_file))
    rep = json.loads(out_file.read_text())
    assert code == 0 and rep["passed"]
    parts = [json.loads(run(capsys, "verify", name)[1])["checks"] for name in ("young", "mtasep", "dimer", "shape")]
    assert [c["name"] for c in rep["checks"]] == [c["name"] for part in parts for c in part]
    assert rep["runtime"] < 60


def test_verify_bogus(capsys):
    assert run(capsys, "verify", "bogus")[0] == 2


def test_sample_plancherel_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "sample", "plancherel", "--n", "2500", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "sample", "plancherel", "--n", "2500", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    tab = young.PathTableau.from_json(a.read_text())
    assert tab.n == 2500


def test_sample_skew(capsys):
    code, out, _ = run(capsys, "sample", "skew", "--shape", "2,2/1", "--seed", "3")
    assert code == 0
    tab = young.PathTableau.from_json(out)
    assert tab.order in (((0, 1), (1, 0), (1, 1)), ((1, 0), (0, 1), (1, 1)))
    assert run(capsys, "sample", "skew", "--shape", "2/1,1")[0] == 2
    assert run(capsys, "sample", "skew")[0] == 2


def test_sample_frozen(capsys):
    code, out, err = run(capsys, "sample", "frozen", "--L", "6", "--N", "3", "--horizon", "10000", "--seed", "1")
    assert code == 0
    events = rows(out)
    rate = len(events) / 1e4
    assert abs(rate - 2.0) <= 3 * math.sqrt(2.0 / 1e4)
    assert "expected=2.000000" in err


def test_sample_chain(capsys):
    code, out, _ = run(capsys, "sample", "chain", "--L", "5", "--N", "1", "--steps", "4", "--seed", "0")
    assert code == 0
    states = [r["state"] for r in rows(out)]
    assert len(states) == 5 and all(s.count("1") == 1 for s in states)
    assert run(capsys, "sample", "chain", "--L", "5")[0] == 2


def test_kernel_projection(capsys, tmp_path):
    svg = tmp_path / "k.svg"
    code, out, _ = run(capsys, "kernel", "projection", "--L", "100", "--N", "30", "--svg", str(svg))
    assert code == 0
    assert float(rows(out)[0]["re"]) == pytest.approx(0.3, abs=1e-15)
    assert svg.read_text().count("<rect") == 100 * 100


def test_kernel_beads(capsys):
    code, out, _ = run(capsys, "kernel", "beads", "--rho", "0.3", "--t", "0.7", "--k", "1")
    assert code == 0
    assert float(rows(out)[0]["abs_diff"]) <= 1e-8


def test_kernel_limit_zero_time(capsys):
    code, out, _ = run(capsys, "kernel", "limit", "--L", "6", "--N", "3", "--t", "0", "--d", "0")
    assert code == 0
    assert float(rows(out)[0]["re"]) == pytest.approx(0.5, abs=1e-15)


def test_kernel_gauge_and_params(capsys):
    assert run(capsys, "kernel", "limit", "--L", "6", "--N", "3", "--t", "1", "--c", "5")[0] == 2
    assert run(capsys, "kernel", "sine", "--k", "1", "--a", "1.5")[0] == 2
    code, out, _ = run(capsys, "kernel", "sine", "--k", "0", "--a", "0.3")
    assert code == 0 and float(rows(out)[0]["value"]) == 0.3
    code, out, _ = run(capsys, "kernel", "finite", "--L", "4", "--N", "2", "--eps", "0.05")
    assert code == 0 and len(rows(out)) == 7 * 4


def test_shape_functional(capsys):
    code, out, _ = run(capsys, "shape", "functional", "--vkls", "--mesh", "2000")
    assert code == 0
    assert float(rows(out)[0]["L"]) == pytest.approx(-0.5, abs=2e-3)
    assert run(capsys, "shape", "functional")[0] == 2


def test_shape_omega_and_residual(capsys):
    code, out, _ = run(capsys, "shape", "omega", "--x", "0")
    assert code == 0 and float(rows(out)[0]["omega"]) == pytest.approx(0.900316, abs=1e-6)
    code, out, _ = run(capsys, "shape", "residual", "--vkls", "--t", "0.7", "--x", "0.3")
    assert code == 0 and abs(float(rows(out)[0]["residual"])) <= 1e-3


def test_config_merge_flags_win(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\nL = 6\nN = 3\nt = 0\nd = 1\n")
    code, out, _ = run(capsys, "--config", str(cfg), "kernel", "limit", "--d", "0")
    assert code == 0
    (r,) = rows(out)
    assert (r["t"], r["d"], float(r["re"])) == ("0.0", "0", pytest.approx(0.5))
    cfg.write_text("vkls = yes\nmesh = 200\n")
    code, out, _ = run(capsys, "--config", str(cfg), "shape", "functional")
    assert code == 0 and rows(out)[0]["mesh"] == "200"
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "--config", str(cfg), "kernel", "limit")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing.cfg"), "kernel", "limit")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "youngtasep", "entropy", "4", "4"], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "youngtasep", "shape", "omega", "--x", "1.5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("t,x,omega")
