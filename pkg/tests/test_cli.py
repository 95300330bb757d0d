import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from capslep.capop import CapProblem
from capslep.cli import SCHEMA, ConfigError, dump_solution, load_solution, main, parse_config
from capslep.slepian import solve_order

F11_0 = 0.6123724356957945
EPS_M = 2.0 ** -53


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def header(text):
    out = {}
    for line in text.splitlines():
        if line.startswith("# ") and " = " in line:
            k, v = line[2:].split(" = ", 1)
            out[k] = v
    return out


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


@pytest.mark.parametrize("theta,N", [("60", 90.0), ("30", 24.115427318801), ("90", 180.0)])
def test_shannon(capsys, theta, N):
    code, out, _ = run_cli(capsys, "shannon", "--L", "18", "--theta", theta)
    assert code == 0
    h = header(out)
    assert float(h["N"]) == pytest.approx(N, abs=1e-9)
    assert abs(float(h["sum_N_m_minus_N"])) <= 1e-9
    rows = table(out)
    assert [int(r["m"]) for r in rows] == list(range(-18, 19))
    assert math.fsum(float(r["N_m"]) for r in rows) == pytest.approx(N, abs=1e-9)


def test_shannon_full_sphere(capsys):
    code, out, _ = run_cli(capsys, "shannon", "--L", "1", "--theta", "180")
    assert code == 0 and header(out)["N"] == "3.0"


def test_spectrum_K_step(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--L", "18", "--theta", "60", "--matrix", "K")
    assert code == 0
    vals = [float(r["value"]) for r in table(out)]
    assert len(vals) == 18 * 20  # sum over m of L - l_m + 1 is L(L+2)
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    above = sum(v > 0.5 for v in vals)
    assert abs(above - 90) <= 5
    assert max(vals[200:]) < 1e-3


def test_spectrum_J_has_no_accumulation(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--L", "18", "--theta", "60", "--matrix", "J")
    assert code == 0
    by_m = {}
    for r in table(out):
        by_m.setdefault(int(r["m"]), []).append((int(r["n"]), float(r["value"])))
    for m, rows in by_m.items():
        vals = [v for _, v in sorted(rows)]
        assert min(np.diff(vals), default=1.0) > 1e-6


def test_spectrum_small(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--L", "1", "--theta", "90")
    rows = table(out)
    assert code == 0 and len(rows) == 3
    assert sorted(int(r["m"]) for r in rows) == [-1, 0, 1]


def test_solve_csv(capsys):
    code, out, _ = run_cli(capsys, "solve", "--L", "1", "--theta", "90", "--m", "1")
    rows = table(out)
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["eta"]) == pytest.approx(0.875, abs=1e-15)
    assert float(rows[0]["chi"]) == pytest.approx(-1.0, abs=1e-14)
    assert float(rows[0]["g_1"]) == 1.0


def test_eval_interior_energy(capsys):
    code, out, _ = run_cli(capsys, "eval", "--L", "18", "--theta", "60", "--m", "0", "--n", "1")
    h = header(out)
    assert code == 0
    assert float(h["eta"]) == pytest.approx(1.0, abs=1e-6)
    assert float(h["cap_energy_fraction"]) == pytest.approx(float(h["eta"]), abs=1e-9)


def test_eval_small_case(capsys):
    code, out, _ = run_cli(capsys, "eval", "--L", "1", "--theta", "90", "--m", "1",
                           "--n", "1", "--grid", "0:180:37")
    rows = table(out)
    assert code == 0 and len(rows) == 37
    for r in rows:
        x = math.cos(math.radians(float(r["theta_deg"])))
        assert float(r["G"]) == pytest.approx(F11_0 * (1 + x), abs=1e-15)
    assert float(rows[0]["x"]) == 1.0 and float(rows[-1]["x"]) == -1.0


def test_eval_pole_is_zero_unless_m_is_one(capsys):
    for m in (-2, 0, 2):
        code, out, _ = run_cli(capsys, "eval", "--L", "4", "--theta", "50", "--m", str(m),
                               "--grid", "0:10:2")
        assert code == 0 and float(table(out)[0]["G"]) == 0.0


def test_eval_vector_field(capsys):
    code, out, _ = run_cli(capsys, "eval", "--L", "1", "--theta", "90", "--m", "1",
                           "--basis", "tau", "--sign", "-", "--phi", "90", "--grid", "90:90:1")
    assert code == 0 and header(out)["order"] == "-1"
    r = table(out)[0]
    want = F11_0 / math.sqrt(2 * math.pi) * np.exp(-0.5j * math.pi)
    assert float(r["re_tau_plus"]) == 0.0 and float(r["im_tau_plus"]) == 0.0
    assert complex(float(r["re_tau_minus"]), float(r["im_tau_minus"])) == pytest.approx(want, abs=1e-15)
    code, out, _ = run_cli(capsys, "eval", "--L", "3", "--theta", "90", "--m", "1",
                           "--basis", "polar", "--grid", "0:180:3")
    assert code == 0 and len(table(out)) == 3


def test_flm(capsys):
    code, out, _ = run_cli(capsys, "flm", "--l", "1", "--m", "0", "--grid", "-1:1:201")
    rows = table(out)
    assert code == 0 and len(rows) == 201
    best = max(rows, key=lambda r: float(r["F"]))
    assert float(best["x"]) == 0.0 and float(best["F"]) == pytest.approx(math.sqrt(3) / 2, abs=1e-16)
    code, out, _ = run_cli(capsys, "flm", "--l", "1", "--m", "1", "--grid", "-1:1:11")
    for r in table(out):
        assert float(r["F"]) == pytest.approx(F11_0 * (1 + float(r["x"])), abs=1e-15)
    code, out, _ = run_cli(capsys, "flm", "--l", "2", "--m", "-1", "--grid", "-1:-1:1")
    assert float(table(out)[0]["F"]) == pytest.approx(-1.5811388300841898, abs=1e-15)


def test_error_analysis(capsys):
    code, out, _ = run_cli(capsys, "error-analysis", "--L", "18", "--theta", "60", "--m", "1")
    assert code == 0
    rows = table(out)
    assert len(rows) == 18
    assert max(float(r["err_J"]) for r in rows) <= 120 * EPS_M
    assert min(float(r["gap_eta"]) for r in rows) < 1e-10
    assert min(float(r["gap_chi"]) for r in rows) > 1e-3
    assert float(header(out)["max_err_J_over_eps"]) <= 120
    code, out, _ = run_cli(capsys, "error-analysis", "--L", "2", "--theta", "90", "--m", "1")
    for r in table(out):
        assert float(r["err_K"]) <= 10 * EPS_M and float(r["err_J"]) <= 10 * EPS_M


def test_verify(capsys):
    code, out, _ = run_cli(capsys, "verify", "--L", "12", "--theta", "60")
    assert code == 0
    lines = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(lines) >= 10 and all(line.startswith("PASS") for line in lines)
    code, _, _ = run_cli(capsys, "verify", "--L", "1", "--theta", "180")
    assert code == 0


@pytest.mark.parametrize("args", [
    ["shannon", "--L", "18", "--theta", "0"],
    ["shannon", "--L", "0", "--theta", "60"],
    ["shannon", "--L", "3", "--theta", "190"],
    ["shannon", "--theta", "60"],
    ["solve", "--L", "3", "--theta", "60"],
    ["solve", "--L", "3", "--theta", "60", "--m", "4"],
    ["eval", "--L", "3", "--theta", "60", "--m", "1", "--n", "9"],
    ["flm", "--l", "2", "--m", "3"],
    ["flm", "--l", "2", "--m", "1", "--grid", "-2:1:3"],
    ["spectrum", "--L", "3", "--theta", "60", "--grid", "1:2"],
    ["spectrum", "--L", "3", "--theta", "60", "--threads", "-1"],
    ["nosuch"],
    ["eval", "--solution", "/nonexistent/solution.json", "--n", "1"],
])
def test_config_errors(capsys, args):
    code, _, err = run_cli(capsys, *args)
    assert code == 2
    assert "configuration error" in err or "usage" in err


def test_verify_defaults():
    cfg = parse_config(["verify"])
    assert (cfg.L, cfg.theta_deg) == (12, 60.0)
    assert parse_config(["error-analysis", "--L", "4", "--theta", "30"]).m == 1
    assert parse_config(["flm", "--l", "2", "--m", "-1", "--grid", "-1:0:3"]).grid.start == -1.0


def test_solution_round_trip(tmp_path, capsys):
    path = tmp_path / "sol.json"
    code, _, _ = run_cli(capsys, "solve", "--L", "12", "--theta", "37.5", "--m", "-3",
                         "--format", "json", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["schema"] == SCHEMA
    sol = load_solution(path.read_text())
    ref = solve_order(CapProblem.from_degrees(12, 37.5).order(-3))
    assert np.array_equal(sol.g, ref.g) and np.array_equal(sol.eta, ref.eta)
    assert np.array_equal(sol.chi, ref.chi)
    assert dump_solution(sol, 37.5) == path.read_text()
    code, direct, _ = run_cli(capsys, "eval", "--L", "12", "--theta", "37.5", "--m", "-3",
                              "--n", "2", "--grid", "0:180:19")
    code2, loaded, _ = run_cli(capsys, "eval", "--solution", str(path), "--n", "2", "--grid", "0:180:19")
    assert code == code2 == 0
    assert table(direct) == table(loaded)


def test_solution_rejects_bad_documents():
    text = dump_solution(solve_order(CapProblem(2, 1.0).order(0)), 57.0)
    doc = json.loads(text)
    for bad in ({**doc, "extra": 1}, {k: v for k, v in doc.items() if k != "eta"},
                {**doc, "schema": "capslep-solution/2"}, {**doc, "g": [[1.0]]}):
        with pytest.raises(ConfigError):
            load_solution(json.dumps(bad))
    with pytest.raises(ConfigError):
        load_solution("not json")


def test_csv_round_trips_bitwise(capsys):
    code, out, _ = run_cli(capsys, "solve", "--L", "18", "--theta", "33.3", "--m", "2")
    rows = table(out)
    sol = solve_order(CapProblem.from_degrees(18, 33.3).order(2))
    got = np.array([[float(r[f"g_{l}"]) for l in sol.problem.degrees] for r in rows])
    assert np.array_equal(got, sol.g)
    assert np.array_equal([float(r["eta"]) for r in rows], sol.eta)
    for line in out.splitlines()[3:]:
        for field in line.split(",")[1:]:
            digits = field.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
            assert len(digits) <= 17


def test_deterministic_output(tmp_path):
    outs = []
    for threads in ("1", "4"):
        path = tmp_path / f"spec{threads}.csv"
        assert main(["spectrum", "--L", "12", "--theta", "45", "--threads", threads,
                     "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "capslep", "shannon", "--L", "18", "--theta", "60"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(header(proc.stdout)["N"]) == pytest.approx(90.0, abs=1e-12)
    proc = subprocess.run([sys.executable, "-m", "capslep", "shannon", "--L", "18", "--theta", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
