import csv
import io
import json
import math
import subprocess
import sys
import time

import pytest

from photonbell import cli
from photonbell.errors import ConvergenceError
from photonbell.oracles import OracleCheck


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


def strip_timestamp(text):
    doc = json.loads(text)
    doc["manifest"].pop("timestamp")
    return doc


def test_prob_crossed_at_threshold(capsys):
    res = as_json(capsys, "prob", "--process", "1", "--beta", "0", "--chi1", "0", "--chi2", "90")["results"]
    assert res["joint"] == pytest.approx(0.5, abs=1e-15)
    assert res["marginal_first"] == 0.5
    qsum = sum(res[k] for k in ("p_aligned_aligned", "p_aligned_orthogonal", "p_orthogonal_aligned", "p_orthogonal_orthogonal"))
    assert qsum == pytest.approx(1.0, abs=1e-12)


def test_prob_relativistic_process2(capsys):
    res = as_json(capsys, "prob", "--process", "2", "--beta", "1", "--chi1", "10", "--chi2", "80")["results"]
    assert res["joint"] == 0.25
    assert res["dependence_gap"] == 0.0


def test_prob_bad_beta(capsys):
    code, out, err = run(capsys, "prob", "--process", "1", "--beta", "2", "--chi1", "0", "--chi2", "0")
    assert code == cli.EXIT_INPUT
    assert "beta" in err and out == ""


@pytest.mark.parametrize(
    "process,beta,angles,expected,verdict",
    [
        ("1", "0", "0,67,135,23", 0.207, "ViolatesAbove"),
        ("2", "0.2", "0,23,45,67", -1.12, "ViolatesBelow"),
        ("2", "0.9999", "0,23,45,67", -0.5, "WithinLHV"),
    ],
)
def test_bell_examples(capsys, process, beta, angles, expected, verdict):
    res = as_json(capsys, "bell", "--process", process, "--beta", beta, "--angles", angles)["results"]
    assert res["s"] == pytest.approx(expected, abs=5e-3)
    assert res["verdict"] == verdict
    assert len(res["terms"]) == 6
    assert sum(res["terms"].values()) == pytest.approx(res["s"], abs=1e-15)


def test_bell_table_lists_terms(capsys):
    code, out, _ = run(capsys, "bell", "--process", "1", "--beta", "0", "--angles", "0,23,45,67")
    assert code == 0
    assert "ViolatesBelow" in out
    assert "-P(chi1',-)" in out
    assert all(line == line.rstrip() for line in out.splitlines())


def test_bell_bad_angles(capsys):
    assert run(capsys, "bell", "--process", "1", "--beta", "0", "--angles", "0,23,45")[0] == cli.EXIT_INPUT
    assert run(capsys, "bell", "--process", "1", "--beta", "0", "--angles", "0,23,nan,1")[0] == cli.EXIT_INPUT


def test_scan_reproduces_table(capsys):
    code, out, _ = run(capsys, "scan", "--process", "2", "--angles", "0,23,45,67", "--betas", "0.01,0.05,0.1,0.2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    got = {float(r["beta"]): float(r["s"]) for r in rows}
    for beta, s in [(0.2, -1.12), (0.1, -1.184), (0.05, -1.201), (0.01, -1.207)]:
        assert got[beta] == pytest.approx(s, abs=5e-3)


def test_scan_frontier(capsys):
    res = as_json(capsys, "scan", "--process", "2", "--angles", "0,23,45,67", "--betas", "0.1", "--frontier", "below")["results"]
    assert 0.2 < res["frontier_beta"] < 0.5


def test_scan_empty_range(capsys):
    assert run(capsys, "scan", "--process", "1", "--angles", "0,23,45,67", "--betas", "")[0] == cli.EXIT_INPUT
    assert run(capsys, "scan", "--process", "1", "--angles", "0,23,45,67", "--beta-range", "0:1:0")[0] == cli.EXIT_INPUT
    assert run(capsys, "scan", "--process", "1", "--angles", "0,23,45,67")[0] == cli.EXIT_INPUT


def test_dense_scan_is_fast(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(capsys, "scan", "--process", "2", "--angles", "0,23,45,67", "--beta-range", "0:1:200", "--format", "csv")
    assert code == 0 and time.perf_counter() - t0 < 1.0
    assert len(out.splitlines()) == 201


def test_csv_seventeen_digits(capsys):
    _, out, _ = run(capsys, "bell", "--process", "1", "--beta", "0.3", "--angles", "0,23,45,67", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["s"] == format(float(row["s"]), ".17g")
    assert len(row["s"].lstrip("-").replace(".", "").lstrip("0")) == 17


@pytest.mark.parametrize(
    "argv",
    [
        ["bell", "--process", "2", "--beta", "0.3", "--angles", "0,23,45,67"],
        ["simulate", "--process", "1", "--beta", "0.2", "--angles", "0,23,45,67", "--n", "2000", "--seed", "42"],
        ["prob", "--process", "1", "--beta", "0.6", "--chi1", "23", "--chi2", "67"],
    ],
)
def test_outputs_byte_stable(capsys, argv):
    a = run(capsys, *argv, "--format", "csv")[1]
    b = run(capsys, *argv, "--format", "csv")[1]
    assert a == b
    j1 = run(capsys, *argv, "--format", "json")[1]
    j2 = run(capsys, *argv, "--format", "json")[1]
    assert strip_timestamp(j1) == strip_timestamp(j2)


def test_manifest_contents(capsys):
    man = as_json(capsys, "simulate", "--process", "2", "--beta", "0.01", "--angles", "0,23,45,67", "--n", "500", "--seed", "7")["manifest"]
    assert man["subcommand"] == "simulate"
    p = man["parameters"]
    assert p["seed"] == 7 and p["shards"] == 1 and p["generator"] == "philox4x64-10"
    assert [p[k] for k in ("chi1_deg", "chi2_deg", "chi1p_deg", "chi2p_deg")] == [0.0, 23.0, 45.0, 67.0]
    assert p["chi1p_rad"] == math.radians(45)
    assert {"version", "timestamp", "tool"} <= set(man)


@pytest.mark.parametrize("deg", [0, 23, 45, 67, 90, 135])
def test_degree_conversion_within_one_ulp(deg):
    assert abs(math.radians(deg) - deg * math.pi / 180) <= math.ulp(deg * math.pi / 180)
    assert cli.parse_angles(f"{deg},0,0,0")[0] == deg


def test_simulate_reference_value(capsys):
    res = as_json(capsys, "simulate", "--process", "2", "--beta", "0.01", "--angles", "0,23,45,67", "--n", "1000000", "--seed", "12345")["results"]
    assert abs(res["s_hat"] - res["s_exact"]) <= 3 * res["s_se"]
    assert res["s_exact"] == pytest.approx(-1.207, abs=5e-4)


def test_simulate_rejects_zero_n(capsys):
    code, _, err = run(capsys, "simulate", "--process", "1", "--beta", "0", "--angles", "0,23,45,67", "--n", "0")
    assert code == cli.EXIT_INPUT and "--n" in err


def test_simulate_rejects_bad_seed(capsys):
    args = ["simulate", "--process", "1", "--beta", "0", "--angles", "0,23,45,67", "--n", "200"]
    assert run(capsys, *args, "--seed", "-3")[0] == cli.EXIT_INPUT
    assert run(capsys, *args, "--seed", str(2**64))[0] == cli.EXIT_INPUT


def test_search_min_and_max(capsys):
    lo = as_json(capsys, "search", "--process", "1", "--beta", "0", "--objective", "min")["results"]
    hi = as_json(capsys, "search", "--process", "1", "--beta", "0", "--objective", "max")["results"]
    assert lo["s"] <= -1.207
    assert hi["s"] >= 0.207


def test_search_reports_proximity(capsys):
    res = as_json(capsys, "search", "--process", "2", "--beta", "0.5", "--objective", "min", "--grid-points", "12")["results"]
    assert res["verdict"] == "WithinLHV"
    assert res["distance_outside_lhv"] == 0.0
    assert 0.0 <= res["distance_to_nearest_bound"] < 0.5


@pytest.mark.parametrize("level", ["integrals", "delta-limit", "amplitude"])
def test_oracle_levels_pass(capsys, level):
    doc = as_json(capsys, "oracle", "--level", level)
    assert doc["results"]["passed"] is True
    assert all(c["max_deviation"] <= c["tolerance"] for c in doc["results"]["checks"])


def test_oracle_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_level", lambda level, spec: [OracleCheck("fake", 1.0, 1e-12, 1)])
    code, out, _ = run(capsys, "oracle", "--level", "amplitude")
    assert code == cli.EXIT_ORACLE
    assert "FAILURES" in out


def test_convergence_failure_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("quadrature budget exhausted", estimate=0.0, error=1.0)

    monkeypatch.setattr(cli, "run_level", boom)
    assert run(capsys, "oracle", "--level", "integrals")[0] == cli.EXIT_CONVERGENCE


def test_exit_codes_are_distinct():
    assert len({cli.EXIT_OK, cli.EXIT_INPUT, cli.EXIT_ORACLE, cli.EXIT_CONVERGENCE}) == 4


def test_output_file_and_sidecar(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--process", "1", "--angles", "0,23,45,67", "--betas", "0,0.5", "--format", "csv", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("process,beta,")
    side = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert side["subcommand"] == "scan"

    jtarget = tmp_path / "bell.json"
    run(capsys, "bell", "--process", "1", "--beta", "0", "--angles", "0,23,45,67", "--format", "json", "--output", str(jtarget))
    assert set(json.loads(jtarget.read_text())) == {"manifest", "results"}
    assert not (tmp_path / "bell.json.manifest.json").exists()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "photonbell.cli", "bell", "--process", "1", "--beta", "0", "--angles", "0,67,135,23", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "ViolatesAbove" in proc.stdout
