import csv
import io
import json
import math
import os
import subprocess
import sys

import jsonschema
import pytest
from scipy import integrate

from nelson_lab.cli import load_schema, run, to_json


def _call(argv, env_seed=None, monkeypatch=None):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


def _report(argv):
    code, text = _call(argv)
    data = json.loads(text)
    assert data["schema_version"] == 1
    jsonschema.validate(data, load_schema("error" if "error" in data else argv[0]))
    return code, data


SMALL_SIM = ["--alpha", "0.05", "--lambda", "5", "--t", "0.5", "--dt", "0.05", "--paths", "10"]


@pytest.mark.parametrize("argv", [
    ["constants"],
    ["constants", "--theta", "1.3", "--phi", "0.5", "--eps", "0.1"],
    ["counterterm", "--alpha", "1", "--lambda", "100", "--mu", "0"],
    ["bound", "--alpha", "2", "--n", "3", "--p", "1.5"],
    ["polaron", "--alpha", "1", "--n", "2"],
    ["partition", "--n", "3", "--verify-min", "--holder-trials", "3"],
    ["simulate", *SMALL_SIM],
    ["simulate", "--model", "polaron", *SMALL_SIM, "--check", "expectation"],
    ["simulate", *SMALL_SIM, "--check", "clark-ocone"],
    ["simulate", *SMALL_SIM, "--check", "supermartingale", "--p", "4"],
    ["verify", "--criteria", "1,3"],
])
def test_reports_validate(argv):
    code, data = _report(argv)
    assert code == 0 and data["command"] == argv[0]


def test_optimize_report():
    code, data = _report(["optimize", "--alpha", "10", "--n", "2", "--starts", "2"])
    assert code == 0
    assert data["breakdown"]["total"] >= data["specializations"]["large_alpha"]
    assert data["specializations"]["small_alpha"] is None


def test_bound_zero_example():
    code, data = _report(["bound", "--alpha", "0", "--n", "1"])
    assert code == 0 and data["total"] == 0
    assert data["metadata"]["default_p"] == 2


def test_partition_example():
    _, data = _report(["partition", "--n", "2"])
    assert data["blocks"] == [[[1, 1], [2, 2]], [[1, 2]]]
    assert data["admissible"] is True
    assert "min_size" not in data


def test_counterterm_example_against_oracle():
    _, data = _report(["counterterm", "--alpha", "1", "--n", "1", "--mu", "1", "--lambda", "1"])
    f = lambda r: 4 * math.pi * r * r / (math.hypot(r, 1) * (r * r / 2 + math.hypot(r, 1)))
    assert data["q"] == pytest.approx(integrate.quad(f, 0, 1, epsabs=1e-13)[0], abs=1e-8)
    assert data["ratio"] is None  # log(1) = 0


def test_domain_error_exit_one():
    code, data = _report(["bound", "--alpha", "1", "--n", "1", "--theta", "2.5"])
    assert code == 1
    assert data["error"] == {"type": "DomainError", "message": data["error"]["message"],
                             "parameter": "theta"}
    code, data = _report(["counterterm", "--alpha", "1", "--lambda", "inf"])
    assert code == 1 and data["error"]["type"] == "DivergentCounterterm"
    code, data = _report(["simulate", "--alpha", "1", "--lambda", "5", "--t", "1", "--dt", "0.3"])
    assert code == 1 and data["error"]["parameter"] == "dt"


@pytest.mark.parametrize("argv", [[], ["bound", "--alpha", "1"], ["bound", "--alpha", "x", "--n", "1"],
                                  ["bound", "--alpha", "1", "--n", "1", "--bogus", "3"],
                                  ["polaron", "--alpha", "1", "--n", "0"], ["launch"],
                                  ["--tol", "-1", "constants"]])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as info:
        run(argv)
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_global_flags_before_or_after_subcommand():
    _, a = _call(["--tol", "1e-8", "counterterm", "--alpha", "1", "--lambda", "10"])
    _, b = _call(["counterterm", "--alpha", "1", "--lambda", "10", "--tol", "1e-8"])
    assert a == b


def test_determinism_and_seed_environment(monkeypatch):
    argv = ["simulate", *SMALL_SIM]
    first, second = _call(argv)[1], _call(argv)[1]
    assert first == second
    monkeypatch.setenv("NELSON_LAB_SEED", "17")
    env_run = json.loads(_call(argv)[1])
    flag_run = json.loads(_call([*argv, "--seed", "17"])[1])
    assert env_run["seed"] == 17 and env_run == flag_run
    explicit = json.loads(_call([*argv, "--seed", "3"])[1])
    assert explicit["seed"] == 3


def test_csv_dump(tmp_path):
    path = tmp_path / "samples.csv"
    _, data = _report(["simulate", *SMALL_SIM, "--dump-csv", str(path)])
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["path_index", "a_t"]
    values = [float(r[1]) for r in rows[1:]]
    assert [int(r[0]) for r in rows[1:]] == list(range(10))
    assert sum(values) / 10 == pytest.approx(data["stats"]["mean"], rel=1e-15)


def test_offsets_flag():
    code, data = _report(["simulate", *SMALL_SIM, "--n", "2", "--offset", "0,0,0", "--offset", "1,0,0"])
    assert code == 0 and data["n"] == 2
    code, data = _report(["simulate", *SMALL_SIM, "--n", "2", "--offset", "0,0"])
    assert code == 1 and data["error"]["parameter"] == "offset"


def test_serializer_formatting():
    text = to_json({"a": 0.1, "b": math.inf, "c": [1, 2.5], "d": True, "e": None, "f": math.nan})
    data = json.loads(text)
    assert data == {"a": 0.1, "b": None, "c": [1, 2.5], "d": True, "e": None, "f": None}
    assert '"a": 0.10000000000000001' in text


def test_verify_failure_exits_nonzero():
    code, data = _report(["verify", "--criteria", "4"])
    assert code == 1 and data["passed"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nelson_lab", "polaron", "--alpha", "1"],
                          capture_output=True, text=True, env={**os.environ}, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lower_no_cutoff"] == -1.25
