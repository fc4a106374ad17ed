import csv
import io
import json

import pytest

from twistsection import acceptance
from twistsection.cli import main
from twistsection.report import Report, RunConfig


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


@pytest.fixture(scope="module")
def json_run():
    return run(["--format", "json", "--n", "2"])


def test_json_report_round_trip(json_run):
    code, text = json_run
    data = json.loads(text)
    assert code == 0 and data["passed"] is True
    assert len(data["checks"]) == len(acceptance.CHECKS)
    assert Report.from_dict(data).to_dict() == data


def test_text_report(json_run):
    code, text = run(["--n", "2"])
    assert code == 0 and text.strip().endswith("ALL PASS")


def test_deterministic_apart_from_runtime():
    cheap = [(name, fn) for name, fn in acceptance.CHECKS if name.startswith(("1-", "2-", "3-", "8-"))]
    cfg = RunConfig(n=2, seed=5)

    def strip(rec):
        return (rec.name, rec.status, rec.measured, rec.threshold, rec.detail)

    first = [strip(acceptance.run_check(name, fn, cfg)) for name, fn in cheap]
    second = [strip(acceptance.run_check(name, fn, cfg)) for name, fn in cheap]
    assert first == second


@pytest.mark.parametrize("argv", [
    ["--plateau-end", "0.7", "--support-end", "0.6"],
    ["--samples", "500"],
    ["--n", "1"],
    ["--dump", "loop", "--map", "X9"],
    ["--dump", "loop", "--map", "F1,1"],
])
def test_config_errors_exit_2(argv):
    code, _ = run(argv)
    assert code == 2


def test_dump_psi():
    code, text = run(["--dump", "psi"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0
    assert rows[0] == ["r", "psi", "psi_prime"]
    assert len(rows) == 10_001
    assert float(rows[1][1]) == 1.0


def test_dump_matrixpath_and_jacobian():
    code, text = run(["--dump", "matrixpath", "--map", "T1", "--path-samples", "64"])
    header = text.splitlines()[0].split(",")
    assert code == 0 and header[0] == "t" and header[-4:] == ["qw", "qx", "qy", "qz"]
    code, text = run(["--dump", "jacobian", "--map", "F1,2"])
    assert code == 0 and text.splitlines()[0].startswith("t,x,y,z,j11")


def test_dump_loop():
    code, text = run(["--dump", "loop", "--map", "G2", "--gen", "2"])
    data = json.loads(text)
    assert code == 0 and data["word"] == "a2"
