import contextlib
import io
import json
import os
import subprocess
import sys

import pytest

from cli_cases import CASES
from fopk.cli import main
from fopk.structures import parse_tk

HERE = os.path.dirname(os.path.abspath(__file__))
FIX = os.path.join(HERE, "fixtures")
GOLD = os.path.join(HERE, "golden")


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(FIX)
    old_stdin = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            status = main(list(argv))
    finally:
        sys.stdin = old_stdin
        os.chdir(cwd)
    return status, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    with open(os.path.join(GOLD, f"{name}.json")) as fh:
        golden = fh.read()
    with open(os.path.join(GOLD, f"{name}.status")) as fh:
        status = int(fh.read())
    got_status, got, _ = run(CASES[name])
    assert (got_status, got) == (status, golden)
    assert json.loads(got)["schema"] == "fopk/1"


@pytest.mark.parametrize("argv", [
    [],
    ["no-such-command"],
    ["validate", "--nope"],
    ["enumerate", "--k", "2"],
    ["enumerate", "--k", "2", "--sizes", "1,x"],
    ["validate", "--in", "missing_file.json"],
])
def test_usage_errors_exit_2(argv):
    status, out, err = run(argv)
    assert status == 2
    assert out == "" and err


def test_domain_error_exits_1_with_field():
    status, out, _ = run(["validate", "--in", "-"], stdin='{"kind": "tk_model", "k": 2}')
    assert status == 1
    doc = json.loads(out)
    assert doc["error"] == "ParseError" and doc["field"] == "part_sizes"


def test_invalid_model_reports_violation():
    status, out, _ = run(["validate", "--in", "model_bad.json"])
    doc = json.loads(out)
    assert status == 1 and not doc["valid"] and doc["violations"][0]["axiom"] == 4


def test_star_order_round_trip(tmp_path):
    status, out, _ = run(["star-order", "--in", "model_a.json"])
    assert status == 0
    ranking = json.loads(out)["ranking"]
    with open(os.path.join(FIX, "model_a.json")) as fh:
        model = parse_tk(json.load(fh))
    doc = {"k": model.k, "part_sizes": list(model.part_sizes), "ranking": ranking}
    status, out, _ = run(["from-star", "--in", "-"], stdin=json.dumps(doc))
    assert status == 0 and parse_tk(json.loads(out)["model"]) == model


def test_blowup_recover_round_trip():
    status, out, _ = run(["recover", "--in", "model_a.json"])
    spec = json.loads(out)["blowup"]
    status, out, _ = run(["blowup", "--in", "-"], stdin=json.dumps(spec))
    with open(os.path.join(FIX, "model_a.json")) as fh:
        model = parse_tk(json.load(fh))
    assert status == 0 and parse_tk(json.loads(out)["model"]) == model


def test_enumerate_count():
    status, out, _ = run(["enumerate", "--k", "2", "--sizes", "2,2,2", "--count-only"])
    assert status == 0 and json.loads(out)["count"] == 360


def test_out_file(tmp_path):
    target = tmp_path / "out.json"
    status, out, _ = run(["validate", "--in", "model_a.json", "--out", str(target)])
    assert status == 0 and out == ""
    assert json.loads(target.read_text())["valid"] is True


def test_console_script_matches_in_process():
    argv = CASES["ramsey"]
    proc = subprocess.run([sys.executable, "-m", "fopk.cli", *argv], cwd=FIX,
                          capture_output=True, text=True, check=False)
    status, out, _ = run(argv)
    assert (proc.returncode, proc.stdout) == (status, out)
