import io
import json
import subprocess
import sys

import jsonschema
import pytest

from elgot_iter.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from elgot_iter.report import LAW_REPORT_SCHEMA

STORE = {"type": "object", "additionalProperties": {"type": "integer"}}
RUN_SCHEMA = {
    "type": "object",
    "required": ["backend", "status"],
    "properties": {
        "backend": {"enum": ["intensional", "extensional"]},
        "status": {"enum": ["converged", "diverges", "unknown"]},
        "store": STORE,
        "steps": {"type": "integer"},
        "fuel": {"type": "integer"},
    },
}
TRACE_SCHEMA = {
    "type": "object",
    "required": ["entries", "status"],
    "properties": {
        "status": {"enum": ["converged", "diverged", "fuel-exhausted"]},
        "entries": {"type": "array", "items": {"type": "object", "required": ["step", "kind", "store"]}},
        "store": STORE,
    },
}
COLLAPSE_SCHEMA = {
    "type": "object",
    "required": ["agree", "extensional", "collapsed"],
    "properties": {"agree": {"type": "boolean"}},
}


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_run_countdown(programs):
    code, out, _ = cli("run", programs / "countdown.whl", "--backend", "extensional")
    assert (code, out) == (EXIT_OK, "x = 3\n")
    code, out, _ = cli("run", programs / "countdown.whl", "--backend", "intensional")
    assert (code, out) == (EXIT_OK, "x = 3\n(8 steps)\n")


def test_run_loop(programs):
    code, out, _ = cli("run", programs / "loop.whl", "--backend", "intensional", "--fuel", "10")
    assert (code, out) == (EXIT_OK, "UNKNOWN after 10 steps\n")
    assert cli("run", programs / "loop.whl")[1] == "DIVERGES\n"


def test_run_with_assignments(programs):
    code, out, _ = cli("run", programs / "collatz.whl", "--set", "n=7", "--output", "json")
    assert code == EXIT_OK
    assert json.loads(out)["store"]["steps"] == 16


def test_trace_text(programs):
    code, out, _ = cli("trace", programs / "countdown.whl", "--fuel", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "fuel exhausted after 3 steps"
    code, out, _ = cli("trace", programs / "loop.whl", "--detect-cycles")
    assert out.splitlines()[-1].startswith("diverges")


def test_collapse(programs):
    code, out, _ = cli("collapse", programs / "gcd.whl")
    assert code == EXIT_OK and out.startswith("AGREE\n")
    code, out, _ = cli("collapse", programs / "loop.whl")
    assert code == EXIT_OK and "collapsed:   DIVERGES" in out


@pytest.mark.parametrize("name", ["countdown", "loop", "gcd", "collatz"])
def test_program_json_validates(programs, name):
    path = programs / f"{name}.whl"
    for backend in ("intensional", "extensional"):
        code, out, _ = cli("run", path, "--backend", backend, "--output", "json", "--fuel", "50")
        assert code == EXIT_OK
        jsonschema.validate(json.loads(out), RUN_SCHEMA)
    jsonschema.validate(json.loads(cli("trace", path, "--output", "json", "--fuel", "20")[1]), TRACE_SCHEMA)
    jsonschema.validate(json.loads(cli("collapse", path, "--output", "json")[1]), COLLAPSE_SCHEMA)


def test_laws_restriction_json():
    code, out, _ = cli("laws", "--suite", "restriction", "--max-size", "2", "--output", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, LAW_REPORT_SCHEMA)
    assert doc["failures"] == [] and doc["suite"] == "restriction"
    assert "elapsed_ms" in doc


def test_laws_json_is_byte_identical():
    argv = ("laws", "--suite", "delay", "--suite", "sigma", "--max-size", "30", "--seed", "5",
            "--output", "json", "--deterministic")
    first, second = cli(*argv), cli(*argv)
    assert first == second
    docs = json.loads(first[1])
    assert [d["suite"] for d in docs] == ["delay", "sigma"]
    for d in docs:
        jsonschema.validate(d, LAW_REPORT_SCHEMA)
        assert "elapsed_ms" not in d


def test_laws_list_and_text():
    code, out, _ = cli("laws", "--list")
    assert code == EXIT_OK and "elgot-monad" in out
    code, out, _ = cli("laws", "--suite", "finset", "--max-size", "2")
    assert code == EXIT_OK and out.startswith("PASS finset:")


def test_usage_errors(programs, tmp_path):
    assert cli("run")[0] == EXIT_USAGE
    assert cli("run", programs / "countdown.whl", "--fuel", "-1")[0] == EXIT_USAGE
    assert cli("laws", "--suite", "nope")[0] == EXIT_USAGE
    assert cli("laws", "--max-size", "0")[0] == EXIT_USAGE
    code, _, err = cli("run", tmp_path / "missing.whl")
    assert code == EXIT_USAGE and "cannot read" in err
    assert cli("laws", "--suite", "elgot-monad", "--max-size", "9")[0] == EXIT_USAGE


def test_program_errors_exit_1(tmp_path):
    bad = tmp_path / "bad.whl"
    bad.write_text("var x:4; x := y")
    code, _, err = cli("run", bad)
    assert code == EXIT_FAIL and "1:15" in err
    assert cli("run", tmp_path / "bad.whl", "--set", "q=1")[0] == EXIT_FAIL


def test_budget_override(monkeypatch):
    monkeypatch.setenv("ELGOT_ITER_BUDGET", "10")
    assert cli("laws", "--suite", "elgot-algebra")[0] == EXIT_USAGE
    monkeypatch.setenv("ELGOT_ITER_BUDGET", "lots")
    assert cli("laws", "--suite", "finset")[0] == EXIT_USAGE


def test_module_entry_point(programs):
    proc = subprocess.run([sys.executable, "-m", "elgot_iter", "run", str(programs / "countdown.whl")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "x = 3\n"
