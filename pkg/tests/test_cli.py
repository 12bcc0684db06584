import io
import json
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsvkit.cli import main

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"
COMMANDS = [line.split("\t") for line in (GOLDEN / "commands.txt").read_text().splitlines()]
SYMBOLIC = str(ROOT / "docs" / "golden" / "params_symbolic.json")


def run(*argv, cwd=ROOT):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _in_root(monkeypatch):
    monkeypatch.chdir(ROOT)


@pytest.mark.parametrize("name, cmd", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_golden_output(name, cmd):
    code, out, _ = run(*cmd.split())
    assert f"exit {code}\n{out}" == (GOLDEN / f"{name}.out").read_text()


def test_output_is_deterministic():
    first = run("verify", "--params", SYMBOLIC, "--mutate", "perturb-gamma", "-N", "2", "-D", "1")
    assert first == run("verify", "--params", SYMBOLIC, "--mutate", "perturb-gamma", "-N", "2", "-D", "1")
    assert first[0] == 1


def test_m_action_rendering():
    assert run("act", "--params", SYMBOLIC, "--gen", "M[1]", "--f", "s")[1] == "lam * s * t + lam * t\n"


def test_drop_dt_reports_lm_family():
    code, out, _ = run("verify", "--params", SYMBOLIC, "--mutate", "drop-dt", "-N", "2", "-D", "1", "--format", "json")
    assert code == 1 and "[L,M]" in json.loads(out)["families"]


def test_export_then_classify_round_trip(tmp_path):
    window = tmp_path / "w.json"
    assert run("export-window", "--params", SYMBOLIC, "-o", str(window))[0] == 0
    code, out, _ = run("classify", str(window), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["recognized"]
    assert [s["tag"] for s in doc["stages"]] == ["L3.2", "L3.3", "L3.4", "L3.5", "L3.6", "L3.9", "L3.10", "verify"]


def test_classify_planted_zero(tmp_path):
    window = tmp_path / "w.json"
    run("export-window", "--params", SYMBOLIC, "-N", "2", "-o", str(window))
    doc = json.loads(window.read_text())
    doc["entries"]["2"]["a"] = []
    window.write_text(json.dumps(doc))
    code, out, _ = run("classify", str(window))
    assert code == 1 and "L3.2   FAIL  m=2" in out


def test_iso_witness_b(tmp_path):
    doc = json.loads(Path(SYMBOLIC).read_text())
    doc["b"] = "1"
    other = tmp_path / "p.json"
    other.write_text(json.dumps(doc))
    code, out, _ = run("iso", SYMBOLIC, str(other))
    assert code == 1 and out.strip().endswith("differ in b")


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["act", "--params", "missing.json", "--gen", "M[1]", "--f", "s"], "cannot read"),
        (["act", "--params", SYMBOLIC, "--gen", "Q[1]", "--f", "s"], "generator"),
        (["act", "--params", SYMBOLIC, "--gen", "M[1]"], "--f"),
        (["act", "--params", SYMBOLIC, "--gen", "M[1]", "--f", "s +"], "cannot parse"),
        (["verify", "--params", SYMBOLIC, "-N", "0"], "N must be"),
        (["quotient", "--params", SYMBOLIC, "--gen", "L[1]", "--f", "t"], "must not involve t"),
        (["act", "--params", SYMBOLIC, "--concrete", "0", "1", "1", "--gen", "M[1]", "--f", "s"], "lambda"),
        (["jacobi", "-N", "99"], "at most"),
        (["nonsense"], "invalid choice"),
    ],
)
def test_input_errors_exit_2(argv, fragment):
    code, _, err = run(*argv)
    assert code == 2 and fragment in err


def test_invalid_tau_names_invariant(tmp_path):
    doc = json.loads(Path(SYMBOLIC).read_text())
    doc["tau"][0] = [[0, "1"], [1, "1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run("act", "--params", str(bad), "--gen", "M[1]", "--f", "s")
    assert code == 2 and "tau in t*Q[t]" in err


def test_malformed_window_exit_2(tmp_path):
    bad = tmp_path / "w.json"
    bad.write_text(json.dumps({"schema": 1, "N": 1, "entries": {"1": {"g": [], "a": [], "p": []}}}))
    assert run("classify", str(bad))[0] == 2
    bad.write_text("{not json")
    assert run("classify", str(bad))[0] == 2


@settings(max_examples=80)
@given(st.text(alphabet="stvlamb0123456789+-*/^()[] .λ", max_size=25))
def test_arbitrary_expressions_never_crash(expr):
    code, _, _ = run("act", "--params", SYMBOLIC, "--gen", "Y[1]", "--f", expr)
    assert code in (0, 2)
