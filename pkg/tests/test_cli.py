import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nilforge import bch, cli, dioph_lab, free_lie, rep_theory

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        try:
            code = cli.main(list(args))
        except SystemExit as e:
            code = e.code
    finally:
        sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


# --- golden files -------------------------------------------------------------

@pytest.mark.parametrize("args,golden", [
    (["decompose", "--k", "3", "--s", "6", "--format", "json"], "decompose_k3_s6.json"),
    (["kostka-table", "--s", "5", "--format", "csv"], "kostka_s5.csv"),
    (["kostka-table", "--s", "6", "--format", "csv"], "kostka_s6.csv"),
    (["liouville-demo", "--shape", "[4,1,1]", "--format", "csv"], "liouville_411.csv"),
    (["word-log", "--k", "2", "--s", "3", "--word", "x1^2 x2", "--format", "json"],
     "word_log_x1x1x2.json"),
])
def test_golden_output(args, golden):
    code, out, _ = run(*args)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_decompose_three_six():
    code, out, _ = run("decompose", "--k", "3", "--s", "6", "--format", "json")
    got = {tuple(r["partition"]): r["multiplicity"] for r in json.loads(out)["irreps"]}
    assert got == {(5, 1): 1, (4, 2): 1, (4, 1, 1): 2, (3, 3): 1, (3, 2, 1): 3}


def test_witt_dim_text():
    assert run("witt-dim", "--k", "2", "--s", "6") == (0, "9\n", "")


def test_kostka_table_five_cells():
    _, out, _ = run("kostka-table", "--s", "5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][2] == "[3,2]"
    assert rows[-1] == ["[1,1,1,1,1]", "4", "5", "6", "5", "4", "1"]


# --- each subcommand in each format -------------------------------------------------

EXAMPLES = {
    "witt-dim": ["--k", "3", "--s", "3"],
    "basis": ["--k", "2", "--s", "3"],
    "bch": ["--k", "2", "--s", "3", "--x", "1:1", "--y", "2:1"],
    "word-eval": ["--k", "2", "--s", "3", "--word", "x1 x2 x1^-1 x2^-1",
                  "--args", "1:1;2:1"],
    "word-log": ["--k", "2", "--s", "2", "--word", "x1 x2"],
    "decompose": ["--k", "2", "--s", "5"],
    "kostka-table": ["--s", "4"],
    "kw": ["--shape", "[3,2,1]"],
    "klyachko": ["--shape", "[2,2]", "--k", "3"],
    "mult-free": ["--k", "2", "--s", "6"],
    "hwv": ["--k", "2", "--s", "3", "--shape", "[2,1]"],
    "metabelian-dims": ["--k", "3", "--s", "4"],
    "quotient": ["--k", "2", "--s", "3", "--relations", "112:1"],
    "liouville-demo": ["--toy"],
    "delta": ["--preset", "heisenberg", "--n", "3"],
    "tau": ["--ranks", "2,1,2"],
    "remez-check": ["--trials", "3", "--grid-points", "1000"],
}


def test_examples_cover_every_subcommand():
    assert set(EXAMPLES) | {"fit-beta"} == set(cli.DISPATCH)


@pytest.mark.parametrize("name", sorted(EXAMPLES))
@pytest.mark.parametrize("fmt", cli.FORMATS)
def test_subcommand_formats(name, fmt):
    code, out, err = run(name, *EXAMPLES[name], "--format", fmt)
    assert code == 0, err
    assert out.endswith("\n")
    if fmt == "json":
        json.loads(out)
    elif fmt == "csv":
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) >= 1 and all(len(r) == len(rows[0]) for r in rows)


def test_expected_values_through_cli():
    assert run("kw", "--shape", "[3,2,1]")[1] == "3\n"
    assert run("klyachko", "--shape", "[2,2]", "--k", "3")[1] == "false\n"
    assert run("mult-free", "--k", "2", "--s", "6")[1] == "true\n"
    assert run("metabelian-dims", "--k", "3", "--s", "4")[1] == "15 3\n"
    assert run("tau", "--ranks", "2,1,2")[1] == "10\n"
    assert run("tau", "--k", "2", "--s", "3")[1] == "10\n"
    assert run("hwv", "--k", "2", "--s", "3", "--shape", "[2,1]")[1] == "1*[x1,[x1,x2]]\n"
    _, out, _ = run("word-eval", "--k", "2", "--s", "2", "--word", "x1 x2 x1^-1 x2^-1",
                    "--args", "1:1;2:1", "--format", "json")
    assert json.loads(out)["element"] == [{"word": "12", "coeff": "1"}]
    # in step 3 the commutator picks up 1/2[x1,[x1,x2]] - 1/2[[x1,x2],x2]
    _, out, _ = run("word-eval", *EXAMPLES["word-eval"], "--format", "json")
    assert {r["word"]: r["coeff"] for r in json.loads(out)["element"]} == \
        {"12": "1", "112": "1/2", "122": "-1/2"}
    _, out, _ = run("bch", *EXAMPLES["bch"], "--format", "json")
    coeffs = {r["word"]: r["coeff"] for r in json.loads(out)["element"]}
    assert coeffs == {"1": "1", "2": "1", "12": "1/2", "112": "1/12", "122": "1/12"}


def test_quotient_json_shape():
    _, out, _ = run("quotient", *EXAMPLES["quotient"], "--format", "json")
    data = json.loads(out)
    assert data["dimension"] == 4 and data["grading"] == [2, 1, 1]
    assert all(set(e) == {"i", "j", "k", "c"} for e in data["constants"])


def test_bch_accepts_json_records():
    recs = json.dumps([{"word": "1", "coeff": "1/2"}])
    code, out, _ = run("bch", "--k", "2", "--s", "2", "--x", recs, "--y", "2:2")
    assert code == 0
    assert out == "1/2*x1 + 2*x2 + 1/2*[x1,x2]\n"


def test_delta_then_fit_beta(tmp_path):
    path = tmp_path / "decay.csv"
    code, _, _ = run("delta", "--preset", "heisenberg", "--n", "5", "--format", "csv",
                     "--output", str(path))
    assert code == 0
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "n,ball_size,laws_excluded,delta,argmin_word"
    code, out, _ = run("fit-beta", "--input", str(path), "--tau", "4", "--format", "json")
    assert code == 0 and abs(json.loads(out)["beta"]) < 1e-9


def test_delta_real_mode(tmp_path):
    alg = tmp_path / "line.json"
    alg.write_text(free_lie.abelian(1).dumps(), encoding="utf-8")
    code, out, err = run("delta", "--algebra", str(alg), "--points", "1;1.6180339887498948482",
                         "--digits", "30", "--n", "3", "--format", "json")
    assert code == 0, err
    recs = json.loads(out)["records"]
    assert recs[-1]["n"] == 3 and recs[-1]["argmin_word"] == "x1^2 x2^-1"


def test_identical_config_gives_identical_bytes():
    args = ["remez-check", "--trials", "4", "--seed", "5", "--grid-points", "2000",
            "--format", "json"]
    assert run(*args) == run(*args)


# --- exit codes -----------------------------------------------------------------

@pytest.mark.parametrize("args", [
    ["nope"],
    [],
    ["kw", "--shape", "[1,2]"],
    ["kw", "--shape", "3,x"],
    ["word-log", "--k", "2", "--s", "2", "--word", "x1 y2"],
    ["witt-dim", "--k", "0", "--s", "3"],
    ["witt-dim", "--k", "2"],
    ["decompose", "--k", "2", "--s", "9"],
    ["delta", "--preset", "golden", "--n", "3", "--digits", "20"],
    ["decompose", "--k", "2", "--s", "4", "--format", "xml"],
    ["hwv", "--k", "2", "--s", "4", "--shape", "[2,1]"],
])
def test_usage_errors_exit_two(args):
    code, _, err = run(*args)
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize("args", [
    ["liouville-demo", "--k", "3", "--s", "5", "--shape", "[3,1,1]"],
    ["kw", "--shape", "[3,3]", "--i", "2"],
    ["bch", "--k", "2", "--s", "2", "--x", "21:1", "--y", "1:1"],
    ["word-eval", "--k", "2", "--s", "2", "--word", "x3", "--args", "1:1;2:1"],
    ["fit-beta", "--input", "/nonexistent/decay.csv", "--tau", "4"],
    ["delta", "--n", "2"],
    ["tau"],
    ["mult-free", "--k", "1", "--s", "3"],
])
def test_domain_errors_exit_one(args):
    code, out, err = run(*args)
    assert code == 1
    assert out == "" and err.startswith("nilforge ")


def test_size_cap_override(monkeypatch):
    monkeypatch.setenv("NILFORGE_MAX_S", "9")
    code, out, _ = run("decompose", "--k", "2", "--s", "9")
    assert code == 0 and out.startswith("[8,1]")


# --- dispatch table --------------------------------------------------------------

OPERATIONS = {
    free_lie.witt_dimension, free_lie.lyndon_basis, free_lie.central_quotient,
    bch.bch_product, bch.eval_word, bch.word_to_lie,
    rep_theory.decompose, rep_theory.kostka_table, rep_theory.kw_multiplicity,
    rep_theory.klyachko_occurs, rep_theory.is_multiplicity_free,
    rep_theory.highest_weight_vectors, rep_theory.metabelian_layer_dims,
    dioph_lab.liouville_decay, dioph_lab.decay_series, dioph_lab.bass_guivarch_exponent,
    dioph_lab.remez_check, dioph_lab.fit_beta,
}


def test_dispatch_is_one_to_one():
    ops = [cmd.op for cmd in cli.DISPATCH.values()]
    assert len(ops) == len(set(ops)) == 18
    assert set(ops) == OPERATIONS


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "nilforge.cli", "witt-dim", "--k", "3",
                           "--s", "4"], capture_output=True, text=True,
                          env={**os.environ, "PYTHONHASHSEED": "0"})
    assert proc.returncode == 0 and proc.stdout == "18\n"
