import io
import subprocess
import sys

import pytest

from cylbmw.cli import main


def run_cli(args):
    out = io.StringIO()
    err = io.StringIO()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = main(args)
    finally:
        sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


def test_trace_hook():
    code, out, _ = run_cli(["trace", "--k", "2", "--n", "2", "--word", "e1"])
    assert code == 0
    assert out.strip() == "( 1 ) / ( X )"


def test_invariant_stabilised_unknot():
    code, out, _ = run_cli(["invariant", "--k", "2", "--n", "2",
                            "--word", "s1"])
    assert code == 0
    assert out.strip() == "( 1 ) / ( 1 )"


def test_dims_table():
    code, out, _ = run_cli(["dims", "--k", "2", "--n", "2"])
    assert code == 0
    assert out.strip().splitlines()[-1] == "sum_d2=12 expected=12 OK"


def test_solve_params_k1():
    code, out, _ = run_cli(["solve-params", "--k", "1"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "free: L D P0"
    assert "K = ( L P0^2 ) / ( 1 )" in lines


def test_bratteli_dot():
    code, out, _ = run_cli(["bratteli", "--k", "2", "--n", "2",
                            "--format", "dot"])
    assert code == 0
    assert out.startswith("digraph")


def test_gram_value():
    code, out, _ = run_cli(["gram", "--k", "2", "--n", "1"])
    assert code == 0
    assert out.strip() == "( X^4 - 1 ) / ( X^4 )"


def test_byte_determinism():
    results = [run_cli(["trace", "--k", "2", "--n", "3",
                        "--word", "y s1 e2 s2^-1"]) for _ in range(2)]
    assert results[0] == results[1]
    inv = [run_cli(["invariant", "--k", "2", "--n", "2",
                    "--word", "t0 s1 t0 s1"]) for _ in range(2)]
    assert inv[0] == inv[1]


def test_usage_error_status():
    with pytest.raises(SystemExit) as err:
        run_cli(["trace", "--k", "2"])
    assert err.value.code == 2


def test_engine_error_status():
    code, _, err = run_cli(["trace", "--k", "2", "--n", "2",
                            "--word", "s5"])
    assert code == 1
    assert "error" in err


def test_batch_invariants(tmp_path):
    batch = tmp_path / "words.txt"
    batch.write_text("s1\nt0 s1\n")
    code, out, _ = run_cli(["invariant", "--k", "2", "--n", "2",
                            "--batch", str(batch)])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t")[0] == "s1"
    assert lines[0].split("\t")[1] == "( 1 ) / ( 1 )"
    assert len(lines) == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cylbmw.cli", "dims", "--k", "1", "--n", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "expected=3" in proc.stdout


def test_selfcheck_fast():
    code, out, _ = run_cli(["selfcheck", "--fast", "--seed", "7"])
    assert code == 0
    assert "suites passed" in out
