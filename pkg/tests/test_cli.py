import csv
import io
import subprocess
import sys

import pytest

from locaray import format_array, load_array, verify
from locaray.cli import EXIT_CAPACITY, EXIT_NO_ARRAY, EXIT_NOT_LOCATING, EXIT_OK, EXIT_USAGE, load_suite, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def printer_file(tmp_path, printer_locating):
    path = tmp_path / "printer.la"
    path.write_text(format_array(printer_locating, 2))
    return str(path)


@pytest.fixture
def covering_file(tmp_path, printer_covering):
    path = tmp_path / "covering.la"
    path.write_text(format_array(printer_covering, 2))
    return str(path)


# --- bound ----------------------------------------------------------------------


def test_bound_three_binary_factors(capsys):
    code, out, _ = run_cli(capsys, "bound", "--model", "2^3", "--strength", "2")
    assert code == EXIT_OK
    assert out.strip() == "low=6 high=9"


def test_bound_rejects_bad_strength(capsys):
    code, _, err = run_cli(capsys, "bound", "--model", "2^3", "--strength", "9")
    assert code == EXIT_USAGE


# --- generate -------------------------------------------------------------------


def test_generate_writes_verifiable_file(capsys, tmp_path):
    out_path = tmp_path / "la.txt"
    code, out, _ = run_cli(
        capsys, "generate", "--model", "2^3", "--strength", "2",
        "--seed", "1", "--timeout", "60", "--out", str(out_path),
    )
    assert code == EXIT_OK
    assert "rows=6" in out
    array, t = load_array(out_path)
    assert t == 2
    assert array.m == 6
    assert verify(array, 2).is_locating_1bar
    # round trip through the verify subcommand
    code, out, _ = run_cli(capsys, "verify", "--array", str(out_path))
    assert code == EXIT_OK


def test_generate_without_out_prints_array(capsys):
    code, out, _ = run_cli(
        capsys, "generate", "--model", "2^3", "--strength", "2",
        "--seed", "3", "--timeout", "60",
    )
    assert code == EXIT_OK
    # metadata first, then the array file body
    assert "rows=6" in out
    body = out[out.index("rows=6"):]
    assert "\n2^3\n6 2\n" in body


def test_generate_missing_model_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "generate", "--strength", "2")
    assert code == EXIT_USAGE


def test_generate_bad_model_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "generate", "--model", "2^0", "--strength", "2")
    assert code == EXIT_USAGE
    assert "2^0" in err


def test_generate_timeout_without_array_exits_2(capsys, monkeypatch):
    # a millisecond is not enough to find anything at this size
    code, out, _ = run_cli(
        capsys, "generate", "--model", "3^10", "--strength", "2",
        "--timeout", "0.001", "--seed", "1",
    )
    assert code == EXIT_NO_ARRAY
    assert "rows=none" in out
    assert "timed_out=true" in out


def test_generate_capacity_exit(capsys, monkeypatch):
    monkeypatch.setenv("LOCARAY_MEM_BUDGET_MB", "0")
    code, out, err = run_cli(
        capsys, "generate", "--model", "2^10", "--strength", "2", "--timeout", "5",
    )
    assert code == EXIT_CAPACITY
    assert "interactions=180" in out


def test_generate_deterministic_files(capsys, tmp_path):
    paths = []
    for name in ("a.la", "b.la"):
        path = tmp_path / name
        code, _, _ = run_cli(
            capsys, "generate", "--model", "2^4", "--strength", "2",
            "--seed", "7", "--timeout", "60", "--out", str(path),
        )
        assert code == EXIT_OK
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_generate_parallel_workers(capsys, tmp_path):
    out_path = tmp_path / "par.la"
    code, out, _ = run_cli(
        capsys, "generate", "--model", "2^3", "--strength", "2",
        "--seed", "5", "--timeout", "60", "--workers", "2", "--out", str(out_path),
    )
    assert code == EXIT_OK
    array, t = load_array(out_path)
    assert verify(array, t).is_locating_1bar


# --- verify ----------------------------------------------------------------------


def test_verify_bundled_printer_fixture(capsys):
    from importlib import resources

    path = resources.files("locaray").joinpath("data/printer.la")
    code, out, _ = run_cli(capsys, "verify", "--array", str(path))
    assert code == EXIT_OK
    assert "is_locating_1bar=true" in out


def test_verify_covering_only_array(capsys, covering_file):
    code, out, _ = run_cli(capsys, "verify", "--array", covering_file)
    assert code == EXIT_NOT_LOCATING
    assert "is_covering=true" in out
    assert "is_locating_1bar=false" in out
    assert "collision_count=36" in out


def test_verify_strength_override(capsys, printer_file):
    code, out, _ = run_cli(capsys, "verify", "--array", printer_file, "--strength", "1")
    assert code == EXIT_OK
    assert "strength=1" in out


def test_verify_unreadable_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "verify", "--array", str(tmp_path / "missing.la"))
    assert code == EXIT_USAGE


# --- locate ----------------------------------------------------------------------


def test_locate_faulty_pair(capsys, printer_file):
    code, out, _ = run_cli(
        capsys, "locate", "--array", printer_file, "--failing", "4,5,10", "--strength", "2"
    )
    assert code == EXIT_OK
    assert "candidates=1" in out
    assert "(2=1, 3=1)" in out


def test_locate_no_failures(capsys, printer_file):
    code, out, _ = run_cli(capsys, "locate", "--array", printer_file, "--failing", "")
    assert code == EXIT_OK
    assert "candidates=0" in out


def test_locate_bad_row_index(capsys, printer_file):
    code, _, err = run_cli(capsys, "locate", "--array", printer_file, "--failing", "11")
    assert code == EXIT_USAGE


# --- bench -----------------------------------------------------------------------


def test_bench_single_tiny_instance(capsys, tmp_path):
    suite = tmp_path / "suite.txt"
    suite.write_text("toy,2^3\n")
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run_cli(
        capsys, "bench", "--suite", str(suite), "--runs", "2", "--strength", "2",
        "--timeout", "60", "--out", str(out_csv),
    )
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out_csv.read_text())))
    assert rows[0] == ["name", "model", "x", "y", "runs", "mean_time_s", "mean_rows", "min_rows"]
    assert len(rows) == 2
    name, model, x, y, runs, mean_time, mean_rows, min_rows = rows[1]
    assert (name, model) == ("toy", "2^3")
    assert int(x) == int(y) == int(runs) == 2
    assert min_rows == "6"
    assert (tmp_path / "bench.csv.log").exists()


def test_bench_empty_suite_yields_header_only(capsys, tmp_path):
    suite = tmp_path / "empty.txt"
    suite.write_text("# nothing here\n")
    log = tmp_path / "bench.log"
    code, out, _ = run_cli(
        capsys, "bench", "--suite", str(suite), "--runs", "1", "--log", str(log)
    )
    assert code == EXIT_OK
    assert out.strip() == "name,model,x,y,runs,mean_time_s,mean_rows,min_rows"


def test_bench_counts_respect_x_le_y_le_runs(capsys, tmp_path):
    # a timeout too small to finish but often enough to find one array
    suite = tmp_path / "suite.txt"
    suite.write_text("tight,3^4\n")
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run_cli(
        capsys, "bench", "--suite", str(suite), "--runs", "2", "--strength", "2",
        "--timeout", "0.35", "--out", str(out_csv), "--seed", "3",
    )
    assert code == EXIT_OK
    row = list(csv.reader(io.StringIO(out_csv.read_text())))[1]
    x, y, runs = int(row[2]), int(row[3]), int(row[4])
    assert 0 <= x <= y <= runs == 2


def test_bundled_suite_has_all_35_instances():
    from locaray.cli import _bundled_suite_text

    entries = load_suite(_bundled_suite_text())
    assert len(entries) == 35
    names = [name for name, _ in entries]
    assert "spin-s" in names and "gcc" in names and "apache" in names
    by_name = dict(entries)
    assert by_name["spin-s"] == "2^13 4^5"
    assert by_name["gcc"] == "2^189 3^10"


def test_bench_rejects_missing_suite(capsys, tmp_path):
    code, _, err = run_cli(capsys, "bench", "--suite", str(tmp_path / "nope.txt"))
    assert code == EXIT_USAGE


def test_suite_parse_errors():
    with pytest.raises(ValueError):
        load_suite("just-a-name\n")
    with pytest.raises(ValueError):
        load_suite("name,\n")


# --- entry point -------------------------------------------------------------------


def test_unknown_subcommand_is_usage_error(capsys):
    assert run_cli(capsys, "frobnicate")[0] == EXIT_USAGE


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "locaray.cli", "bound", "--model", "2^4", "--strength", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "low=7 high=12"
