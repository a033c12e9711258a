"""End-to-end tests for the command-line interface."""

import csv
import io
import json

import pytest

from biqtower.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------------- scan

def test_scan_empty_range(capsys):
    code, out, _ = run(capsys, "scan", "--max-d", "100")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows == []


def test_scan_csv_contains_smallest_triple(capsys):
    code, out, _ = run(capsys, "scan", "--max-d", "1000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows
    assert rows[0]["d"] == "435"  # 5 * 29 * 3
    row = next(r for r in rows if r["d"] == "455")
    assert (row["p1"], row["p2"], row["q"]) == ("5", "13", "7")
    assert row["label"] == "64.180"
    assert row["order"] == "64"
    # gamma = -1 rows leave delta empty
    assert row["gamma"] == "-1" and row["delta"] == ""


def test_scan_json_matches_csv(capsys):
    code, out_csv, _ = run(capsys, "scan", "--max-d", "2000")
    assert code == 0
    code, out_json, _ = run(capsys, "scan", "--max-d", "2000",
                            "--format", "json")
    assert code == 0
    js = json.loads(out_json)
    rows = list(csv.DictReader(io.StringIO(out_csv)))
    assert len(js) == len(rows)
    for a, b in zip(js, rows):
        assert str(a["d"]) == b["d"] and a["label"] == b["label"]


def test_scan_cache_roundtrip(tmp_path, capsys):
    cache = tmp_path / "pairs.cache"
    code, first, _ = run(capsys, "scan", "--max-d", "2000",
                         "--cache", str(cache))
    assert code == 0 and cache.exists()
    code, second, _ = run(capsys, "scan", "--max-d", "2000",
                          "--cache", str(cache))
    assert code == 0
    assert first == second


# ----------------------------------------------------------------- stats

def test_stats_small_range(capsys):
    code, out, _ = run(capsys, "stats", "--max-d", "1000")
    assert code == 0
    assert "64.180" in out
    assert out.strip().splitlines()[-1].startswith("total")


# --------------------------------------------------------------- analyze

def test_analyze_known_triple(capsys):
    code, out, _ = run(capsys, "analyze", "--p1", "5", "--p2", "13",
                       "--q", "7")
    assert code == 0
    assert "64.180" in out


def test_analyze_full_passes(capsys):
    code, out, _ = run(capsys, "analyze", "--p1", "5", "--p2", "13",
                       "--q", "7", "--full")
    assert code == 0
    assert "PASS" in out


def test_analyze_invalid_triple_exits_2(capsys):
    code, out, err = run(capsys, "analyze", "--p1", "5", "--p2", "13",
                         "--q", "11")
    assert code == 2
    assert "legendre" in (out + err)


# ----------------------------------------------------------------- group

def test_group_report(capsys):
    code, out, _ = run(capsys, "group", "--m", "2", "--n", "1",
                       "--norm", "-1")
    assert code == 0
    assert "64.180" in out and "64" in out


def test_group_size_cap_exits_2(capsys):
    code, _, err = run(capsys, "group", "--m", "8", "--n", "6",
                       "--norm", "-1")
    assert code == 2


def test_group_bad_parameters_exit_2(capsys):
    assert run(capsys, "group", "--m", "1", "--n", "1", "--norm", "-1")[0] == 2
    assert run(capsys, "group", "--m", "2", "--n", "1", "--norm", "3")[0] == 2


# --------------------------------------------------------- verify-tables

def test_verify_tables_default_fixtures(capsys):
    code, out, _ = run(capsys, "verify-tables")
    assert code == 0
    assert "0 mismatches" in out


def test_verify_tables_corrupt_dir_exits_2(tmp_path, capsys):
    (tmp_path / "base.txt").write_text("garbage @@ line\n")
    code, out, err = run(capsys, "verify-tables", "--fixtures", str(tmp_path))
    assert code == 2


def test_verify_tables_mismatching_row_exits_1(tmp_path, capsys):
    from importlib import resources

    src = resources.files("biqtower").joinpath("fixtures")
    for entry in src.iterdir():
        (tmp_path / entry.name).write_text(entry.read_text())
    base = tmp_path / "base.txt"
    # corrupt one value: flip the recorded m of the first data row
    lines = base.read_text().splitlines(keepends=True)
    for i, line in enumerate(lines):
        if line.lstrip().startswith("455"):
            lines[i] = line.replace("2, 1", "3, 1", 1)
            break
    base.write_text("".join(lines))
    code, out, _ = run(capsys, "verify-tables", "--fixtures", str(tmp_path))
    assert code == 1
    assert "mismatch" in out
