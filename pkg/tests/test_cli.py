import csv
import io
import json
import subprocess
import sys

import pytest

from wheelsieve import cli
from wheelsieve.wheel import MaskKind, read_header


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_gap_json(capsys):
    code, out, _ = run(capsys, "count", "gap", "--g", "28", "--n", "126", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["empirical"] == 9
    assert rec["class"] == "G1"
    assert rec["deviation"] == pytest.approx(rec["empirical"] - rec["estimate"])


def test_csv_schema(capsys):
    code, out, _ = run(capsys, "count", "twins", "--n", "1000000", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == cli.CSV_COLUMNS
    assert rows[0]["empirical"] == "8168"


def test_table_default(capsys):
    code, out, _ = run(capsys, "count", "twins", "--n", "60")
    assert code == 0
    assert "empirical" in out.splitlines()[0]


def test_scan_exceptions(capsys):
    code, out, _ = run(capsys, "scan", "exceptions", "--m-max", "1000", "--format", "csv")
    assert code == 0
    ms = [int(r["m"]) for r in csv.DictReader(io.StringIO(out))]
    assert ms == [1, 16, 67, 86, 131, 151, 186, 191, 211, 226, 541, 701]


def test_sum_raw_and_corrected(capsys):
    _, out, _ = run(capsys, "count", "sum", "--g", "94", "--raw", "--format", "json")
    assert json.loads(out)["empirical"] == 4.5
    _, out, _ = run(capsys, "count", "sum", "--g", "94", "--format", "json")
    assert json.loads(out)["empirical"] == 5
    code, _, _ = run(capsys, "count", "sum", "--g", "94", "--raw", "--corrected")
    assert code == 2


def test_gap_raw_vs_corrected(capsys):
    _, out, _ = run(capsys, "count", "gap", "--g", "30", "--n", "126", "--raw", "--format", "json")
    raw = json.loads(out)["empirical"]
    _, out, _ = run(capsys, "count", "gap", "--g", "30", "--n", "126", "--format", "json")
    assert raw - json.loads(out)["empirical"] == 1


def test_quad_and_twin_sum(capsys):
    _, out, _ = run(capsys, "count", "quad", "--shift", "1", "--m", "10", "--format", "json")
    assert json.loads(out)["empirical"] == 2
    _, out, _ = run(capsys, "count", "twin-sum", "--m", "20", "--format", "json")
    assert json.loads(out)["empirical"] == 3


def test_estimate_rows_in_parameter_order(capsys):
    code, out, _ = run(capsys, "estimate", "quad-classes", "--n", "6000000", "1200000", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n_or_m"] for r in rows] == ["1000000", "200000"]


def test_estimate_twin_classes_value(capsys):
    _, out, _ = run(capsys, "estimate", "twin-classes", "--m", "166664", "--format", "json")
    rec = json.loads(out)
    rec = rec[0] if isinstance(rec, list) else rec
    assert rec["deviation"] == pytest.approx(32.5356, abs=0.01)


def test_density(capsys):
    _, out, _ = run(capsys, "density", "--seq", "L+R", "--n", "10000", "--density", "schnirelmann", "--format", "json")
    assert json.loads(out)["density"] == 1.0


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "gap", "--g", "27", "--n", "126"],
        ["count", "gap", "--g", "28", "--n", "125"],
        ["count", "twins", "--n", "700000000"],
        ["count", "twins", "--n", "60", "--threads", "0"],
        ["scan", "exceptions", "--m-max", "0"],
        ["count"],
        [],
        ["count", "twins"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "count", "twins", "--n", "600", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["empirical"] == 26


def test_sieve_and_cache(tmp_path, capsys):
    code, _, _ = run(capsys, "sieve", "--m", "5000", "--dir", str(tmp_path))
    assert code == 0
    for kind in "LRT":
        stored, window = read_header(tmp_path / f"{kind}.w6sv")
        assert stored is MaskKind[kind] and window.len == 5000
    before = (tmp_path / "L.w6sv").stat().st_mtime_ns
    _, cached, _ = run(capsys, "count", "twins", "--n", "6000", "--mask-cache", str(tmp_path), "--format", "csv")
    _, fresh, _ = run(capsys, "count", "twins", "--n", "6000", "--format", "csv")
    assert cached == fresh
    assert (tmp_path / "L.w6sv").stat().st_mtime_ns == before


def test_cache_too_small_is_rebuilt(tmp_path, capsys):
    run(capsys, "sieve", "--m", "100", "--dir", str(tmp_path))
    code, out, _ = run(capsys, "count", "twins", "--n", "60000", "--mask-cache", str(tmp_path), "--format", "json")
    assert code == 0 and json.loads(out)["empirical"] == 810
    assert read_header(tmp_path / "L.w6sv")[1].len >= 10000


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "twins", "--n", "600000", "--format", "csv"],
        ["scan", "exceptions", "--m-max", "300000", "--format", "json"],
        ["estimate", "twin-classes", "--m", "1000", "50000", "--format", "json"],
    ],
)
def test_byte_identical_across_threads(capsys, argv):
    outs = {run(capsys, *argv, "--threads", t)[1] for t in ("1", "2", "8")}
    assert len(outs) == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "wheelsieve", "count", "gap", "--g", "28", "--n", "126", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].split(",")[4] == "9"


def test_verify_paper_exit_zero(tmp_path, capsys):
    path = tmp_path / "verify.txt"
    code, _, _ = run(capsys, "verify-paper", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0
    assert len(lines) == 12 and lines[-1] == "11/11 criteria passed"
    assert all(line.startswith("[PASS]") for line in lines[:-1])
