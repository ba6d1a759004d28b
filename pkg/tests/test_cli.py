import pytest

from mersennetau.cli import (EXIT_BUDGET, EXIT_CHECK_FAILED, EXIT_INCOMPLETE,
                             EXIT_OK, EXIT_PARSE, EXIT_USAGE, main)
from mersennetau.store import import_bfile

from reference_data import TABLE2_ROWS


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main(["--out", str(out), *argv])
    text = out.read_text(encoding="utf-8") if out.exists() else ""
    return code, text


def test_table2_small(tmp_path):
    code, text = run(tmp_path, "table2", "12")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "d,omega,ratio"
    assert lines[1] == "1,0,"
    assert lines[2] == "2,1,1.4427"
    assert lines[12] == "12,1,0.4024"


def test_table2_full_golden(tmp_path):
    code, text = run(tmp_path, "table2", "40")
    assert code == EXIT_OK
    expected = ["d,omega,ratio"]
    for d, w, ratio in TABLE2_ROWS:
        expected.append(f"{d},{w},{ratio if ratio else ''}")
    assert text.splitlines() == expected


def test_table1_native(tmp_path):
    code, text = run(tmp_path, "table1", "24")
    assert code == EXIT_OK
    rows = [l for l in text.splitlines() if not l.startswith(("#", "N,"))]
    assert rows == ["1,1,2", "2,2,1", "4,4,0.5", "6,6,0.6667", "8,8,0.25",
                    "12,24,0.3333", "18,32,0.8889", "20,48,0.2", "24,96,0.3333"]


def test_figure1_roundtrip(tmp_path):
    code, _ = run(tmp_path, "figure1", "20")
    assert code == EXIT_OK
    bfile = import_bfile(tmp_path / "out.txt")
    assert dict(bfile.entries)[12] == 24
    assert len(bfile.entries) == 20


def test_figure2_values(tmp_path):
    code, text = run(tmp_path, "figure2", "3")
    assert code == EXIT_OK
    rows = [l.split(",") for l in text.splitlines()[2:]]
    assert rows[1] == ["2", "3.0", "3"]  # f(4)/f(2) = 9/3


def test_figure3_roundtrip(tmp_path):
    code, _ = run(tmp_path, "figure3", "29")
    assert code == EXIT_OK
    assert dict(import_bfile(tmp_path / "out.txt").entries)[29] == 3


def test_hcn_series(tmp_path):
    code, text = run(tmp_path, "hcn", "60")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "N,tau,tau_exponent"
    rows = [l.split(",") for l in lines[1:]]
    assert [r[0] for r in rows] == ["1", "2", "4", "6", "12", "24", "36", "48", "60"]
    assert rows[0][2] == "" and rows[1][2] == ""  # log log N undefined
    import math
    expected = math.log2(12) * math.log(math.log(60)) / math.log(60)
    assert float(rows[-1][2]) == pytest.approx(expected)


def test_table_csvs_reimport_as_bfiles(tmp_path):
    # First two columns of the table CSVs parse as sequence data.
    code, _ = run(tmp_path, "table1", "24")
    assert code == EXIT_OK
    entries = dict(import_bfile(tmp_path / "out.txt").entries)
    assert entries[12] == 24 and entries[24] == 96
    code, _ = run(tmp_path, "table2", "12")
    assert code == EXIT_OK
    assert dict(import_bfile(tmp_path / "out.txt").entries)[11] == 2


def test_log_sum(tmp_path):
    code, text = run(tmp_path, "log-sum", "1")
    assert code == EXIT_OK
    values = dict(line.split(",", 1) for line in text.splitlines()[1:])
    assert abs(float(values["residual"]) + 0.6931471805599453) < 1e-12
    code, _ = run(tmp_path, "log-sum", "0")
    assert code == EXIT_USAGE


def test_omega_dist(tmp_path):
    code, text = run(tmp_path, "omega-dist", "10")
    assert code == EXIT_OK
    rows = [l.split(",") for l in text.splitlines()[1:]]
    assert [r[:2] for r in rows] == [["0", "1"], ["1", "4"], ["2", "4"], ["3", "1"]]
    assert rows[0][2] == ""


def test_factor_command(tmp_path, capsys):
    code, text = run(tmp_path, "factor", "m-", "11")
    assert code == EXIT_OK
    assert text.strip() == "23 89"
    assert "phi2 11" in capsys.readouterr().err  # progress goes to stderr
    code, text = run(tmp_path, "factor", "phi2", "29")
    assert code == EXIT_OK
    assert text.strip() == "233 1103 2089"
    code, text = run(tmp_path, "factor", "m-", "1")
    assert code == EXIT_OK
    assert text.strip() == "1"


def test_factor_budget_exhaustion(tmp_path):
    code, text = run(tmp_path, "--budget-secs", "0", "factor", "phi2", "137")
    assert code == EXIT_BUDGET
    assert "C:" in text


def test_store_persistence(tmp_path):
    store_path = tmp_path / "store.txt"
    code = main(["--store", str(store_path), "--out", str(tmp_path / "o1"),
                 "factor", "phi2", "11"])
    assert code == EXIT_OK
    assert "phi2 11 = 23 89" in store_path.read_text()
    # Second run loads the same store and leaves it unchanged.
    before = store_path.read_bytes()
    code = main(["--store", str(store_path), "--out", str(tmp_path / "o2"),
                 "factor", "phi2", "11"])
    assert code == EXIT_OK
    assert store_path.read_bytes() == before


def test_import_and_export(tmp_path):
    source = tmp_path / "in.txt"
    source.write_text("phi2 11 = 23 89\nm- 4 = 3 5\n", encoding="utf-8")
    out = tmp_path / "exported.txt"
    code = main(["--out", str(out), "--import", str(source), "export"])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert "phi2 11 = 23 89" in lines
    assert "m- 4 = 3 5" in lines


def test_export_empty_store_is_header_only(tmp_path):
    out = tmp_path / "empty.txt"
    code = main(["--out", str(out), "export"])
    assert code == EXIT_OK
    assert out.read_text() == "# mersennetau factor store v1\n"


def test_import_bfile_syntax(tmp_path, data_dir):
    minus = data_dir / "tau_mersenne_minus_1080.txt"
    plus = data_dir / "tau_mersenne_plus_records.txt"
    out = tmp_path / "t1.txt"
    code = main(["--out", str(out),
                 "--import", f"tau-m-={minus}", "--import", f"tau-m+={plus}",
                 "table1", "200"])
    assert code == EXIT_OK
    rows = [l for l in out.read_text().splitlines() if not l.startswith(("#", "N,"))]
    assert rows[-3:] == ["144,262144,0.8889", "168,294912,1.5238", "180,6291456,1.4222"]
    header = out.read_text().splitlines()[0]
    assert str(minus) in header


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("phi2 11 23 89\n", encoding="utf-8")
    code = main(["--import", str(bad), "--out", str(tmp_path / "o"), "export"])
    assert code == EXIT_PARSE


def test_corrupt_store_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("m- 4 = 3 7\n", encoding="utf-8")
    code = main(["--import", str(bad), "--out", str(tmp_path / "o"), "export"])
    assert code == EXIT_PARSE


def test_incomplete_exit_code(tmp_path):
    out = tmp_path / "t2.txt"
    code = main(["--out", str(out), "--budget-secs", "0.05", "table2", "137"])
    assert code == EXIT_INCOMPLETE
    rows = out.read_text().splitlines()
    assert any(",>=" in row for row in rows)


def test_check_conj2_native(tmp_path):
    code, text = run(tmp_path, "check-conj2", "40")
    assert code == EXIT_OK
    values = dict(line.split(",", 1) for line in text.splitlines()[1:])
    assert values["exceptions"] == "none"
    assert values["sup_ratio"] == "1.4427"
    assert values["argmax_d"] == "2"
    code, text = run(tmp_path, "check-conj2", "40", "--c", "0.5")
    assert code == EXIT_CHECK_FAILED


def test_check_conj1_native(tmp_path):
    code, text = run(tmp_path, "check-conj1", "20")
    assert code == EXIT_OK
    rows = [l.split(",") for l in text.splitlines()[1:]]
    assert rows[0] == ["1", "2", "2"]
    assert rows[6] == ["18", "0.8889", "8/9"]


def test_check_invariants(tmp_path, capsys):
    code = main(["check-invariants"])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert "FAIL" not in captured.out


def test_tsv_format(tmp_path):
    code, text = run(tmp_path, "--format", "tsv", "table2", "3")
    assert code == EXIT_OK
    assert text.splitlines()[1] == "1\t0\t"


def test_env_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("MERSENNETAU_FORMAT", "tsv")
    code, text = run(tmp_path, "table2", "2")
    assert code == EXIT_OK
    assert "\t" in text.splitlines()[1]


def test_determinism_same_run_twice(tmp_path):
    out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["--out", str(out1), "table2", "30"]) == EXIT_OK
    assert main(["--out", str(out2), "table2", "30"]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_workers_parallel_matches_serial(tmp_path):
    out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["--out", str(out1), "--workers", "2", "table2", "24"]) == EXIT_OK
    assert main(["--out", str(out2), "table2", "24"]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()