import math

import pytest

from reference_values import REFERENCE_ROWS

from nilflow.cli import EULER_HEADER, SCAN_HEADER, TABLE1_HEADER, fmt, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTable1:
    def test_single_row(self, capsys):
        code, out, _ = run_cli(capsys, "table1", "--h-list", "0.5")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == TABLE1_HEADER
        assert len(lines) == 2
        row = lines[1].split(",")
        assert float(row[0]) == 0.5
        assert float(row[1]) == pytest.approx(REFERENCE_ROWS[0.5][0], abs=1e-6)

    def test_grid_mismatch_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "table1", "--h-list", "0.3")
        assert code == 2
        assert "does not divide" in err

    def test_determinism(self, capsys):
        _, first, _ = run_cli(capsys, "table1", "--h-list", "0.5,0.25")
        _, second, _ = run_cli(capsys, "table1", "--h-list", "0.5,0.25")
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "rows.csv"
        code, out, _ = run_cli(capsys, "table1", "--h-list", "0.5", "--out", str(path))
        assert code == 0
        assert out == ""
        content = path.read_text()
        assert content.startswith(TABLE1_HEADER)
        assert content.endswith("\n")


class TestScan:
    def test_small_scan(self, capsys):
        code, out, _ = run_cli(
            capsys, "scan", "--alpha-min", "0.8", "--alpha-max", "2.0",
            "--steps", "4", "--quad-h", "0.03125", "--phase-h", "2e-3")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == SCAN_HEADER
        assert len(lines) == 5
        for line in lines[1:]:
            cells = line.split(",")
            assert len(cells) == 5
            b = float(cells[1])
            assert 0.0 < b < math.pi
            assert float(cells[4]) <= 5e-3

    def test_single_step_rejected(self, capsys):
        code, _, err = run_cli(capsys, "scan", "--steps", "1")
        assert code == 2
        assert "steps" in err

    def test_bad_range_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "scan", "--alpha-min", "2.0",
                             "--alpha-max", "1.0", "--steps", "4")
        assert code == 2


class TestReduce:
    def test_subriemannian(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "--k1", "1", "--k2", "1",
                               "--format", "csv")
        assert code == 0
        header, values = out.strip().split("\n")
        cols = dict(zip(header.split(","), values.split(",")))
        assert float(cols["alpha"]) == 1.0
        assert float(cols["c"]) == 0.0

    def test_all_ones(self, capsys):
        code, out, _ = run_cli(
            capsys, "reduce", "--a13", "1", "--a14", "1", "--a24", "1",
            "--k1", "1", "--k2", "1", "--format", "csv")
        assert code == 0
        header, values = out.strip().split("\n")
        cols = dict(zip(header.split(","), values.split(",")))
        assert float(cols["alpha"]) == pytest.approx(math.sqrt(3.0), abs=1e-12)

    def test_pretty_format(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "--k1", "1", "--k2", "1")
        assert code == 0
        assert "alpha" in out
        assert "xi_nu_norm" in out

    def test_singular_orbit_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "reduce", "--k1", "0", "--k2", "1")
        assert code == 2
        assert "k1*k2" in err

    def test_incompatible_metric_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "reduce", "--a13", "1", "--a24", "1",
                               "--a34", "2", "--k1", "1", "--k2", "1")
        assert code == 2


class TestEuler:
    def test_zero_initial_point(self, capsys):
        code, out, _ = run_cli(capsys, "euler", "--T", "1", "--h", "0.01",
                               "--stride", "10")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == EULER_HEADER
        assert lines[-1].startswith("# max_abs_dK1=0.0")
        for line in lines[1:-1]:
            cells = [float(v) for v in line.split(",")]
            assert all(v == 0.0 for v in cells[1:])

    def test_conservation_telemetry(self, capsys):
        code, out, _ = run_cli(
            capsys, "euler", "--a13", "1", "--a14", "1", "--a24", "1",
            "--pu", "0.4", "--pv", "-0.3", "--pw", "1.0", "--px", "0.7",
            "--py", "0.2", "--pz", "-0.5", "--T", "10", "--h", "1e-3",
            "--stride", "100")
        assert code == 0
        summary = out.strip().split("\n")[-1]
        assert summary.startswith("# ")
        parts = dict(kv.split("=") for kv in summary[2:].split(" "))
        assert float(parts["max_abs_dK1"]) <= 1e-9
        assert float(parts["max_abs_dK2"]) <= 1e-9
        assert float(parts["max_abs_dH"]) <= 1e-9


class TestVerify:
    def test_poisson_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "poisson")
        assert code == 0
        for line in out.strip().split("\n"):
            assert " pass " in line

    def test_unknown_suite(self, capsys):
        code, _, err = run_cli(capsys, "verify", "nonsense")
        assert code == 2
        assert "unknown suite" in err


class TestFloatFormatting:
    def test_shortest_roundtrip(self):
        for v in (0.5, 0.1, -2.76812630, 1.0 / 3.0, 5.19672801e-10):
            assert float(fmt(v)) == v
        assert fmt(0.5) == "0.5"
        assert fmt(0.1) == "0.1"
