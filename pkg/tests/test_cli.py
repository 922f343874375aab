"""Command-line behaviour, exit codes, and output schemas."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from quadharm import Poly, VerificationReport
from quadharm.cli import (
    EXIT_ILL_CONDITIONED,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VERIFY,
    main,
)
from quadharm.solver import IllConditionedSystemError

ELLIPSOID = "2x1^2 + 3x2^2 + 4x3^2 - 1"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_text_output(self, capsys):
        code, out, err = run(
            capsys, "solve", "--boundary", "x1^2", "--surface", "x1^2+x2^2-1")
        assert code == EXIT_OK
        assert out.strip() == "h = 1/2*x1^2 - 1/2*x2^2 + 1/2"

    def test_json_schema(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--boundary", "x1^4*x2^3", "--surface", ELLIPSOID,
            "--format", "json", "--verify")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert set(doc) == {"n", "mode", "h", "f", "verify", "timing_ms"}
        assert doc["n"] == 3 and doc["mode"] == "exact"
        assert doc["verify"] == {"harmonic": True, "residual_zero": True}
        f = {tuple(t["e"]): t["c"] for t in doc["f"]}
        assert f[(0, 5, 0)] == "-97950/20144813"

    def test_json_without_verify_omits_key(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--boundary", "x1^2", "--surface",
            "x1^2+x2^2-1", "--format", "json")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert "verify" not in doc

    def test_dim_flag_raises_ambient_space(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--boundary", "x1^2", "--surface",
            "x1^2+x2^2-1", "--dim", "4", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["n"] == 4

    def test_float_mode(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--boundary", "x1^2", "--surface",
            "x1^2+x2^2-1", "--mode", "float", "--format", "json", "--verify")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["mode"] == "float"
        coeffs = {tuple(t["e"]): float(t["c"]) for t in doc["h"]}
        assert coeffs[(2, 0)] == pytest.approx(0.5)

    def test_surface_file_argument(self, capsys, tmp_path):
        path = tmp_path / "surface.json"
        path.write_text('{"a": [1, 1], "c": [0, 0], "d": -1}')
        code, out, _ = run(
            capsys, "solve", "--boundary", "x1^2", "--surface", str(path))
        assert code == EXIT_OK and "h =" in out


class TestDecomposeAndVerify:
    def test_decompose_prints_both_parts(self, capsys):
        code, out, _ = run(
            capsys, "decompose", "--boundary", "x1^2", "--surface", "x1^2+x2^2-1")
        assert code == EXIT_OK
        assert "h = " in out and "f = " in out
        assert "f = 1/2" in out

    def test_verify_command_reports_checks(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--boundary", "x1^4*x2^3", "--surface", ELLIPSOID,
            "--oracle")
        assert code == EXIT_OK
        assert "harmonic" in out.lower()

    def test_verify_failure_exits_three(self, capsys, monkeypatch):
        def fake_verify(p, quadric, dec, **kwargs):
            return VerificationReport(
                harmonic_ok=False, residual_ok=True,
                residual=Poly.zero(p.n), surface_nondegenerate=True)

        monkeypatch.setattr("quadharm.cli.verify_solution", fake_verify)
        code, _, err = run(
            capsys, "verify", "--boundary", "x1^2", "--surface", "x1^2+x2^2-1")
        assert code == EXIT_VERIFY


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ("solve", "--boundary", "x0", "--surface", "x1^2+x2^2-1"),
        ("solve", "--boundary", "x1 +", "--surface", "x1^2+x2^2-1"),
        ("solve", "--boundary", "x1^2", "--surface", "x1^2-x2^2-1"),
        ("solve", "--boundary", "x1^2", "--surface", "x1*x2-1"),
        ("solve", "--boundary", "x1^2", "--surface", "x1^2+x2^2-1",
         "--mode", "float", "--oracle"),
    ])
    def test_input_errors_exit_two(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_INPUT
        assert err.strip()

    def test_ill_conditioned_exits_four(self, capsys, monkeypatch):
        def fake_solve(*args, **kwargs):
            raise IllConditionedSystemError("synthetic")

        monkeypatch.setattr("quadharm.cli.solve_dirichlet", fake_solve)
        code, _, err = run(
            capsys, "solve", "--boundary", "x1^2", "--surface",
            "x1^2+x2^2-1", "--mode", "float")
        assert code == EXIT_ILL_CONDITIONED


class TestBench:
    def test_census_csv_header_and_row(self, capsys):
        code, out, _ = run(
            capsys, "bench", "--dim", "3", "--degree", "4", "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == (
            "n,m,kind,classes,full_ms,part_ms,ratio_pred,ratio_meas,"
            "nonzero_rhs_classes")
        first = lines[1].split(",")
        assert first[0] == "3" and first[1] == "4" and first[3] == "4"

    def test_timed_comparison_fills_measurements(self, capsys):
        code, out, _ = run(
            capsys, "bench", "--dim", "2", "--degree", "3", "--time",
            "--compare-full", "--reps", "2", "--format", "csv")
        assert code == EXIT_OK
        row = out.strip().splitlines()[1].split(",")
        assert float(row[4]) > 0 and float(row[5]) > 0

    def test_text_report_mentions_phases(self, capsys):
        code, out, _ = run(
            capsys, "bench", "--dim", "2", "--degree", "4", "--time",
            "--reps", "2")
        assert code == EXIT_OK
        assert "assemble" in out and "solve" in out


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "quadharm", "solve",
         "--boundary", "x1^2", "--surface", "x1^2+x2^2-1"],
        capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert "1/2*x1^2" in proc.stdout
