"""End-to-end CLI tests driven through main(), asserting on captured bytes."""

import json
import math

import numpy as np
import pytest

from collapsar import CSV_HEADER, format_float
from collapsar.cli import main

HEADER_LINE = ",".join(CSV_HEADER)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestArgumentErrors:
    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_omega_and_x_are_mutually_exclusive(self):
        with pytest.raises(SystemExit) as exc:
            main(["entropy", "--mass", "1", "--omega", "0.1", "--x", "1"])
        assert exc.value.code == 2

    def test_mode_is_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["entropy", "--mass", "1"])
        assert exc.value.code == 2

    def test_bad_mass_is_validation_error(self, capsys):
        code, _, err = run(capsys, ["entropy", "--mass", "-1", "--x", "1"])
        assert code == 2
        assert "error:" in err and "mass" in err

    def test_nonpositive_x_is_validation_error(self, capsys):
        code, _, err = run(capsys, ["entropy", "--mass", "1", "--x", "0"])
        assert code == 2
        assert "x must be" in err

    def test_sweep_needs_two_points(self, capsys):
        code, _, err = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "0.1", "--omega-max", "0.2",
             "--points", "1"],
        )
        assert code == 2
        assert "points" in err

    def test_sweep_needs_increasing_range(self, capsys):
        code, _, err = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "0.2", "--omega-max", "0.1",
             "--points", "5"],
        )
        assert code == 2
        assert "omega" in err


class TestNumericalFailures:
    def test_infrared_mode_exits_3(self, capsys):
        code, out, err = run(capsys, ["entropy", "--mass", "1", "--x", "1e-9"])
        assert code == 3
        assert out == ""
        assert "below floor" in err

    def test_crossover_without_sign_change_exits_3(self, capsys):
        code, _, err = run(capsys, ["crossover", "--mass", "1", "--lo", "2", "--hi", "3"])
        assert code == 3
        assert "no sign change" in err

    def test_sweep_with_no_representable_mode_exits_3(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "1e-10", "--omega-max", "1e-9",
             "--points", "2"],
        )
        assert code == 3
        lines = out.strip().split("\n")
        # Rows are still emitted so the failure is inspectable.
        assert lines[0] == HEADER_LINE
        assert len(lines) == 5
        assert all("below floor" in li for li in lines[1:])


class TestEntropyCommand:
    def test_csv_shape_and_header(self, capsys):
        code, out, err = run(capsys, ["entropy", "--mass", "1", "--x", "1"])
        assert code == 0 and err == ""
        lines = out.strip().split("\n")
        assert lines[0] == HEADER_LINE
        assert len(lines) == 3
        assert lines[1].split(",")[3] == "boson"
        assert lines[2].split(",")[3] == "fermion"

    def test_single_statistics(self, capsys):
        code, out, _ = run(
            capsys, ["entropy", "--mass", "1", "--x", "1", "--stats", "fermion"]
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 2
        assert lines[1].split(",")[3] == "fermion"

    def test_json_rows_mirror_csv_schema(self, capsys):
        code, out, _ = run(
            capsys, ["entropy", "--mass", "1", "--x", "1", "--format", "json"]
        )
        assert code == 0
        docs = json.loads(out)
        assert [d["statistics"] for d in docs] == ["boson", "fermion"]
        for d in docs:
            assert tuple(d) == CSV_HEADER
            assert d["error"] is None
            assert abs(d["gap"]) < 1e-9

    def test_omega_entry_point(self, capsys):
        omega = 1.0 / (4.0 * math.pi)
        _, out_omega, _ = run(capsys, ["entropy", "--mass", "1", "--omega", repr(omega)])
        _, out_x, _ = run(capsys, ["entropy", "--mass", "1", "--x", "1"])
        # Same physics either way; x differs only in the last couple of ulp
        # through the omega round trip, entropies by no more.
        row_o = out_omega.strip().split("\n")[1].split(",")
        row_x = out_x.strip().split("\n")[1].split(",")
        assert abs(float(row_o[0]) - float(row_x[0])) < 1e-15
        assert abs(float(row_o[4]) - float(row_x[4])) < 1e-14

    def test_byte_determinism(self, capsys):
        argv = ["entropy", "--mass", "1", "--x", "0.7"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_output_file_matches_stdout(self, capsys, tmp_path):
        argv = ["entropy", "--mass", "1", "--x", "0.7"]
        _, stdout_text, _ = run(capsys, argv)
        target = tmp_path / "report.csv"
        code, out, _ = run(capsys, argv + ["--output", str(target)])
        assert code == 0 and out == ""
        assert target.read_text() == stdout_text

    def test_unwritable_output_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            ["entropy", "--mass", "1", "--x", "1",
             "--output", str(tmp_path / "no" / "such" / "dir.csv")],
        )
        assert code == 2
        assert "error:" in err


class TestSweepCommand:
    def test_row_count_and_exit(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "0.01", "--omega-max", "0.1",
             "--points", "4"],
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == HEADER_LINE
        assert len(lines) == 1 + 4 * 2

    def test_partial_failure_keeps_exit_0(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "1e-8", "--omega-max", "0.1",
             "--points", "3", "--stats", "boson"],
        )
        assert code == 0
        lines = out.strip().split("\n")[1:]
        assert len(lines) == 3
        assert "below floor" in lines[0]
        assert lines[-1].split(",")[-1] == ""

    def test_linear_grid(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--mass", "1", "--omega-min", "0.01", "--omega-max", "0.03",
             "--points", "3", "--grid", "linear", "--stats", "boson"],
        )
        assert code == 0
        omegas = [float(li.split(",")[1]) for li in out.strip().split("\n")[1:]]
        # 17 significant digits round-trip doubles exactly.
        assert omegas == [float(o) for o in np.linspace(0.01, 0.03, 3)]

    def test_sweep_byte_determinism(self, capsys):
        argv = [
            "sweep", "--mass", "1", "--omega-min", "0.005", "--omega-max", "0.5",
            "--points", "7", "--format", "json",
        ]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second
        assert len(json.loads(first)) == 14


class TestCrossoverCommand:
    def parse(self, text):
        fields = {}
        for line in text.strip().split("\n"):
            key, _, value = line.partition(" = ")
            fields[key] = value
        return fields

    def test_output_fields(self, capsys):
        code, out, err = run(capsys, ["crossover", "--mass", "1"])
        assert code == 0 and err == ""
        fields = self.parse(out)
        assert list(fields) == ["x_star", "omega_star", "residual", "iterations"]
        x_star = float(fields["x_star"])
        assert x_star == pytest.approx(0.40671361302244355, abs=2e-8)
        assert abs(float(fields["residual"])) <= 1e-8
        assert int(fields["iterations"]) > 0
        assert float(fields["omega_star"]) == pytest.approx(
            x_star / (4.0 * math.pi), rel=1e-15
        )

    def test_mass_scaling_is_exact(self, capsys):
        _, out1, _ = run(capsys, ["crossover", "--mass", "1"])
        _, out2, _ = run(capsys, ["crossover", "--mass", "2"])
        f1, f2 = self.parse(out1), self.parse(out2)
        # x* is geometric, mass free; omega* halves exactly when m doubles
        # because scaling by 2 is exact in binary floating point.
        assert f1["x_star"] == f2["x_star"]
        assert f1["residual"] == f2["residual"]
        assert float(f1["omega_star"]) == 2.0 * float(f2["omega_star"])

    def test_tight_bracket(self, capsys):
        code, out, _ = run(
            capsys, ["crossover", "--mass", "1", "--lo", "0.3", "--hi", "0.5"]
        )
        assert code == 0
        assert float(self.parse(out)["x_star"]) == pytest.approx(
            0.40671361302244355, abs=2e-8
        )


class TestStateAndSpectrum:
    def test_boson_state_document(self, capsys):
        code, out, _ = run(
            capsys, ["state", "--mass", "1", "--x", "1", "--stats", "boson"]
        )
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"squeezing", "basis", "diag", "offdiag_norm"}
        assert doc["squeezing"]["statistics"] == "boson"
        assert doc["squeezing"]["x"] == pytest.approx(1.0, rel=1e-15)
        assert doc["basis"] == list(range(len(doc["diag"])))
        assert doc["offdiag_norm"] == 0.0
        q = math.exp(-2.0)
        assert doc["diag"][0] == pytest.approx(1.0 - q, abs=1e-12)

    def test_fermion_state_document(self, capsys):
        code, out, _ = run(
            capsys, ["state", "--mass", "1", "--x", "1", "--stats", "fermion"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["basis"] == [[0, 0], [0, 1], [1, 0], [1, 1]]
        assert sum(doc["diag"]) == pytest.approx(1.0, abs=1e-12)

    def test_spectrum_adds_fit_columns(self, capsys):
        code, out, _ = run(
            capsys, ["spectrum", "--mass", "1", "--x", "1", "--stats", "boson"]
        )
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {
            "squeezing", "basis", "diag", "offdiag_norm", "mean_occ", "T_ratio"
        }
        assert doc["mean_occ"] == pytest.approx(1.0 / math.expm1(2.0), rel=1e-9)
        assert doc["T_ratio"] == pytest.approx(1.0, abs=1e-6)

    def test_spectrum_null_fit_when_unfittable(self, capsys):
        code, out, _ = run(
            capsys, ["spectrum", "--mass", "1", "--x", "30", "--stats", "boson"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["T_ratio"] is None

    def test_keep_hor_side(self, capsys):
        _, out_o, _ = run(
            capsys, ["state", "--mass", "1", "--x", "1", "--stats", "boson"]
        )
        _, out_h, _ = run(
            capsys,
            ["state", "--mass", "1", "--x", "1", "--stats", "boson", "--keep", "hor"],
        )
        # Schmidt twins: identical spectra on either side of the cut.
        assert json.loads(out_o)["diag"] == json.loads(out_h)["diag"]

    def test_state_byte_determinism(self, capsys):
        argv = ["state", "--mass", "1", "--x", "2", "--stats", "fermion"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second


def test_format_float_examples():
    assert format_float(1.0) == "1"
    assert format_float(0.1) == "0.10000000000000001"
