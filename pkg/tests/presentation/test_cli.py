import csv
import json

import numpy as np
import pytest

from application.services.synthesis import parse_netlist, reconstruction_error
from config import Settings
from infrastructure.storage import read_shot_records
from presentation.cli import main


@pytest.fixture
def run(tmp_path):
    """Invoke the CLI in-process with output under tmp_path."""

    def _run(*argv, out="out"):
        return main([*argv, "--out", str(tmp_path / out), "--mkdirs"], Settings())

    return _run


def _rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


class TestHelp:
    """Test suite for argument parsing and usage output."""

    def test_help_mentions_units_and_shots(self, capsys):
        assert main(["--help"], Settings()) == 0
        text = capsys.readouterr().out
        assert "radians" in text
        assert "8192" in text

    def test_subcommand_help(self, capsys):
        assert main(["phase-grid", "--help"], Settings()) == 0
        assert "--grid-theta" in capsys.readouterr().out

    def test_unknown_command(self):
        assert main(["plot"], Settings()) == 2

    def test_bad_flag_value(self, run):
        assert run("compile", "--kicks", "many") == 2


class TestClassicalMap:
    """Test suite for the classical-map command."""

    def test_default_lattice(self, run, tmp_path):
        assert run("classical-map") == 0
        rows = _rows(tmp_path / "out" / "classical_map.csv")
        assert rows[0] == ["point", "kick", "x", "y", "z", "theta", "phi"]
        assert len(rows) - 1 == 289 * 151

    def test_single_point_without_kicks(self, run, tmp_path):
        assert run("classical-map", "--theta", "1.0", "--phi", "0.5", "--kicks", "0") == 0
        rows = _rows(tmp_path / "out" / "classical_map.csv")
        assert len(rows) == 2
        assert float(rows[1][5]) == pytest.approx(1.0)

    def test_json_output(self, run, tmp_path):
        assert run("classical-map", "--grid-theta", "2", "--grid-phi", "3", "--kicks", "4", "--format", "json") == 0
        data = json.loads((tmp_path / "out" / "classical_map.json").read_text())
        assert len(data["rows"]) == 6 * 5
        assert data["fixed"] == {"kappa": 2.5, "n_kicks": 4}

    def test_rejects_other_rotation_angles(self, run):
        assert run("classical-map", "--p", "1.0") == 2


class TestCompile:
    """Test suite for the compile command."""

    def test_ibmq_netlist(self, run, tmp_path):
        assert run("compile", "--level", "ibmq", "--kicks", "100") == 0
        text = (tmp_path / "out" / "circuit_ibmq.txt").read_text()
        gate_lines = [line for line in text.splitlines() if line and not line.startswith("#")]
        assert sum(line.startswith("CNOT ") for line in gate_lines) == 8
        report = json.loads((tmp_path / "out" / "compile_report.json").read_text())
        assert report["counts"]["CNOT"] == 8
        assert report["reconstruction_error"] < 1e-8

    def test_rotation_gate_count(self, run, tmp_path):
        assert run("compile", "--kappa", "4.5", "--kicks", "7") == 0
        sequence = parse_netlist((tmp_path / "out" / "circuit_rotation.txt").read_text())
        assert len(sequence) == 46
        assert sequence.cnot_count == 8

    def test_zero_kicks_is_identity(self, run, tmp_path):
        assert run("compile", "--kicks", "0") == 0
        sequence = parse_netlist((tmp_path / "out" / "circuit_rotation.txt").read_text())
        assert reconstruction_error(sequence, np.eye(4)) < 1e-8

    def test_verify_netlist(self, run, tmp_path):
        assert run("compile", "--kicks", "12") == 0
        netlist = tmp_path / "out" / "circuit_rotation.txt"
        assert run("compile", "--kicks", "12", "--verify-netlist", str(netlist), out="check") == 0
        report = json.loads((tmp_path / "check" / "verify_report.json").read_text())
        assert report["passed"] is True

    def test_corrupted_netlist_fails(self, run, tmp_path):
        assert run("compile", "--kicks", "12") == 0
        netlist = tmp_path / "out" / "circuit_rotation.txt"
        lines = netlist.read_text().splitlines()
        index = next(i for i, line in enumerate(lines) if line.startswith("RY "))
        gate, qubit, angle = lines[index].split()
        lines[index] = f"{gate} {qubit} {float(angle) + 0.1!r}"
        netlist.write_text("\n".join(lines) + "\n")
        assert run("compile", "--kicks", "12", "--verify-netlist", str(netlist), out="check") == 2
        report = json.loads((tmp_path / "check" / "verify_report.json").read_text())
        assert report["passed"] is False

    def test_pruned_netlist_still_verifies(self, run, tmp_path):
        assert run("compile", "--kappa", "0", "--kicks", "4", "--prune") == 0
        report = json.loads((tmp_path / "out" / "compile_report.json").read_text())
        assert report["pruned"] is True
        assert report["written_counts"]["CNOT"] == 8
        netlist = tmp_path / "out" / "circuit_rotation.txt"
        assert run("compile", "--kappa", "0", "--kicks", "4", "--verify-netlist", str(netlist), out="check") == 0


class TestSweepCommands:
    """Test suite for the concurrence sweep commands."""

    def test_kappa_sweep_csv(self, run, tmp_path):
        assert run("kappa-sweep", "--kappas", "0,2.5", "--kicks", "5") == 0
        rows = _rows(tmp_path / "out" / "kappa_sweep.csv")
        assert rows[0] == ["kappa", "theta", "phi", "n_kicks", "mode", "value"]
        assert float(rows[1][-1]) < 1e-8
        assert len(rows) == 3

    def test_per_kick_map(self, run, tmp_path):
        assert run("kappa-sweep", "--kappas", "1,2", "--kicks", "3", "--per-kick") == 0
        rows = _rows(tmp_path / "out" / "kappa_kick_map.csv")
        assert rows[0][:2] == ["kappa", "kick"]
        assert len(rows) == 1 + 2 * 3

    def test_phase_grid_header(self, run, tmp_path):
        assert run("phase-grid", "--grid-theta", "3", "--grid-phi", "4", "--kicks", "2") == 0
        rows = _rows(tmp_path / "out" / "phase_grid.csv")
        assert rows[0] == ["theta", "phi", "kappa", "n_kicks", "mode", "value"]
        assert len(rows) == 1 + 12

    def test_repeated_runs_are_byte_identical(self, run, tmp_path):
        args = ("phase-grid", "--grid-theta", "3", "--grid-phi", "3", "--kicks", "3", "--mode", "shots",
                "--shots", "128", "--seed", "7")
        assert run(*args, out="first") == 0
        assert run(*args, "--jobs", "3", out="second") == 0
        first = (tmp_path / "first" / "phase_grid.csv").read_bytes()
        assert first == (tmp_path / "second" / "phase_grid.csv").read_bytes()

    def test_json_stamp_is_opt_in(self, run, tmp_path):
        assert run("kappa-sweep", "--kappas", "1", "--kicks", "2", "--format", "json") == 0
        assert "created_at" not in json.loads((tmp_path / "out" / "kappa_sweep.json").read_text())
        assert run("kappa-sweep", "--kappas", "1", "--kicks", "2", "--format", "json", "--stamp", out="s") == 0
        assert "created_at" in json.loads((tmp_path / "s" / "kappa_sweep.json").read_text())

    def test_oscs_writes_both_series(self, run, tmp_path):
        assert run("oscs", "--kicks", "2", "--oscs-resolution", "31", "60") == 0
        oscs_rows = _rows(tmp_path / "out" / "oscs.csv")
        concurrence_rows = _rows(tmp_path / "out" / "concurrence.csv")
        assert len(oscs_rows) == len(concurrence_rows) == 4
        assert float(oscs_rows[1][-1]) == pytest.approx(1.0, abs=1e-6)


class TestTomographyCommands:
    """Test suite for tomo-demo and fidelity."""

    def test_tomo_demo(self, run, tmp_path):
        assert run("tomo-demo", "--shots", "4096", "--kicks", "3") == 0
        records = read_shot_records(tmp_path / "out" / "shots.json")
        assert len(records) == 9
        assert all(r.shots == 4096 for r in records)
        summary = json.loads((tmp_path / "out" / "density_matrix.json").read_text())
        assert summary["fidelity"] > 0.97
        assert summary["ideal_entanglement"]["purity"] == pytest.approx(1.0)
        assert 0.0 <= summary["reconstructed_entanglement"]["concurrence"] <= 1.0
        assert len(summary["reconstructed"]["real"]) == 4

    def test_fidelity_smoke(self, run, tmp_path):
        assert run("fidelity", "--kicks", "3", "--kappas", "2.5", "--theta", "2.25", "--phi", "2.0",
                   "--shots", "256") == 0
        rows = _rows(tmp_path / "out" / "fidelity.csv")
        assert rows[0][:3] == ["point", "kappa", "kick"]
        assert len(rows) == 1 + 3
        trend = json.loads((tmp_path / "out" / "fidelity_trend.json").read_text())
        assert trend["kicks"] == [1, 2, 3]
        assert "flat" in trend

    def test_fidelity_in_exact_mode_warns(self, run, tmp_path, caplog):
        assert run("fidelity", "--mode", "exact", "--kicks", "2", "--kappas", "2.5", "--theta", "2.25",
                   "--phi", "2.0", "--shots", "256") == 0
        assert "--shots is ignored" in caplog.text
        rows = _rows(tmp_path / "out" / "fidelity.csv")
        assert all(float(row[-1]) == pytest.approx(1.0, abs=1e-8) for row in rows[1:])


class TestErrors:
    """Test suite for exit codes on invalid input."""

    def test_missing_directory_without_mkdirs(self, tmp_path):
        code = main(["compile", "--out", str(tmp_path / "absent")], Settings())
        assert code == 2
        assert not (tmp_path / "absent").exists()

    def test_malformed_config_file(self, run, tmp_path):
        config = tmp_path / "config.json"
        config.write_text('{"version": 1, "kappa": "strong"}')
        assert run("compile", "--config", str(config)) == 2

    def test_config_file_values_are_used(self, run, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"version": 1, "level": "ibmq", "kicks": 3}))
        assert run("compile", "--config", str(config)) == 0
        report = json.loads((tmp_path / "out" / "compile_report.json").read_text())
        assert report["level"] == "ibmq"
        assert report["kicks"] == 3

    def test_out_of_range_theta(self, run):
        assert run("oscs", "--theta", "4.0", "--phi", "0") == 2
