"""
Tests for the primitive-forge command line and the export formats.
"""

import csv
import io
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from primitive_forge import __version__
from primitive_forge.construction.antiderivative import eval_Phi
from primitive_forge.engine import construct_antiderivative
from primitive_forge.errors import ConfigurationError
from primitive_forge.expr import parse
from primitive_forge.main import cli, run
from primitive_forge.utils.export import load_construction, to_csv


@pytest.fixture
def runner():
    return CliRunner()


def _csv_body(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def _preamble(text):
    values = {}
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, raw = line[2:].partition("=")
            values[key] = json.loads(raw)
    return values


class TestConstruct:
    """construct subcommand."""

    def test_worked_example(self, runner):
        result = runner.invoke(
            cli, ["construct", "--expr", "x^2", "--interval", "0", "1", "--level", "2"]
        )
        # Default tolerance 1e-4 is not met at a forced level 2.
        assert result.exit_code == 2
        payload = json.loads(result.stdout)
        assert payload["interval"] == [0.0, 1.0]
        assert payload["level"] == 2
        assert payload["omega"] == 0.75
        assert payload["error_bound"] == 0.75
        assert payload["rigor"] == "sampled"
        assert payload["met"] is False
        assert payload["integral"] == 0.375
        segments = [(s["a2"], s["a1"], s["a0"]) for s in payload["segments"]]
        assert segments == [(0.25, 0.0, 0.0), (0.75, -0.5, 0.125)]

    def test_met_exits_zero(self, runner):
        result = runner.invoke(
            cli, ["construct", "--expr", "x", "--interval", "0", "1", "--tol", "0.01"]
        )
        assert result.exit_code == 0
        assert json.loads(result.stdout)["level"] == 8

    def test_eval_points(self, runner):
        result = runner.invoke(
            cli,
            ["construct", "--expr", "x^2", "--interval", "0", "1", "--level", "2",
             "--eval", "0,0.5,1"],
        )
        points = json.loads(result.stdout)["points"]
        assert [p["value"] for p in points] == [0.0, 0.0625, 0.375]
        assert [p["error_bound"] for p in points] == [0.0, 0.375, 0.75]

    def test_json_round_trip(self, runner, tmp_path, rng):
        out = tmp_path / "phi.json"
        result = runner.invoke(
            cli,
            ["construct", "--expr", "exp(x)*cos(x)", "--interval", "-0.5", "1.5",
             "--tol", "1e-2", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert result.stdout == ""
        assert out.read_text(encoding="utf-8").endswith("\n")

        rebuilt = load_construction(out)
        pq, _ = construct_antiderivative(parse("exp(x)*cos(x)"), -0.5, 1.5, 1e-2)
        xs = np.append(rng.uniform(-0.5, 1.5, size=500), [-0.5, 1.5])
        assert np.array_equal(eval_Phi(rebuilt, xs), eval_Phi(pq, xs))

    def test_csv_matches_json(self, runner):
        args = ["construct", "--expr", "sin(3*x)", "--interval", "0", "2", "--level", "5"]
        as_json = json.loads(runner.invoke(cli, args).stdout)
        as_csv = runner.invoke(cli, args + ["--format", "csv"]).stdout

        rows = _csv_body(as_csv)
        assert len(rows) == len(as_json["segments"])
        for row, segment in zip(rows, as_json["segments"]):
            for key, value in segment.items():
                assert float(row[key]) == value
        preamble = _preamble(as_csv)
        for key in ("level", "omega", "error_bound", "integral", "met"):
            assert preamble[key] == as_json[key]

    def test_lipschitz_is_certified(self, runner):
        result = runner.invoke(
            cli,
            ["construct", "--expr", "sin(x)", "--interval", "0", "1", "--tol", "1e-2",
             "--lipschitz", "1"],
        )
        payload = json.loads(result.stdout)
        assert payload["rigor"] == "lipschitz"
        assert payload["status"] == "certified"

    def test_omega_is_the_returned_levels(self, runner):
        # Levels 1 and 2 sample only zeros of sin(32*pi*x); level 4 does not.
        result = runner.invoke(
            cli,
            ["construct", "--expr", "sin(32*pi*x)", "--interval", "0", "1",
             "--tol", "1e-16", "--max-level", "4"],
        )
        assert result.exit_code == 2
        payload = json.loads(result.stdout)
        assert payload["level"] == 4
        assert payload["omega"] >= 1.9
        assert payload["certified_omega"] < 1e-13
        assert payload["error_bound"] == payload["certified_omega"]
        assert "level_omega" not in payload


class TestIntegrate:
    """integrate subcommand."""

    @pytest.mark.slow
    def test_sine(self, runner):
        result = runner.invoke(
            cli,
            ["integrate", "--expr", "sin(x)", "--interval", "0", "3.141592653589793",
             "--tol", "1e-4", "--lipschitz", "1"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert abs(payload["value"] - 2.0) <= 1e-4
        assert payload["met"] is True

    def test_forced_level(self, runner):
        result = runner.invoke(
            cli, ["integrate", "--expr", "x^2", "--interval", "0", "1", "--level", "2"]
        )
        assert result.exit_code == 2
        assert json.loads(result.stdout)["value"] == 0.375

    def test_csv(self, runner):
        result = runner.invoke(
            cli,
            ["integrate", "--expr", "2", "--interval", "0", "3", "--format", "csv"],
        )
        assert result.exit_code == 0
        rows = _csv_body(result.stdout)
        assert float(rows[0]["value"]) == 6.0


class TestTable:
    """table subcommand."""

    def test_rows(self, runner):
        result = runner.invoke(
            cli,
            ["table", "--expr", "exp(x)", "--interval", "0", "1", "--max-level", "10",
             "--tol", "1e-2"],
        )
        assert result.exit_code == 0
        rows = json.loads(result.stdout)["rows"]
        assert [row["level"] for row in rows] == list(range(1, 11))
        assert abs(rows[-1]["integral"] - (math.e - 1.0)) < 1e-5
        assert all(0.0 <= row["gap"] <= row["omega"] for row in rows)

    def test_csv_rows(self, runner):
        result = runner.invoke(
            cli,
            ["table", "--expr", "x", "--interval", "0", "1", "--max-level", "4",
             "--format", "csv"],
        )
        rows = _csv_body(result.stdout)
        assert [float(row["omega"]) for row in rows] == [1.0, 0.5, 0.25, 0.125]
        assert all(0.0 <= float(row["gap"]) <= float(row["omega"]) for row in rows)
        assert rows[0]["change"] == ""
        # tolerance 1e-4 is not reached by level 4
        assert result.exit_code == 2


class TestErrors:
    """Input errors produce one diagnostic line and exit code 1."""

    def test_syntax_error(self, runner):
        result = runner.invoke(cli, ["construct", "--expr", "x^", "--interval", "0", "1"])
        assert result.exit_code == 1
        assert result.stdout == ""
        lines = result.stderr.strip().splitlines()
        assert len(lines) == 1
        assert "byte 2" in lines[0]

    @pytest.mark.parametrize(
        "args",
        [
            ["--interval", "1", "0"],
            ["--interval", "0", "1", "--tol", "0"],
            ["--interval", "0", "1", "--samples", "1"],
            ["--interval", "0", "1", "--max-level", "31"],
            ["--interval", "0", "1", "--level", "9", "--max-level", "8"],
            ["--interval", "0", "1", "--lipschitz", "-1"],
            ["--interval", "0", "1", "--lipschitz", "inf"],
            ["--interval", "0", "1", "--lipschitz", "nan"],
            ["--interval", "0", "1", "--eval", "0.5,abc"],
            ["--interval", "0", "1", "--eval", "2"],
        ],
    )
    def test_invalid_arguments(self, runner, args):
        result = runner.invoke(cli, ["construct", "--expr", "x"] + args)
        assert result.exit_code == 1
        assert len(result.stderr.strip().splitlines()) == 1

    def test_domain_error(self, runner):
        result = runner.invoke(cli, ["integrate", "--expr", "log(x)", "--interval", "0", "1"])
        assert result.exit_code == 1
        assert "x=0.0" in result.stderr

    def test_bad_config_file(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"samples": 1}')
        result = runner.invoke(
            cli, ["--config", str(path), "integrate", "--expr", "x", "--interval", "0", "1"]
        )
        assert result.exit_code == 1

    def test_non_utf8_config_file(self, runner, tmp_path):
        path = tmp_path / "forge.yaml"
        path.write_bytes(b"max_level: \xff\xfe\n")
        result = runner.invoke(
            cli, ["--config", str(path), "integrate", "--expr", "x", "--interval", "0", "1"]
        )
        assert result.exit_code == 1
        assert result.stdout == ""
        lines = result.stderr.strip().splitlines()
        assert len(lines) == 1
        assert "Cannot read config file" in lines[0]

    def test_unwritable_out(self, runner, tmp_path):
        blocker = tmp_path / "plain-file"
        blocker.write_text("occupied")
        result = runner.invoke(
            cli,
            ["integrate", "--expr", "x", "--interval", "0", "1", "--tol", "0.3",
             "--out", str(blocker / "sub" / "o.json")],
        )
        assert result.exit_code == 1
        lines = result.stderr.strip().splitlines()
        assert len(lines) == 1
        assert "Cannot write output" in lines[0]
        assert blocker.read_text() == "occupied"


class TestSettings:
    """Environment and config files feed CLI defaults."""

    def test_env_max_level(self, runner, monkeypatch):
        monkeypatch.setenv("PRIMITIVE_FORGE_MAX_LEVEL", "3")
        result = runner.invoke(cli, ["table", "--expr", "x", "--interval", "0", "1"])
        assert len(json.loads(result.stdout)["rows"]) == 3

    def test_config_file_samples(self, runner, tmp_path):
        path = tmp_path / "forge.yaml"
        path.write_text("samples: 4\n")
        result = runner.invoke(
            cli,
            ["--config", str(path), "integrate", "--expr", "x", "--interval", "0", "1",
             "--tol", "0.3"],
        )
        assert json.loads(result.stdout)["evaluations"] == 35

    def test_log_file(self, runner, tmp_path):
        log_file = tmp_path / "logs" / "forge.log"
        result = runner.invoke(
            cli,
            ["--log-level", "INFO", "--log-file", str(log_file), "--plain-log",
             "integrate", "--expr", "x", "--interval", "0", "1", "--tol", "0.3"],
        )
        assert result.exit_code == 0
        json.loads(result.stdout)
        assert "met at level 3" in log_file.read_text(encoding="utf-8")


class TestRun:
    """run() returns exit codes instead of exiting."""

    def test_success(self, capsys):
        assert run(["integrate", "--expr", "3", "--interval", "0", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["value"] == 3.0

    def test_unmet(self, capsys):
        assert run(["integrate", "--expr", "x^2", "--interval", "0", "1", "--level", "2"]) == 2

    def test_usage_error(self, capsys):
        assert run(["construct", "--interval", "0", "1"]) == 1
        assert run(["frobnicate"]) == 1

    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert __version__ in capsys.readouterr().out


class TestExportHelpers:
    """Rendering helpers used by the CLI."""

    def test_unknown_format(self):
        from primitive_forge.utils.export import render

        with pytest.raises(ConfigurationError):
            render({"value": 1.0}, "xml")

    def test_csv_scalar_payload(self):
        text = to_csv({"expression": "x", "value": 0.5})
        assert _csv_body(text) == [{"expression": "x", "value": "0.5"}]

    def test_load_rejects_other_files(self, tmp_path):
        path = tmp_path / "value.json"
        path.write_text('{"value": 1.0}')
        with pytest.raises(ConfigurationError):
            load_construction(path)
