"""
Integration tests for the full pipeline at the default network size.

Run with: pytest tests/test_integration.py --run-integration
"""
import json
import math

from click.testing import CliRunner

from netflation.cli import cli
from netflation.data.writer import read_manifest


class TestFullPipeline:
    """Generate, simulate and report on a default-sized economy."""

    def test_generate_then_simulate(self, tmp_path):
        runner = CliRunner()
        gen = runner.invoke(cli, ["--out", str(tmp_path / "gen"), "generate"])
        assert gen.exit_code == 0, gen.output

        sim = runner.invoke(
            cli,
            [
                "--out", str(tmp_path / "sim"),
                "--set", "stats.regimes=[flexible]",
                "simulate", "--economy", str(tmp_path / "gen" / "economy.json"),
            ],
        )
        assert sim.exit_code == 0, sim.output

        with open(tmp_path / "sim" / "run_report.json") as f:
            report = json.load(f)
        flexible = report["regimes"]["flexible"]
        assert abs(flexible["phi_T"] - math.log1p(0.02)) < 1e-3
        assert report["mass_law_error"] < 1e-10
        assert 0 < report["spectral"]["lambda2"] < 1

    def test_transient_bound_experiment(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            cli,
            ["--out", str(tmp_path), "--set", "ensemble.replications=4", "experiment", "thm1"],
        )
        assert result.exit_code == 0, result.output
        manifest = read_manifest(tmp_path)
        assert manifest["status"] in ("PASS", "FAIL")
        assert "thm1/report.json" in manifest["files"]
