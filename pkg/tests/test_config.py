"""
Tests for run configuration loading.
"""
import pytest
import yaml

from netflation.config.run_config import (
    ConfigError,
    RunConfig,
    config_template,
    dump_config,
    load_config,
    parse_override,
)
from netflation.dynamics.pricing import PricingError


class TestLoadConfig:
    """Test defaults, YAML, overrides and flags."""

    def test_defaults(self):
        config = load_config()
        assert config == RunConfig()
        assert config.stats.regimes == ["flexible", "sticky"]
        assert config.network.nu_w is None

    def test_precedence(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("seed: 3\nmonetary:\n  pi: 0.03\n  horizon: 50\n", encoding="utf-8")
        config = load_config(path, overrides=["monetary.pi=0.04"], seed=9)
        assert config.monetary.pi == 0.04
        assert config.monetary.horizon == 50
        assert config.seed == 9

    def test_flat_dotted_keys(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("network.n: 500\n", encoding="utf-8")
        assert load_config(path).network.n == 500

    @pytest.mark.parametrize("item", ["network.bogus=1", "bogus=1", "network.n.extra=3", "widgets.n=3"])
    def test_unknown_key(self, item):
        with pytest.raises(ConfigError, match="Unexpected configuration key"):
            load_config(overrides=[item])

    def test_unknown_key_in_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("hazard:\n  g_scal: 0.1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="hazard.g_scal"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.yaml")

    def test_scientific_notation(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("monetary:\n  pi: 1e-3\n", encoding="utf-8")
        assert load_config(path).monetary.pi == pytest.approx(1e-3)

    def test_coercion(self):
        config = load_config(
            overrides=[
                "network.n=300.0",
                "output.csv=false",
                "network.nu_w=null",
                "stats.regimes=[flexible]",
                "ensemble.sizes=[100, 200]",
                "stats.window_start=10",
            ]
        )
        assert config.network.n == 300
        assert config.output.csv is False
        assert config.network.nu_w is None
        assert config.stats.regimes == ["flexible"]
        assert config.ensemble.sizes == [100, 200]
        assert config.window() == (10, config.monetary.horizon)

    @pytest.mark.parametrize("item", ["network.n=many", "output.csv=maybe", "monetary.pi=fast"])
    def test_bad_types(self, item):
        with pytest.raises(ConfigError):
            load_config(overrides=[item])

    def test_override_needs_equals(self):
        with pytest.raises(ConfigError):
            parse_override("monetary.pi")

    def test_jobs(self):
        assert load_config(jobs=-1).jobs == -1
        with pytest.raises(ConfigError):
            load_config(jobs=0)

    def test_out_flag(self):
        assert load_config(out="elsewhere").output.dir == "elsewhere"


class TestConfigConversions:
    """Test derived parameter objects and round trips."""

    def test_network_params(self):
        config = load_config(overrides=["network.n=400"], seed=11)
        params = config.network_params()
        assert params.n == 400
        assert params.seed == 11
        assert config.network_params(seed=5).seed == 5

    def test_hazard_spec(self):
        spec = load_config(overrides=["hazard.g_scale=0.1"]).hazard_spec()
        assert spec.g_scale == 0.1
        assert not spec.allow_degenerate

    def test_degenerate_hazard_needs_flag(self):
        config = load_config(overrides=["hazard.c0=0.4", "hazard.c1=0.4"])
        with pytest.raises(PricingError, match="allow_degenerate"):
            config.hazard_spec()
        config.hazard.allow_degenerate = True
        assert config.hazard_spec().f(0.3) == pytest.approx(0.4)

    def test_template_round_trip(self, tmp_path):
        path = tmp_path / "template.yaml"
        path.write_text(config_template(), encoding="utf-8")
        assert load_config(path) == RunConfig()

    def test_dump_round_trip(self, tmp_path):
        config = load_config(overrides=["monetary.pi=0.05", "stats.regimes=[sticky]"])
        path = dump_config(config, tmp_path / "resolved.yaml")
        with open(path) as f:
            assert yaml.safe_load(f)["monetary"]["pi"] == 0.05
        assert load_config(path) == config
