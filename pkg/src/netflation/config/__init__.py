from netflation.config.run_config import (
    ConfigError,
    EnsembleConfig,
    HazardConfig,
    MonetaryConfig,
    NetworkConfig,
    OutputConfig,
    RunConfig,
    StatsConfig,
    config_template,
    dump_config,
    flatten,
    load_config,
)

__all__ = [
    "ConfigError",
    "EnsembleConfig",
    "HazardConfig",
    "MonetaryConfig",
    "NetworkConfig",
    "OutputConfig",
    "RunConfig",
    "StatsConfig",
    "config_template",
    "dump_config",
    "flatten",
    "load_config",
]
