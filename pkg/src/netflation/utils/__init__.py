from netflation.utils.common import create_dirs, read_yaml, resolve_workers, replication_seed, make_rng
from netflation.utils.logger import logger, log_stage, attach_file_handler

__all__ = [
    "create_dirs",
    "read_yaml",
    "resolve_workers",
    "replication_seed",
    "make_rng",
    "logger",
    "log_stage",
    "attach_file_handler",
]
