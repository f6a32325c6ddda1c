import logging
import sys
from pathlib import Path
from typing import Union

# Console handler with a bare formatter; file handlers are attached per output directory
console_handler = logging.StreamHandler(sys.stdout)
console_handler.setLevel(logging.INFO)
console_formatter = logging.Formatter('%(message)s')
console_handler.setFormatter(console_formatter)

# Configure the logger
logger = logging.getLogger("netflation")
logger.setLevel(logging.INFO)
logger.addHandler(console_handler)

# Prevent propagation to avoid duplicate logs
logger.propagate = False

LOG_DIR_NAME = "logs"
LOG_FILE_NAME = "netflation.log"


def attach_file_handler(out_dir: Union[str, Path]) -> Path:
    """Send all further log records to <out_dir>/logs/netflation.log as well."""
    log_dir = Path(out_dir) / LOG_DIR_NAME
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / LOG_FILE_NAME

    for handler in list(logger.handlers):
        if isinstance(handler, logging.FileHandler):
            if Path(handler.baseFilename) == log_file.resolve():
                return log_file
            logger.removeHandler(handler)
            handler.close()

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.INFO)
    file_formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    file_handler.setFormatter(file_formatter)
    logger.addHandler(file_handler)
    return log_file


# Add a helper method to log stage separators
def log_stage(stage_name):
    separator = "="*20
    logger.info(f"{separator}STAGE: {stage_name}{separator}")
