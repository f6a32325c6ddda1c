import os
import yaml
from pathlib import Path
from typing import Dict, Any, Union

import numpy as np

from netflation.utils.logger import logger


def read_yaml(file_path: Union[str, Path]) -> Dict[str, Any]:
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"File not found: {file_path}")

    with open(file_path, 'r') as file:
        try:
            yaml_content = yaml.safe_load(file)
            return yaml_content if yaml_content is not None else {}
        except yaml.YAMLError as e:
            raise yaml.YAMLError(f"Error parsing YAML file {file_path}: {e}")


def create_dirs(path: Union[str, Path]):
    dir_path = Path(path)
    if dir_path.suffix:  # If path has file extension, get the parent directory
        dir_path = dir_path.parent

    if not dir_path.exists():
        dir_path.mkdir(parents=True, exist_ok=True)
        logger.info(f"Created directory: {dir_path}")


def resolve_workers(max_workers: int) -> int:
    """-1 means every available CPU."""
    if max_workers == -1:
        return os.cpu_count() or 1
    if max_workers < 1:
        raise ValueError(f"max_workers must be -1 or a positive integer, got {max_workers}")
    return int(max_workers)


def replication_seed(base_seed: int, replication: int) -> int:
    """Seed of replication r: base_seed XOR r, kept inside 64 bits."""
    return (int(base_seed) ^ int(replication)) & 0xFFFFFFFFFFFFFFFF


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for (seed, stream...).

    The stream tags form the SeedSequence spawn key, so (seed,) and (seed, 0)
    give different generators; a plain entropy list would zero-pad them
    into the same one.
    """
    sequence = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(int(s) for s in stream))
    return np.random.default_rng(sequence)
