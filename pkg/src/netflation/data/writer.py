import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from netflation.config.run_config import RunConfig, dump_config
from netflation.data.export import write_csv
from netflation.data.store import write_series_store
from netflation.utils import create_dirs, logger
from netflation.utils.logger import LOG_DIR_NAME

RESOLVED_CONFIG = "resolved_config.yaml"
MANIFEST = "manifest.json"


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


class OutputWriter:
    """The only component that writes into an output directory.

    Every file goes through this writer, and ``finalize`` hashes all of them
    into ``manifest.json`` (log files excluded).
    """

    def __init__(self, out_dir: Union[str, Path], config: Optional[RunConfig] = None):
        self.out_dir = Path(out_dir)
        create_dirs(self.out_dir)
        self.config = config
        self.files: List[Path] = []
        if config is not None:
            self._register(dump_config(config, self.out_dir / RESOLVED_CONFIG))

    def _register(self, path: Path) -> Path:
        if path not in self.files:
            self.files.append(path)
        return path

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def csv(self, name: str, frame: pd.DataFrame) -> Path:
        return self._register(write_csv(frame, self.path(name)))

    def json(self, name: str, payload: Dict[str, Any]) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(_to_jsonable(payload), f, indent=2, sort_keys=True, ensure_ascii=False)
        return self._register(target)

    def store(self, name: str, groups: Dict[str, Dict[str, np.ndarray]], attrs: Optional[Dict] = None) -> Path:
        return self._register(write_series_store(self.path(name), groups, attrs))

    def adopt(self, path: Union[str, Path]) -> Path:
        """Register a file written by a helper that takes a path."""
        return self._register(Path(path))

    def finalize(self, extra: Optional[Dict[str, Any]] = None) -> Path:
        entries = {}
        for path in sorted(self.files):
            rel = path.relative_to(self.out_dir).as_posix()
            if rel.startswith(LOG_DIR_NAME + "/") or rel == MANIFEST:
                continue
            entries[rel] = file_sha256(path)
        combined = hashlib.sha256(
            "".join(f"{name}:{digest}\n" for name, digest in sorted(entries.items())).encode("utf-8")
        ).hexdigest()
        manifest = {
            "seed": self.config.seed if self.config is not None else None,
            "files": entries,
            "combined_sha256": combined,
        }
        if extra:
            manifest.update(extra)
        target = self.path(MANIFEST)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(_to_jsonable(manifest), f, indent=2, sort_keys=True)
        logger.info(f"Wrote {len(entries)} files to {self.out_dir} (manifest digest {combined[:12]})")
        return target


def read_manifest(out_dir: Union[str, Path]) -> Dict[str, Any]:
    with open(Path(out_dir) / MANIFEST, "r", encoding="utf-8") as f:
        return json.load(f)
