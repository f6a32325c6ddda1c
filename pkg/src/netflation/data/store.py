from pathlib import Path
from typing import Dict, Union

import h5py
import numpy as np


def write_series_store(path: Union[str, Path], groups: Dict[str, Dict[str, np.ndarray]], attrs: Dict = None) -> Path:
    """One HDF5 group per key (e.g. replication), one dataset per series; no timestamps."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with h5py.File(path, "w", track_order=True) as h5f:
        for key, value in (attrs or {}).items():
            h5f.attrs[key] = value
        for name, series in groups.items():
            group = h5f.create_group(name, track_order=True)
            for label, values in series.items():
                group.create_dataset(label, data=np.asarray(values), track_times=False)
    return path


def read_series_store(path: Union[str, Path]) -> Dict[str, Dict[str, np.ndarray]]:
    out: Dict[str, Dict[str, np.ndarray]] = {}
    with h5py.File(path, "r") as h5f:
        for name, group in h5f.items():
            out[name] = {label: group[label][()] for label in group}
    return out
