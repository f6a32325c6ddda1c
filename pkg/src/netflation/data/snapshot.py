import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy import sparse

from netflation.network.netgen import DegreeSequence, Economy, NetworkParams, output_from_degree
from netflation.network.spectral import SpectralSummary

SNAPSHOT_VERSION = 1


class SnapshotError(Exception):
    """Raised when an economy snapshot cannot be read or written."""

    pass


def economy_to_dict(economy: Economy, summary: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    A = economy.adjacency.tocsc()
    A.sort_indices()
    return {
        "version": SNAPSHOT_VERSION,
        "n": economy.n,
        "params": economy.params.to_dict() if economy.params is not None else None,
        "nu_w": economy.nu_w,
        "repair_rounds": economy.repair_rounds,
        "degrees": economy.degrees.degrees.tolist(),
        "sectors": economy.sectors.tolist() if economy.sectors is not None else None,
        "quantities": economy.quantities.tolist(),
        "stationary": economy.stationary.tolist(),
        "adjacency": {
            "format": "csc",
            "indptr": A.indptr.tolist(),
            "indices": A.indices.tolist(),
            "data": A.data.tolist(),
        },
        "summary": summary or {},
    }


def save_economy(
    economy: Economy,
    path: Union[str, Path],
    spectral: Optional[SpectralSummary] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write the economy as JSON; floats are written with repr precision, so reloading is exact."""
    summary = dict(extra or {})
    if spectral is not None:
        summary.update(spectral.to_dict())
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(economy_to_dict(economy, summary), f, sort_keys=True)
    return path


def load_economy(path: Union[str, Path]) -> Economy:
    path = Path(path)
    if not path.exists():
        raise SnapshotError(f"Snapshot not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise SnapshotError(f"Snapshot {path} is not valid JSON: {e}")

    try:
        if raw.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError(f"Unsupported snapshot version {raw.get('version')!r}")
        n = int(raw["n"])
        adj = raw["adjacency"]
        A = sparse.csc_matrix(
            (np.asarray(adj["data"], dtype=float), np.asarray(adj["indices"]), np.asarray(adj["indptr"])),
            shape=(n, n),
        )
        degrees = np.asarray(raw["degrees"], dtype=np.int64)
        params = NetworkParams(**raw["params"]) if raw.get("params") else None
        if params is not None:
            sequence = DegreeSequence(degrees, params.d_min, params.d_max)
        else:
            sequence = DegreeSequence(degrees, int(degrees.min()), int(degrees.max()))
        sectors = raw.get("sectors")
        return Economy(
            adjacency=A,
            degrees=sequence,
            quantities=np.asarray(raw.get("quantities") or output_from_degree(degrees), dtype=float),
            stationary=np.asarray(raw["stationary"], dtype=float),
            params=params,
            sectors=np.asarray(sectors, dtype=np.int64) if sectors is not None else None,
            nu_w=raw.get("nu_w"),
            repair_rounds=int(raw.get("repair_rounds", 0)),
        )
    except KeyError as e:
        raise SnapshotError(f"Snapshot {path} is missing field {e}")


def snapshot_summary(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f).get("summary", {})
