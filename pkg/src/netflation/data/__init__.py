from netflation.data.export import distortion_frame, price_path_frames, trajectory_frames, write_csv
from netflation.data.snapshot import SnapshotError, load_economy, save_economy, snapshot_summary
from netflation.data.store import read_series_store, write_series_store
from netflation.data.writer import MANIFEST, RESOLVED_CONFIG, OutputWriter, file_sha256, read_manifest

__all__ = [
    "distortion_frame",
    "price_path_frames",
    "trajectory_frames",
    "write_csv",
    "SnapshotError",
    "load_economy",
    "save_economy",
    "snapshot_summary",
    "read_series_store",
    "write_series_store",
    "MANIFEST",
    "RESOLVED_CONFIG",
    "OutputWriter",
    "file_sha256",
    "read_manifest",
]
