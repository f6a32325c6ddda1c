"""
Tests for snapshots, CSV export, the HDF5 series store and the output manifest.
"""
import json

import numpy as np
import pandas as pd
import pytest

from netflation.analysis.stats import distortion_record
from netflation.data.export import distortion_frame, price_path_frames, trajectory_frames, write_csv
from netflation.data.snapshot import SnapshotError, load_economy, save_economy, snapshot_summary
from netflation.data.store import read_series_store, write_series_store
from netflation.data.writer import MANIFEST, RESOLVED_CONFIG, OutputWriter, file_sha256, read_manifest
from netflation.dynamics.monetary import MonetaryParams, initial_balances, simulate
from netflation.dynamics.pricing import HazardSpec, sticky_prices
from netflation.network.spectral import subdominant_pair
from netflation.utils import attach_file_handler


class TestSnapshot:
    """Test economy snapshots."""

    def test_round_trip(self, small_economy, tmp_path):
        path = save_economy(small_economy, tmp_path / "economy.json")
        loaded = load_economy(path)
        assert (loaded.adjacency != small_economy.adjacency).nnz == 0
        np.testing.assert_array_equal(loaded.stationary, small_economy.stationary)
        np.testing.assert_array_equal(loaded.degrees.degrees, small_economy.degrees.degrees)
        np.testing.assert_array_equal(loaded.sectors, small_economy.sectors)
        assert loaded.params == small_economy.params
        assert loaded.nu_w == small_economy.nu_w

    def test_rewrite_is_byte_identical(self, small_economy, tmp_path):
        first = save_economy(small_economy, tmp_path / "a.json")
        second = save_economy(load_economy(first), tmp_path / "b.json")
        assert first.read_bytes() == second.read_bytes()

    def test_summary(self, small_economy, tmp_path):
        spectral = subdominant_pair(small_economy, seed=1)
        path = save_economy(small_economy, tmp_path / "economy.json", spectral, extra={"note": "demo"})
        summary = snapshot_summary(path)
        assert summary["lambda2"] == spectral.lambda2
        assert summary["note"] == "demo"

    def test_missing(self, tmp_path):
        with pytest.raises(SnapshotError, match="not found"):
            load_economy(tmp_path / "missing.json")

    def test_not_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(SnapshotError):
            load_economy(path)

    def test_wrong_version(self, small_economy, tmp_path):
        path = save_economy(small_economy, tmp_path / "economy.json")
        raw = json.loads(path.read_text(encoding="utf-8"))
        raw["version"] = 99
        path.write_text(json.dumps(raw), encoding="utf-8")
        with pytest.raises(SnapshotError, match="version"):
            load_economy(path)


class TestExport:
    """Test CSV frames."""

    @pytest.fixture(scope="class")
    def run(self, small_economy):
        params = MonetaryParams(pi=0.02, theta=0.5, m0=initial_balances(small_economy), horizon=12)
        trajectory = simulate(small_economy, params)
        path = sticky_prices(small_economy, trajectory, HazardSpec(), seed=2)
        return trajectory, path, distortion_record(path, small_economy)

    def test_trajectory_frames(self, run, small_economy):
        trajectory, _, _ = run
        firms, series = trajectory_frames(trajectory)
        assert len(firms) == 13 * small_economy.n
        assert list(firms.columns) == ["t", "firm_id", "balance", "share", "nominal_demand"]
        assert list(series["t"]) == list(range(13))

    def test_price_frames(self, run):
        _, path, _ = run
        prices, events = price_path_frames(path)
        assert set(prices["reset_flag"].unique()) <= {0, 1}
        assert len(events) == int(path.reset_flags[1:].sum())
        assert list(events.columns) == ["t", "firm_id"]

    def test_distortion_frame(self, run):
        _, _, record = run
        frame = distortion_frame(record)
        assert list(frame.columns) == ["horizon", "phi", "omega", "psi"]
        assert len(frame) == 12

    def test_csv_dialect(self, tmp_path):
        frame = pd.DataFrame({"a": [1, 2], "b": [0.1, 1.0 / 3.0]})
        path = write_csv(frame, tmp_path / "nested" / "table.csv")
        text = path.read_text(encoding="utf-8")
        assert text.splitlines()[0] == "a,b"
        assert "\r" not in text
        assert float(text.splitlines()[2].split(",")[1]) == 1.0 / 3.0


class TestSeriesStore:
    """Test the HDF5 store."""

    def test_read_back(self, tmp_path):
        groups = {
            "replication_0000": {"phi": np.linspace(0, 1, 5), "mass": np.ones(6)},
            "replication_0001": {"phi": np.zeros(5), "mass": np.arange(6.0)},
        }
        path = write_series_store(tmp_path / "series.h5", groups, attrs={"base_seed": "42"})
        loaded = read_series_store(path)
        assert sorted(loaded) == sorted(groups)
        for name, series in groups.items():
            for label, values in series.items():
                np.testing.assert_array_equal(loaded[name][label], values)


class TestOutputWriter:
    """Test the manifest."""

    def test_manifest(self, small_config, tmp_path):
        out = tmp_path / "run"
        writer = OutputWriter(out, small_config)
        attach_file_handler(out)
        writer.csv("table.csv", pd.DataFrame({"x": [1.0, 2.0]}))
        writer.json("report.json", {"value": np.float64(1.5), "missing": float("nan")})
        writer.finalize({"extra": 1})

        manifest = read_manifest(out)
        assert set(manifest["files"]) == {RESOLVED_CONFIG, "table.csv", "report.json"}
        assert manifest["files"]["table.csv"] == file_sha256(out / "table.csv")
        assert manifest["seed"] == small_config.seed
        assert manifest["extra"] == 1
        assert (out / MANIFEST).exists()
        assert not any(name.startswith("logs/") for name in manifest["files"])
        with open(out / "report.json") as f:
            assert json.load(f) == {"missing": None, "value": 1.5}

    def test_same_inputs_same_digest(self, small_config, tmp_path):
        digests = []
        for name in ("a", "b"):
            writer = OutputWriter(tmp_path / name, small_config)
            writer.csv("table.csv", pd.DataFrame({"x": [0.1, 0.2]}))
            writer.finalize()
            digests.append(read_manifest(tmp_path / name)["combined_sha256"])
        assert digests[0] == digests[1]
