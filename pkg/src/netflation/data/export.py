from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from netflation.analysis.stats import DistortionRecord
from netflation.dynamics.monetary import MoneyTrajectory
from netflation.dynamics.pricing import PricePath

FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Comma-separated, header row, '.' decimal, full float precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def _long_index(T1: int, n: int):
    return np.repeat(np.arange(T1), n), np.tile(np.arange(n), T1)


def trajectory_frames(trajectory: MoneyTrajectory) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """(per-firm rows, per-period scalar series)."""
    T1, n = trajectory.balances.shape
    t, firm = _long_index(T1, n)
    firms = pd.DataFrame(
        {
            "t": t,
            "firm_id": firm,
            "balance": trajectory.balances.ravel(),
            "share": trajectory.shares.ravel(),
            "nominal_demand": trajectory.nominal_demand.ravel(),
        }
    )
    series = pd.DataFrame(
        {
            "t": np.arange(T1),
            "mass": trajectory.mass,
            "misalignment": trajectory.misalignment,
        }
    )
    return firms, series


def price_path_frames(path: PricePath) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """(per-firm price rows, reset event log)."""
    T1, n = path.prices.shape
    t, firm = _long_index(T1, n)
    prices = pd.DataFrame(
        {
            "t": t,
            "firm_id": firm,
            "posted_price": path.prices.ravel(),
            "market_clearing_price": path.market_clearing.ravel(),
            "age": path.ages.ravel(),
            "reset_flag": path.reset_flags.ravel().astype(int),
            "unsold": path.unsold.ravel(),
            "fill_rate": path.fill_rate.ravel(),
        }
    )
    events = pd.DataFrame(path.reset_events, columns=["t", "firm_id"])
    return prices, events


def distortion_frame(record: DistortionRecord) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "horizon": record.horizons,
            "phi": record.phi,
            "omega": record.omega,
            "psi": record.psi,
        }
    )
