import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from netflation.analysis.stats import distortion_record
from netflation.dynamics.monetary import MonetaryParams, initial_balances, simulate
from netflation.dynamics.pricing import (
    HazardSpec,
    flexible_prices,
    reset_frequency,
    sticky_prices,
    synchronization_index,
)
from netflation.network.netgen import GenerationError, NetworkParams, build_economy, knn_slope
from netflation.network.spectral import NumericalError, proxy_vectors, subdominant_pair
from netflation.utils import logger


@dataclass(frozen=True)
class MonetarySettings:
    """Monetary inputs that do not depend on a particular economy."""

    pi: float = 0.02
    theta: float = 0.5
    horizon: int = 200
    m0_preset: str = "stationary"
    m0_total: float = 1.0
    update_form: str = "propagated"

    def build(self, economy) -> MonetaryParams:
        return MonetaryParams(
            pi=self.pi,
            theta=self.theta,
            m0=initial_balances(economy, self.m0_preset, self.m0_total),
            horizon=self.horizon,
            update_form=self.update_form,
        )


@dataclass(frozen=True)
class ReplicationTask:
    replication: int
    network: NetworkParams
    monetary: MonetarySettings
    hazard: Optional[HazardSpec] = None
    zeta: float = 1.0
    window: Optional[Tuple[int, int]] = None
    quiet: bool = True


@dataclass
class ReplicationResult:
    """Everything one end-to-end pipeline run reports; ``ok`` is False for excluded draws."""

    replication: int
    seed: int
    ok: bool
    error: Optional[str] = None
    stage: Optional[str] = None
    scalars: Dict[str, float] = field(default_factory=dict)
    series: Dict[str, np.ndarray] = field(default_factory=dict)

    def statistic(self, name: str, horizon: Optional[int] = None) -> float:
        """Scalar by name, or a per-horizon series (``phi``, ``omega``, ...) read at ``horizon``."""
        if horizon is None:
            if name in self.scalars:
                return self.scalars[name]
            if name in ("phi_T", "omega_T", "psi_T"):
                return float(self.series[name[:-2]][-1])
            raise KeyError(f"Unknown statistic {name!r}")
        return float(self.series[name][horizon - 1])


@contextmanager
def _quiet(enabled: bool):
    if not enabled:
        yield
        return
    level = logger.level
    logger.setLevel(logging.WARNING)
    try:
        yield
    finally:
        logger.setLevel(level)


def run_replication(task: ReplicationTask) -> ReplicationResult:
    """generate -> spectral -> monetary -> pricing -> stats for one seed.

    Generation and eigen-solver failures are recorded, not raised.
    """
    seed = task.network.seed
    stage = "generate"
    try:
        with _quiet(task.quiet):
            economy = build_economy(task.network)
            stage = "spectral"
            spectral = subdominant_pair(economy, seed=seed)
            stage = "monetary"
            trajectory = simulate(economy, task.monetary.build(economy))
            stage = "pricing"
            flexible = flexible_prices(economy, trajectory)
            stage = "stats"
            record = distortion_record(flexible, economy, zeta=task.zeta, window=task.window)

            slope, _ = knn_slope(economy)
            # nan entries (one sector, constant degrees) hold for every draw of a config
            alignment = {k: v for k, v in proxy_vectors(economy, spectral).to_dict().items() if np.isfinite(v)}
            scalars: Dict[str, Any] = {
                "n": economy.n,
                "lambda2": spectral.lambda2,
                "gap": spectral.gap,
                "relaxation_time": spectral.relaxation_time,
                "knn_slope": slope,
                **alignment,
                "nu_w": economy.nu_w,
                "mass_T": float(trajectory.mass[-1]),
                "mass_law_error": trajectory.mass_law_error(),
                "omega_bar": record.time_averages[0],
                "psi_bar": record.time_averages[1],
                "numeraire": record.numeraire,
            }
            series = {
                "phi": record.phi,
                "omega": record.omega,
                "psi": record.psi,
                "misalignment": trajectory.misalignment,
                "mass": trajectory.mass,
            }

            if task.hazard is not None:
                stage = "pricing"
                sticky = sticky_prices(economy, trajectory, task.hazard, seed, task.replication)
                stage = "stats"
                sticky_record = distortion_record(
                    sticky, economy, zeta=task.zeta, numeraire=record.numeraire, window=task.window
                )
                scalars.update(
                    {
                        "sticky_omega_bar": sticky_record.time_averages[0],
                        "sticky_psi_bar": sticky_record.time_averages[1],
                        "reset_frequency": reset_frequency(sticky),
                        "synchronization_index": synchronization_index(sticky),
                    }
                )
                series.update(
                    {
                        "sticky_phi": sticky_record.phi,
                        "sticky_omega": sticky_record.omega,
                        "sticky_psi": sticky_record.psi,
                    }
                )
    except (GenerationError, NumericalError) as e:
        logger.warning(f"Replication {task.replication} (seed {seed}) excluded at {stage}: {e}")
        return ReplicationResult(task.replication, seed, ok=False, error=str(e), stage=stage)

    return ReplicationResult(task.replication, seed, ok=True, scalars=scalars, series=series)
