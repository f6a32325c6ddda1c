from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from netflation.dynamics.pricing import HazardSpec
from netflation.ensemble.concentration import (
    EnsembleError,
    VarianceScaling,
    quantile_correlation,
    summary_moments,
    variance_scaling,
)
from netflation.ensemble.pipeline import MonetarySettings, ReplicationResult, ReplicationTask, run_replication
from netflation.network.netgen import NetworkParams, calibrated_params
from netflation.utils import logger, replication_seed, resolve_workers

if TYPE_CHECKING:
    from netflation.config.run_config import RunConfig

SWEEP_PARAMETERS = ("alpha", "nu", "theta", "pi", "g_scale", "zeta")
NETWORK_PARAMETERS = ("alpha", "nu")

# Leading-order signs of d(statistic)/d(parameter)
EXPECTED_SIGNS = {
    "alpha": -1,
    "nu": 1,
    "theta": -1,
    "pi": 1,
}


@dataclass(frozen=True)
class EnsembleSpec:
    replications: int
    base_seed: int
    network: NetworkParams
    monetary: MonetarySettings = MonetarySettings()
    hazard: Optional[HazardSpec] = None
    zeta: float = 1.0
    horizons: Optional[Tuple[int, ...]] = None
    window: Optional[Tuple[int, int]] = None
    sweep: Optional[Tuple[str, Tuple[float, ...]]] = None
    max_failure_rate: float = 0.2
    max_workers: int = 1
    progress: bool = False

    def __post_init__(self):
        if self.replications < 2:
            raise EnsembleError(f"an ensemble needs at least 2 replications, got {self.replications}")
        if not 0 <= self.max_failure_rate <= 1:
            raise EnsembleError(f"max_failure_rate must lie in [0, 1], got {self.max_failure_rate}")
        for h in self.horizons or ():
            if not 1 <= h <= self.monetary.horizon:
                raise EnsembleError(f"reporting horizon {h} outside 1..{self.monetary.horizon}")

    @classmethod
    def from_config(cls, config: "RunConfig", **changes) -> "EnsembleSpec":
        """Spec for ``config``; sticky prices are included when the regimes ask for them."""
        mon = config.monetary
        spec = cls(
            replications=config.ensemble.replications,
            base_seed=config.seed,
            network=config.network_params(),
            monetary=MonetarySettings(
                pi=mon.pi,
                theta=mon.theta,
                horizon=mon.horizon,
                m0_preset=mon.m0_preset,
                m0_total=mon.m0_total,
                update_form=mon.update_form,
            ),
            hazard=config.hazard_spec() if "sticky" in config.stats.regimes else None,
            zeta=config.stats.zeta,
            window=config.window(),
            max_failure_rate=config.ensemble.max_failure_rate,
            max_workers=config.jobs,
        )
        return replace(spec, **changes) if changes else spec

    def seed_for(self, replication: int) -> int:
        return replication_seed(self.base_seed, replication)

    def report_horizons(self) -> Tuple[int, ...]:
        return tuple(self.horizons) if self.horizons else (self.monetary.horizon,)

    def summary(self) -> Dict[str, Any]:
        return {
            "replications": self.replications,
            "base_seed": self.base_seed,
            "network": self.network.to_dict(),
            "monetary": asdict(self.monetary),
            "hazard": self.hazard.to_dict() if self.hazard is not None else None,
            "zeta": self.zeta,
            "horizons": list(self.report_horizons()),
            "window": list(self.window) if self.window else None,
        }


@dataclass
class EnsembleReport:
    spec: Dict[str, Any]
    results: List[ReplicationResult]
    statistics: Dict[str, Dict[str, float]]
    failures: List[Tuple[int, str]]
    variance_scaling: Optional[VarianceScaling] = None
    sweep: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def included(self) -> List[ReplicationResult]:
        return [r for r in self.results if r.ok]

    @property
    def excluded(self) -> int:
        return len(self.failures)

    def values(self, name: str, horizon: Optional[int] = None) -> np.ndarray:
        return np.array([r.statistic(name, horizon) for r in self.included])

    def scalar_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.results:
            row = {"replication": r.replication, "seed": r.seed, "ok": r.ok, "stage": r.stage, "error": r.error}
            row.update(r.scalars)
            rows.append(row)
        return pd.DataFrame(rows)

    def series_groups(self) -> Dict[str, Dict[str, np.ndarray]]:
        return {f"replication_{r.replication:04d}": r.series for r in self.included}

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "spec": self.spec,
            "included": len(self.included),
            "excluded": self.excluded,
            "failures": [{"replication": r, "error": e} for r, e in self.failures],
            "statistics": self.statistics,
            "sweep": self.sweep,
        }
        if self.variance_scaling is not None:
            out["variance_scaling"] = asdict(self.variance_scaling)
        return out


def _tasks(spec: EnsembleSpec, network: NetworkParams) -> List[ReplicationTask]:
    return [
        ReplicationTask(
            replication=r,
            network=network.with_updates(seed=spec.seed_for(r)),
            monetary=spec.monetary,
            hazard=spec.hazard,
            zeta=spec.zeta,
            window=spec.window,
        )
        for r in range(spec.replications)
    ]


def _execute(tasks: List[ReplicationTask], max_workers: int, progress: bool) -> List[ReplicationResult]:
    workers = resolve_workers(max_workers)
    if workers == 1:
        return [run_replication(t) for t in tqdm(tasks, desc="Replications", disable=not progress)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map keeps replication order regardless of scheduling
        return list(
            tqdm(executor.map(run_replication, tasks), total=len(tasks), desc="Replications", disable=not progress)
        )


def _aggregate(spec: EnsembleSpec, included: List[ReplicationResult]) -> Dict[str, Dict[str, float]]:
    statistics: Dict[str, Dict[str, float]] = {}
    if not included:
        return statistics
    names = sorted(included[0].scalars)
    columns = {name: [r.scalars[name] for r in included] for name in names}
    for h in spec.report_horizons():
        for series in ("phi", "omega", "psi", "sticky_phi", "sticky_omega", "sticky_psi"):
            if series in included[0].series:
                columns[f"{series}@{h}"] = [r.statistic(series, h) for r in included]
    for name, values in columns.items():
        values = np.asarray(values, dtype=float)
        entry = summary_moments(values)
        entry["quantile_correlation"] = quantile_correlation(values)
        statistics[name] = entry
    return statistics


def run(spec: EnsembleSpec) -> EnsembleReport:
    """R end-to-end pipelines; replication r uses seed base_seed XOR r."""
    network = calibrated_params(spec.network.with_updates(seed=spec.base_seed))
    results = _execute(_tasks(spec, network), spec.max_workers, spec.progress)

    failures = [(r.replication, f"{r.stage}: {r.error}") for r in results if not r.ok]
    included = [r for r in results if r.ok]
    rate = len(failures) / spec.replications
    if rate > spec.max_failure_rate:
        raise EnsembleError(
            f"{len(failures)} of {spec.replications} replications failed ({rate:.0%} > {spec.max_failure_rate:.0%}); "
            f"first failure: {failures[0][1]}"
        )

    logger.info(
        f"Ensemble finished: {len(included)} included, {len(failures)} excluded "
        f"(n={spec.network.n}, pi={spec.monetary.pi}, base seed {spec.base_seed})"
    )
    return EnsembleReport(
        spec=spec.summary(),
        results=results,
        statistics=_aggregate(spec, included),
        failures=failures,
    )


def _with_parameter(spec: EnsembleSpec, parameter: str, value: float) -> EnsembleSpec:
    if parameter in NETWORK_PARAMETERS:
        return replace(spec, network=spec.network.with_updates(**{parameter: value, "nu_w": None}))
    if parameter in ("pi", "theta"):
        return replace(spec, monetary=replace(spec.monetary, **{parameter: value}))
    if parameter == "g_scale":
        if spec.hazard is None:
            raise EnsembleError("a g_scale sweep needs a hazard specification")
        return replace(spec, hazard=replace(spec.hazard, g_scale=value))
    if parameter == "zeta":
        return replace(spec, zeta=value)
    raise EnsembleError(f"Unknown sweep parameter {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")


def paired_sweep(
    spec: EnsembleSpec,
    parameter: str,
    values: Sequence[float],
    statistic: str = "omega_bar",
    expected_sign: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """Adjacent-value differences of ``statistic`` per replication under common seeds.

    Rows report the share of replications whose difference has the expected
    sign (zero when the parameter cannot move the statistic).
    """
    if parameter not in SWEEP_PARAMETERS:
        raise EnsembleError(f"Unknown sweep parameter {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")
    if len(values) < 2:
        raise EnsembleError("a sweep needs at least two values")
    if expected_sign is None:
        expected_sign = EXPECTED_SIGNS.get(parameter, 0)

    reports = []
    for value in values:
        logger.info(f"Sweep arm {parameter}={value}")
        reports.append(run(_with_parameter(spec, parameter, float(value))))

    rows = []
    for (low, report_low), (high, report_high) in zip(
        zip(values[:-1], reports[:-1]), zip(values[1:], reports[1:])
    ):
        by_rep_low = {r.replication: r for r in report_low.included}
        by_rep_high = {r.replication: r for r in report_high.included}
        shared = sorted(set(by_rep_low) & set(by_rep_high))
        diffs = np.array(
            [by_rep_high[r].statistic(statistic) - by_rep_low[r].statistic(statistic) for r in shared]
        )
        agreement = float(np.mean(np.sign(diffs) == expected_sign)) if diffs.size else float("nan")
        rows.append(
            {
                "parameter": parameter,
                "value_low": float(low),
                "value_high": float(high),
                "statistic": statistic,
                "pairs": int(diffs.size),
                "mean_difference": float(diffs.mean()) if diffs.size else float("nan"),
                "zero_fraction": float(np.mean(diffs == 0)) if diffs.size else float("nan"),
                "expected_sign": int(expected_sign),
                "agreement": agreement,
            }
        )
    return rows


def variance_scaling_study(
    spec: EnsembleSpec,
    sizes: Sequence[int],
    statistic: str = "phi_T",
) -> Tuple[VarianceScaling, List[EnsembleReport]]:
    """Ensemble variance of ``statistic`` at each firm count, and its log-log slope."""
    reports = [run(replace(spec, network=spec.network.with_updates(n=int(n), nu_w=None))) for n in sizes]
    variances = [float(np.var(rep.values(statistic), ddof=1)) for rep in reports]
    fit = variance_scaling(sizes, variances)
    logger.info(f"Variance scaling of {statistic}: slope {fit.slope:.3f} +/- {fit.stderr:.3f}")
    return fit, reports
