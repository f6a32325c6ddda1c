from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np
from scipy import stats as sps

from netflation.utils import make_rng

MIN_DRAWS = 30
EXCEEDANCE_SDS = 2.0


class EnsembleError(Exception):
    """Raised when an ensemble cannot produce a valid report."""

    pass


@dataclass(frozen=True)
class ConcentrationDiagnostics:
    draws: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    quantile_correlation: float
    exceedance: float
    chebyshev_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def summary_moments(values: Sequence[float]) -> dict:
    """Mean, variance, skewness and excess kurtosis; zeros for a degenerate sample."""
    x = np.asarray(values, dtype=float)
    variance = float(np.var(x, ddof=1)) if x.size > 1 else 0.0
    if variance == 0.0:
        return {"mean": float(x.mean()), "variance": 0.0, "skewness": 0.0, "excess_kurtosis": 0.0}
    return {
        "mean": float(x.mean()),
        "variance": variance,
        "skewness": float(sps.skew(x)),
        "excess_kurtosis": float(sps.kurtosis(x, fisher=True)),
    }


def quantile_correlation(values: Sequence[float]) -> float:
    """Correlation of the normal probability plot; nan for constant input."""
    x = np.asarray(values, dtype=float)
    if x.size < 3 or np.ptp(x) == 0:
        return float("nan")
    (_, _), (_, _, r) = sps.probplot(x, dist="norm")
    return float(r)


def concentration_check(values: Sequence[float], epsilon_sds: float = EXCEEDANCE_SDS) -> ConcentrationDiagnostics:
    """Normality and Chebyshev diagnostics of one statistic across draws."""
    x = np.asarray(values, dtype=float)
    if x.size < MIN_DRAWS:
        raise EnsembleError(f"concentration check needs at least {MIN_DRAWS} draws, got {x.size}")
    moments = summary_moments(x)
    sd = np.sqrt(moments["variance"])
    exceedance = 0.0 if sd == 0 else float(np.mean(np.abs(x - moments["mean"]) > epsilon_sds * sd))
    return ConcentrationDiagnostics(
        draws=int(x.size),
        mean=moments["mean"],
        variance=moments["variance"],
        skewness=moments["skewness"],
        excess_kurtosis=moments["excess_kurtosis"],
        quantile_correlation=quantile_correlation(x),
        exceedance=exceedance,
        chebyshev_bound=1.0 / epsilon_sds ** 2,
    )


@dataclass(frozen=True)
class VarianceScaling:
    slope: float
    intercept: float
    stderr: float
    sizes: tuple
    variances: tuple


def variance_scaling(sizes: Sequence[int], variances: Sequence[float]) -> VarianceScaling:
    """Least-squares slope of log variance on log n."""
    n = np.asarray(sizes, dtype=float)
    v = np.asarray(variances, dtype=float)
    if n.size < 2:
        raise EnsembleError("variance scaling needs at least two firm counts")
    if (v <= 0).any():
        raise EnsembleError("variance scaling needs positive variances")
    fit = sps.linregress(np.log(n), np.log(v))
    return VarianceScaling(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
        sizes=tuple(int(s) for s in sizes),
        variances=tuple(float(x) for x in v),
    )


@dataclass(frozen=True)
class BinComparison:
    top_mean: float
    bottom_mean: float
    top_count: int
    bottom_count: int
    bootstrap_fraction: float


def compare_lambda2_bins(
    lambda2: Sequence[float],
    values: Sequence[float],
    resamples: int = 1000,
    seed: int = 0,
) -> BinComparison:
    """Top- vs bottom-quartile mean of ``values`` by realized lambda2, with the bootstrap share of top > bottom."""
    lam = np.asarray(lambda2, dtype=float)
    x = np.asarray(values, dtype=float)
    if lam.shape != x.shape or lam.size < 8:
        raise EnsembleError("lambda2 binning needs matching arrays with at least 8 draws")
    lo, hi = np.quantile(lam, [0.25, 0.75])
    top = x[lam >= hi]
    bottom = x[lam <= lo]
    rng = make_rng(seed)
    top_boot = rng.choice(top, size=(resamples, top.size), replace=True).mean(axis=1)
    bottom_boot = rng.choice(bottom, size=(resamples, bottom.size), replace=True).mean(axis=1)
    return BinComparison(
        top_mean=float(top.mean()),
        bottom_mean=float(bottom.mean()),
        top_count=int(top.size),
        bottom_count=int(bottom.size),
        bootstrap_fraction=float(np.mean(top_boot > bottom_boot)),
    )
