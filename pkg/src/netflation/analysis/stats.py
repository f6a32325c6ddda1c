import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from netflation.dynamics.pricing import PricePath
from netflation.network.netgen import Economy
from netflation.utils import logger


class StatisticDomainError(ValueError):
    """Raised when a distortion statistic is requested outside its domain."""

    pass


class ElasticityError(StatisticDomainError):
    """Raised when a log-log elasticity is undefined at an evaluation point."""

    pass


def _log_prices(path: PricePath, t: int) -> np.ndarray:
    if not 0 <= t <= path.horizon:
        raise StatisticDomainError(f"period {t} outside 0..{path.horizon}")
    p = path.prices[t]
    if not (p > 0).all():
        raise StatisticDomainError(f"nonpositive price at t={t}")
    return np.log(p)


def degree_weights(economy: Economy, zeta: float) -> np.ndarray:
    """mu_i(zeta) = d_i^zeta / sum_j d_j^zeta."""
    w = economy.degrees.power(zeta)
    return w / w.sum()


def phi_T(path: PricePath, economy: Economy, zeta: float, T: int) -> float:
    """Degree-weighted mean absolute log-price change between T-1 and T."""
    if T < 1:
        raise StatisticDomainError(f"phi needs T >= 1, got {T}")
    change = np.abs(_log_prices(path, T) - _log_prices(path, T - 1))
    return float(degree_weights(economy, zeta) @ change)


def select_numeraire(economy: Economy, nu: float) -> int:
    """Firm whose d^(nu^2) is closest to its cross-sectional mean; lowest index on ties."""
    x = economy.degrees.power(nu ** 2)
    return int(np.argmin(np.abs(x - x.mean())))


def equilibrium_relative_prices(economy: Economy, numeraire: int, proxy: bool = False) -> np.ndarray:
    """r_i* = (v1_i/q_i)/(v1_k/q_k); with ``proxy`` the weights are d_i / sum d, so r_i* = d_k / d_i."""
    if not 0 <= numeraire < economy.n:
        raise StatisticDomainError(f"numeraire {numeraire} outside 0..{economy.n - 1}")
    if proxy:
        d = economy.degrees.degrees.astype(float)
        return d[numeraire] / d
    unit_value = economy.stationary / economy.quantities
    return unit_value / unit_value[numeraire]


def relative_prices(path: PricePath, numeraire: int, T: int) -> np.ndarray:
    p = np.exp(_log_prices(path, T))
    return p / p[numeraire]


def omega_T(path: PricePath, rstar: np.ndarray, numeraire: int, T: int) -> float:
    """RMS gap between realized and equilibrium relative prices."""
    r = relative_prices(path, numeraire, T)
    return float(np.sqrt(np.mean((r - rstar) ** 2)))


def psi_T(path: PricePath, rstar: np.ndarray, numeraire: int, T: int) -> float:
    """KL divergence of normalized relative prices from the normalized benchmark."""
    r = relative_prices(path, numeraire, T)
    R = r / r.sum()
    R_star = np.asarray(rstar, dtype=float) / np.sum(rstar)
    value = float(np.sum(R * np.log(R / R_star)))
    # Gibbs: rounding may leave a tiny negative
    return max(value, 0.0)


@dataclass(frozen=True)
class Elasticities:
    L_phi: float
    L_omega: float
    L_psi: float


def elasticities(
    runner: Callable[[float], Tuple[float, float, float]],
    pi0: float,
    h: float,
) -> Elasticities:
    """Central log-log differences of (phi, omega, psi) in pi at pi0 from runs at pi0 -+ h.

    ``runner`` must hold its random numbers fixed across calls.
    """
    if not pi0 > h > 0:
        raise ElasticityError(f"need pi0 > h > 0, got pi0={pi0}, h={h}")
    low = runner(pi0 - h)
    high = runner(pi0 + h)
    span = math.log(pi0 + h) - math.log(pi0 - h)
    names = ("phi", "omega", "psi")
    out = []
    for name, a, b in zip(names, low, high):
        if not (a > 0 and b > 0):
            raise ElasticityError(f"{name} must be positive at pi0 -+ h, got {a} and {b}")
        out.append((math.log(b) - math.log(a)) / span)
    return Elasticities(*out)


@dataclass(frozen=True, eq=False)
class DistortionRecord:
    """phi, omega and psi at horizons 1..T with window averages of omega and psi."""

    horizons: np.ndarray
    phi: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    zeta: float
    numeraire: int
    window: Tuple[int, int]
    time_averages: Tuple[float, float]
    regime: str = "flexible"

    def header(self) -> dict:
        return {
            "zeta": self.zeta,
            "numeraire": self.numeraire,
            "window": list(self.window),
            "omega_bar": self.time_averages[0],
            "psi_bar": self.time_averages[1],
            "regime": self.regime,
        }


def distortion_record(
    path: PricePath,
    economy: Economy,
    zeta: float = 1.0,
    nu: Optional[float] = None,
    numeraire: Optional[int] = None,
    rstar: Optional[np.ndarray] = None,
    window: Optional[Tuple[int, int]] = None,
) -> DistortionRecord:
    """Distortion statistics for every horizon of ``path``.

    The window defaults to the second half of the horizon.
    """
    if nu is None:
        nu = economy.params.nu if economy.params is not None else 0.5
    if numeraire is None:
        numeraire = select_numeraire(economy, nu)
    if rstar is None:
        rstar = equilibrium_relative_prices(economy, numeraire)
    H = path.horizon
    if H < 1:
        raise StatisticDomainError("price path needs at least one period after t=0")
    if window is None:
        window = (max(1, H // 2), H)
    lo, hi = window
    if not 1 <= lo <= hi <= H:
        raise StatisticDomainError(f"window {window} outside 1..{H}")

    horizons = np.arange(1, H + 1)
    phi = np.array([phi_T(path, economy, zeta, T) for T in horizons])
    omega = np.array([omega_T(path, rstar, numeraire, T) for T in horizons])
    psi = np.array([psi_T(path, rstar, numeraire, T) for T in horizons])
    mask = (horizons >= lo) & (horizons <= hi)
    averages = (float(omega[mask].mean()), float(psi[mask].mean()))
    logger.info(
        f"Distortions ({path.regime}): phi_T={phi[-1]:.6f}, omega_bar={averages[0]:.6f}, "
        f"psi_bar={averages[1]:.3e} over window [{lo}, {hi}]"
    )
    return DistortionRecord(
        horizons=horizons,
        phi=phi,
        omega=omega,
        psi=psi,
        zeta=float(zeta),
        numeraire=int(numeraire),
        window=(int(lo), int(hi)),
        time_averages=averages,
        regime=path.regime,
    )
