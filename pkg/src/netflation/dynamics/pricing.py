from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from typing import List, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from netflation.dynamics.monetary import MoneyTrajectory
from netflation.network.netgen import Economy
from netflation.network.spectral import degree_proxies
from netflation.utils import logger, make_rng, resolve_workers

HAZARD_DRIVERS = ("age", "gap")
REGIMES = ("flexible", "sticky")

# Disjoint from the network generator streams
_RESET_STREAM = 16


class PricingError(Exception):
    """Raised when a price path cannot be built from the given inputs."""

    pass


@dataclass(frozen=True)
class HazardSpec:
    """Separable reset hazard g~(pi u) f(delta).

    g(x) = 1 - exp(-x / g_scale) is capped to one from the age
    u_bar = -g_scale ln(epsilon_cap) / pi on, and
    f(delta) = c0 + (c1 - c0) delta^2 / (delta^2 + kappa_f).
    With ``driver="gap"`` the duration factor is g(|log posted - log clearing|)
    instead, without the cap. Bounds must satisfy 0 < c0 < c1 < 1 unless
    ``allow_degenerate`` is set, which also admits c0 = c1 (constant exposure)
    and c1 = 1.
    """

    g_scale: float = 0.05
    epsilon_cap: float = 0.01
    c0: float = 0.1
    c1: float = 0.6
    kappa_f: float = 0.05
    driver: str = "age"
    allow_degenerate: bool = False

    def __post_init__(self):
        if not self.g_scale > 0:
            raise PricingError(f"g_scale must be positive, got {self.g_scale}")
        if not 0 < self.epsilon_cap < 1:
            raise PricingError(f"epsilon_cap must lie in (0, 1), got {self.epsilon_cap}")
        if self.allow_degenerate:
            if not 0 < self.c0 <= self.c1 <= 1:
                raise PricingError(f"need 0 < c0 <= c1 <= 1, got c0={self.c0}, c1={self.c1}")
        elif not 0 < self.c0 < self.c1 < 1:
            raise PricingError(
                f"need 0 < c0 < c1 < 1, got c0={self.c0}, c1={self.c1}; set allow_degenerate for c0 = c1 or c1 = 1"
            )
        if not self.kappa_f > 0:
            raise PricingError(f"kappa_f must be positive, got {self.kappa_f}")
        if self.driver not in HAZARD_DRIVERS:
            raise PricingError(f"driver must be one of {', '.join(HAZARD_DRIVERS)}, got {self.driver!r}")

    def g(self, x):
        return 1.0 - np.exp(-np.asarray(x, dtype=float) / self.g_scale)

    def f(self, delta):
        d2 = np.asarray(delta, dtype=float) ** 2
        return self.c0 + (self.c1 - self.c0) * d2 / (d2 + self.kappa_f)

    def age_cap(self, pi: float) -> float:
        """u_bar; infinite when pi = 0."""
        if pi <= 0:
            return float("inf")
        return -self.g_scale * np.log(self.epsilon_cap) / pi

    def to_dict(self) -> dict:
        return asdict(self)


def hazard(spec: HazardSpec, pi: float, age, delta_i):
    """Reset probability g~(pi * age) f(delta_i); broadcasts over arrays."""
    age = np.asarray(age, dtype=float)
    if (age < 0).any():
        raise PricingError("age must be nonnegative")
    duration = np.where(age >= spec.age_cap(pi), 1.0, spec.g(pi * age))
    out = duration * spec.f(delta_i)
    return float(out) if out.ndim == 0 else out


def gap_hazard(spec: HazardSpec, log_gap, delta_i):
    """Reset probability g(|log gap|) f(delta_i)."""
    out = spec.g(np.abs(np.asarray(log_gap, dtype=float))) * spec.f(delta_i)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class PricePath:
    """Posted and market-clearing prices over t = 0..T.

    ``reset_flags[t, i]`` marks a reset of firm i at t; every firm posts the
    clearing price at t = 0. ``unsold`` and ``fill_rate`` are proportional
    rationing diagnostics with no feedback into prices.
    """

    prices: np.ndarray
    market_clearing: np.ndarray
    ages: np.ndarray
    last_reset: np.ndarray
    regime: str
    reset_flags: np.ndarray
    unsold: np.ndarray
    fill_rate: np.ndarray

    @property
    def horizon(self) -> int:
        return self.prices.shape[0] - 1

    @property
    def n(self) -> int:
        return self.prices.shape[1]

    @property
    def reset_events(self) -> List[Tuple[int, int]]:
        t, firm = np.nonzero(self.reset_flags[1:])
        return [(int(a) + 1, int(b)) for a, b in zip(t, firm)]

    def vintages(self) -> np.ndarray:
        """Operative vintage t~_i(t) = t - u_{i,t}."""
        return np.arange(self.horizon + 1)[:, None] - self.ages


def _clearing_prices(economy: Economy, trajectory: MoneyTrajectory) -> np.ndarray:
    if trajectory.nominal_demand.shape[1] != economy.n:
        raise PricingError(
            f"trajectory has {trajectory.nominal_demand.shape[1]} firms, economy has {economy.n}"
        )
    q = economy.quantities
    if (q <= 0).any():
        raise PricingError("every firm needs positive output")
    prices = trajectory.nominal_demand / q[None, :]
    if not (prices > 0).all():
        raise PricingError("market-clearing prices must be strictly positive; nominal demand vanished")
    return prices


def _rationing(economy: Economy, demand: np.ndarray, prices: np.ndarray):
    wanted = demand / prices
    q = economy.quantities[None, :]
    unsold = np.maximum(q - wanted, 0.0)
    fill = np.minimum(1.0, q / wanted)
    return unsold, fill


def flexible_prices(economy: Economy, trajectory: MoneyTrajectory) -> PricePath:
    p_flex = _clearing_prices(economy, trajectory)
    T = p_flex.shape[0] - 1
    unsold, fill = _rationing(economy, trajectory.nominal_demand, p_flex)
    return PricePath(
        prices=p_flex,
        market_clearing=p_flex,
        ages=np.zeros(p_flex.shape, dtype=np.int64),
        last_reset=np.full(economy.n, T, dtype=np.int64),
        regime="flexible",
        reset_flags=np.ones(p_flex.shape, dtype=bool),
        unsold=unsold,
        fill_rate=fill,
    )


def sticky_prices(
    economy: Economy,
    trajectory: MoneyTrajectory,
    spec: HazardSpec,
    seed: int,
    replication: int = 0,
) -> PricePath:
    """Posted prices under the local reset hazard.

    A resetting firm posts the current clearing price and its age returns to
    zero; otherwise the previous price is carried and the age grows by one.
    """
    p_flex = _clearing_prices(economy, trajectory)
    T, n = p_flex.shape[0] - 1, economy.n
    rng = make_rng(seed, _RESET_STREAM, replication)
    delta, _ = degree_proxies(economy.degrees.degrees, trajectory.nu)

    prices = np.empty_like(p_flex)
    ages = np.zeros((T + 1, n), dtype=np.int64)
    flags = np.zeros((T + 1, n), dtype=bool)
    prices[0] = p_flex[0]
    flags[0] = True

    for t in range(1, T + 1):
        age = ages[t - 1] + 1
        if spec.driver == "age":
            probability = hazard(spec, trajectory.pi, age, delta)
        else:
            probability = gap_hazard(spec, np.log(prices[t - 1] / p_flex[t]), delta)
        resets = rng.random(n) < probability
        prices[t] = np.where(resets, p_flex[t], prices[t - 1])
        ages[t] = np.where(resets, 0, age)
        flags[t] = resets

    unsold, fill = _rationing(economy, trajectory.nominal_demand, prices)
    return PricePath(
        prices=prices,
        market_clearing=p_flex,
        ages=ages,
        last_reset=T - ages[T],
        regime="sticky",
        reset_flags=flags,
        unsold=unsold,
        fill_rate=fill,
    )


def _sticky_worker(args) -> PricePath:
    economy, trajectory, spec, seed, replication = args
    return sticky_prices(economy, trajectory, spec, seed, replication)


def sticky_replications(
    economy: Economy,
    trajectory: MoneyTrajectory,
    spec: HazardSpec,
    seed: int,
    replications: int,
    max_workers: int = 1,
    progress: bool = False,
) -> List[PricePath]:
    """R sticky paths sharing one trajectory; replication r draws from stream (seed, r)."""
    if replications < 1:
        raise PricingError(f"replications must be >= 1, got {replications}")
    args = [(economy, trajectory, spec, seed, r) for r in range(replications)]
    workers = resolve_workers(max_workers)
    if workers == 1:
        paths = [_sticky_worker(a) for a in tqdm(args, desc="Sticky replications", disable=not progress)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            paths = list(
                tqdm(
                    executor.map(_sticky_worker, args),
                    total=replications,
                    desc="Sticky replications",
                    disable=not progress,
                )
            )
    logger.info(
        f"Ran {replications} sticky replications; mean reset frequency "
        f"{np.mean([reset_frequency(p) for p in paths]):.4f}"
    )
    return paths


def vintage_weights(paths: Union[PricePath, Sequence[PricePath]], firm: int, T: int) -> np.ndarray:
    """Share of replications whose operative vintage for ``firm`` at T is t, for t = 0..T."""
    if isinstance(paths, PricePath):
        paths = [paths]
    if not paths:
        raise PricingError("no price paths given")
    weights = np.zeros(T + 1)
    if paths[0].regime == "flexible":
        weights[T] = 1.0
        return weights
    for path in paths:
        if not 0 <= T <= path.horizon:
            raise PricingError(f"T={T} outside the path horizon 0..{path.horizon}")
        weights[T - path.ages[T, firm]] += 1.0
    return weights / len(paths)


def geometric_vintage_weights(eta: float, T: int) -> np.ndarray:
    """Vintage law under a constant hazard eta from period 1 on; vintage 0 keeps the survivors."""
    t = np.arange(T + 1)
    weights = eta * (1.0 - eta) ** (T - t)
    weights[0] = (1.0 - eta) ** T
    return weights


def reset_frequency(path: PricePath) -> float:
    """Resets per firm-period over t = 1..T."""
    if path.horizon == 0:
        return 0.0
    return float(path.reset_flags[1:].mean())


def synchronization_index(path: PricePath) -> float:
    """Largest fraction of firms resetting in one period t >= 1."""
    if path.horizon == 0:
        return 0.0
    return float(path.reset_flags[1:].mean(axis=1).max())
