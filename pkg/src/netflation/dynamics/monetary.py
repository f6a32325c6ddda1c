from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from netflation.network.netgen import Economy
from netflation.utils import logger

UPDATE_FORMS = ("propagated", "direct")
INITIAL_PRESETS = ("stationary", "uniform", "degree")

# Relative floor applied to balances before the theta power
BALANCE_FLOOR = 1e-300


class MonetaryDomainError(ValueError):
    """Raised when balances or monetary parameters leave their domain."""

    pass


@dataclass(frozen=True, eq=False)
class MonetaryParams:
    """Injection rate, concavity and initial balances of one monetary run.

    ``update_form`` selects m_{t+1} = A(m_t + chi gamma_t) ("propagated") or
    m_{t+1} = A m_t + chi gamma_t ("direct").
    """

    pi: float
    theta: float
    m0: np.ndarray
    horizon: int
    update_form: str = "propagated"

    def __post_init__(self):
        if not self.pi >= 0:
            raise MonetaryDomainError(f"pi must be nonnegative, got {self.pi}")
        if not 0 < self.theta <= 1:
            raise MonetaryDomainError(f"theta must lie in (0, 1], got {self.theta}")
        if self.horizon < 1:
            raise MonetaryDomainError(f"horizon must be >= 1, got {self.horizon}")
        if self.update_form not in UPDATE_FORMS:
            raise MonetaryDomainError(
                f"update_form must be one of {', '.join(UPDATE_FORMS)}, got {self.update_form!r}"
            )
        m0 = np.asarray(self.m0, dtype=float)
        _check_balances(m0)
        object.__setattr__(self, "m0", m0)


@dataclass(frozen=True, eq=False)
class MoneyTrajectory:
    """Rows are periods t = 0..T."""

    balances: np.ndarray
    shares: np.ndarray
    mass: np.ndarray
    misalignment: np.ndarray
    nominal_demand: np.ndarray
    pi: float
    theta: float
    nu: float
    update_form: str

    @property
    def horizon(self) -> int:
        return self.balances.shape[0] - 1

    @property
    def initial_mass(self) -> float:
        return float(self.mass[0])

    def mass_law_error(self) -> float:
        """max_t |M_t - (1+pi)^t M_0| / M_t."""
        expected = self.initial_mass * (1.0 + self.pi) ** np.arange(self.horizon + 1)
        return float(np.max(np.abs(self.mass - expected) / self.mass))

    def injection_kernel_series(self) -> np.ndarray:
        """C_k of the k-th injection (k = 1..T), which uses gamma_{k-1}."""
        return self.misalignment[:-1]


@dataclass(frozen=True, eq=False)
class SteadyInjection:
    gamma_ub: np.ndarray
    C_ub: float
    C_lb: float


def _check_balances(m: np.ndarray):
    if m.ndim != 1:
        raise MonetaryDomainError("balances must be a vector")
    if not np.isfinite(m).all():
        raise MonetaryDomainError("balances must be finite")
    if (m < 0).any():
        raise MonetaryDomainError("balances must be nonnegative")
    if not m.sum() > 0:
        raise MonetaryDomainError("balances must have positive total mass")


def initial_balances(economy: Economy, preset: str = "stationary", total: float = 1.0) -> np.ndarray:
    """Starting balances M0 * v1, M0 / n each, or proportional to degree."""
    if preset == "stationary":
        base = economy.stationary
    elif preset == "uniform":
        base = np.ones(economy.n)
    elif preset == "degree":
        base = economy.degrees.degrees.astype(float)
    else:
        raise MonetaryDomainError(
            f"Unknown initial balance preset {preset!r}; expected one of {', '.join(INITIAL_PRESETS)}"
        )
    return total * base / base.sum()


def injection_shares(m: np.ndarray, theta: float) -> np.ndarray:
    """gamma = m^theta / 1'm^theta on the unit simplex."""
    floor = BALANCE_FLOOR * m.mean()
    weights = np.maximum(m, floor) ** theta
    return weights / weights.sum()


def step(economy: Economy, params: MonetaryParams, m_t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """One period of the injection law; returns (m_next, gamma_t)."""
    m_t = np.asarray(m_t, dtype=float)
    _check_balances(m_t)
    gamma = injection_shares(m_t, params.theta)
    chi = params.pi * m_t.sum()
    if params.update_form == "propagated":
        m_next = economy.adjacency @ (m_t + chi * gamma)
    else:
        m_next = economy.adjacency @ m_t + chi * gamma
    return m_next, gamma


def misalignment_Ct(economy: Economy, gamma_t: np.ndarray, nu: float) -> float:
    """E_gamma[d^-nu] - E[d^-nu]."""
    tilt = economy.degrees.power(-nu)
    return float(gamma_t @ tilt - tilt.mean())


def simulate(economy: Economy, params: MonetaryParams, nu: Optional[float] = None) -> MoneyTrajectory:
    if nu is None:
        nu = economy.params.nu if economy.params is not None else 0.5
    if params.m0.size != economy.n:
        raise MonetaryDomainError(f"m0 has {params.m0.size} entries for {economy.n} firms")

    T, n = params.horizon, economy.n
    balances = np.empty((T + 1, n))
    shares = np.empty((T + 1, n))
    demand = np.empty((T + 1, n))
    misalignment = np.empty(T + 1)

    m = params.m0.copy()
    for t in range(T + 1):
        balances[t] = m
        demand[t] = economy.adjacency @ m
        if t < T:
            m_next, gamma = step(economy, params, m)
        else:
            gamma = injection_shares(m, params.theta)
        shares[t] = gamma
        misalignment[t] = misalignment_Ct(economy, gamma, nu)
        if t < T:
            m = m_next

    trajectory = MoneyTrajectory(
        balances=balances,
        shares=shares,
        mass=balances.sum(axis=1),
        misalignment=misalignment,
        nominal_demand=demand,
        pi=float(params.pi),
        theta=float(params.theta),
        nu=float(nu),
        update_form=params.update_form,
    )
    logger.info(
        f"Simulated money for T={T} (pi={params.pi}, theta={params.theta}, form={params.update_form}); "
        f"mass-law error {trajectory.mass_law_error():.2e}"
    )
    return trajectory


def _tilted_covariance(degrees: np.ndarray, exponent: float, nu: float) -> float:
    d = degrees.astype(float)
    weight = d ** exponent
    return float((np.mean(d ** (exponent - nu)) - np.mean(d ** (-nu)) * weight.mean()) / weight.mean())


def gamma_steady(economy: Economy, params: MonetaryParams, nu: Optional[float] = None) -> SteadyInjection:
    """Mean-field injection profile gamma_ub ~ d^((1-nu) theta) and the C_ub / C_lb moment brackets."""
    if nu is None:
        nu = economy.params.nu if economy.params is not None else 0.5
    degrees = economy.degrees.degrees
    exponent = (1.0 - nu) * params.theta
    profile = degrees.astype(float) ** exponent
    return SteadyInjection(
        gamma_ub=profile / profile.sum(),
        C_ub=_tilted_covariance(degrees, exponent, nu),
        C_lb=_tilted_covariance(degrees, params.theta, nu),
    )


def gamma_distance_series(trajectory: MoneyTrajectory, reference: np.ndarray) -> np.ndarray:
    """||gamma_t - reference||_1 per period."""
    return np.abs(trajectory.shares - reference[None, :]).sum(axis=1)


def bracket_fraction(trajectory: MoneyTrajectory, steady: SteadyInjection, slack: float = 0.15) -> float:
    """Share of periods whose C_t falls inside [C_lb, C_ub] widened by slack * |C_ub|."""
    tol = slack * abs(steady.C_ub)
    lower = min(steady.C_lb, steady.C_ub) - tol
    upper = max(steady.C_lb, steady.C_ub) + tol
    inside = (trajectory.misalignment >= lower) & (trajectory.misalignment <= upper)
    return float(inside.mean())
