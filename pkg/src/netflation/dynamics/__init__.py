from netflation.dynamics.monetary import (
    INITIAL_PRESETS,
    UPDATE_FORMS,
    MonetaryDomainError,
    MonetaryParams,
    MoneyTrajectory,
    SteadyInjection,
    bracket_fraction,
    gamma_distance_series,
    gamma_steady,
    initial_balances,
    injection_shares,
    misalignment_Ct,
    simulate,
    step,
)
from netflation.dynamics.pricing import (
    HAZARD_DRIVERS,
    HazardSpec,
    PricePath,
    PricingError,
    flexible_prices,
    gap_hazard,
    geometric_vintage_weights,
    hazard,
    reset_frequency,
    sticky_prices,
    sticky_replications,
    synchronization_index,
    vintage_weights,
)

__all__ = [
    "INITIAL_PRESETS",
    "UPDATE_FORMS",
    "MonetaryDomainError",
    "MonetaryParams",
    "MoneyTrajectory",
    "SteadyInjection",
    "bracket_fraction",
    "gamma_distance_series",
    "gamma_steady",
    "initial_balances",
    "injection_shares",
    "misalignment_Ct",
    "simulate",
    "step",
    "HAZARD_DRIVERS",
    "HazardSpec",
    "PricePath",
    "PricingError",
    "flexible_prices",
    "gap_hazard",
    "geometric_vintage_weights",
    "hazard",
    "reset_frequency",
    "sticky_prices",
    "sticky_replications",
    "synchronization_index",
    "vintage_weights",
]
