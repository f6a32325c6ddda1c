from typing import Protocol

import numpy as np

from netflation.network.netgen import TruncatedPareto


class DegreeMoments(Protocol):
    """Anything that returns E[d^s]."""

    label: str

    def moment(self, s: float) -> float:
        ...


class EmpiricalMoments:
    """Sample moments of a realized degree sequence."""

    label = "empirical"

    def __init__(self, degrees):
        self.degrees = np.asarray(degrees, dtype=float)
        if self.degrees.size == 0 or (self.degrees <= 0).any():
            raise ValueError("degrees must be a nonempty positive vector")

    def moment(self, s: float) -> float:
        if s == 0:
            return 1.0
        return float(np.mean(self.degrees ** s))


class ParetoMoments:
    """Closed-form moments of the truncated Pareto degree law."""

    label = "pareto"

    def __init__(self, alpha: float, d_min: float, d_max: float):
        self.law = TruncatedPareto(alpha, d_min, d_max)

    def moment(self, s: float) -> float:
        return self.law.moment(s)
