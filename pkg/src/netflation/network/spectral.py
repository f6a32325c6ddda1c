from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional

import numpy as np
from scipy import stats

from netflation.utils import logger, make_rng

if TYPE_CHECKING:
    from netflation.network.netgen import Economy

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITER = 10_000
RAYLEIGH_WINDOW = 50


class NumericalError(Exception):
    """Raised when an iterative eigen-solver does not converge."""

    pass


class AssumptionViolationError(NumericalError):
    """Raised when a draw breaks the real, positive subdominant eigenvalue assumption."""

    pass


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    lambda2: float
    gap: float
    v1: np.ndarray
    v2: np.ndarray
    u2: np.ndarray
    relaxation_time: float
    iterations: int

    @property
    def overlap(self) -> float:
        """u2'v2, the biorthogonal normalization of the second mode."""
        return float(self.u2 @ self.v2)

    def projector(self) -> np.ndarray:
        """Dense rank-one projector v2 u2' / (u2'v2); independent of either sign."""
        return np.outer(self.v2, self.u2) / self.overlap

    def to_dict(self) -> dict:
        return {
            "lambda2": self.lambda2,
            "gap": self.gap,
            "relaxation_time": self.relaxation_time,
            "iterations": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class ProxyVectors:
    """Degree shapes of the second mode and how closely v2 follows them.

    ``rank_alignment`` is |spearman(v2, delta)|; ``sector_alignment`` is the
    largest |cosine| of v2 with a centered sector indicator (nan without
    sectors). A sector mode shows as sector_alignment well above
    |alignment_v|.
    """

    delta: np.ndarray
    uproxy: np.ndarray
    alignment_v: float
    alignment_u: float
    rank_alignment: float = float("nan")
    sector_alignment: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "alignment_v": self.alignment_v,
            "alignment_u": self.alignment_u,
            "rank_alignment": self.rank_alignment,
            "sector_alignment": self.sector_alignment,
        }


@dataclass(frozen=True, eq=False)
class TwoModeShock:
    permanent: np.ndarray
    transitory: np.ndarray
    exact: np.ndarray

    def reconstruction_errors(self) -> np.ndarray:
        """L2 error of permanent + transitory against exact propagation, per lag."""
        residual = self.exact - self.permanent[None, :] - self.transitory
        return np.linalg.norm(residual, axis=1)


def perron_vector(adjacency, tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Stationary probability vector of a column-stochastic matrix by power iteration."""
    n = adjacency.shape[0]
    x = np.full(n, 1.0 / n)
    ax = adjacency @ x
    residual = np.abs(ax - x).sum()
    for _ in range(max_iter):
        if residual < tol:
            return x
        x = ax / ax.sum()
        ax = adjacency @ x
        residual = np.abs(ax - x).sum()
    if residual < tol:
        return x
    raise NumericalError(
        f"Stationary vector did not converge in {max_iter} iterations (L1 residual {residual:.3e})"
    )


def stationary_vector(economy: "Economy", tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    return perron_vector(economy.adjacency, tol=tol, max_iter=max_iter)


def _is_oscillating(history) -> bool:
    values = np.asarray(history)
    if values.size < 3 or np.ptp(values) < 1e-8:
        return False
    steps = np.sign(np.diff(values))
    steps = steps[steps != 0]
    if steps.size < 2:
        return False
    return np.mean(steps[1:] != steps[:-1]) > 0.3


def _power_iterate(
    apply: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    tol: float,
    max_iter: int,
    label: str,
):
    x = x / np.linalg.norm(x)
    history = deque(maxlen=RAYLEIGH_WINDOW)
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        y = apply(x)
        rho = float(x @ y)
        residual = float(np.linalg.norm(y - rho * x))
        history.append(rho)
        if residual < tol:
            return rho, x, iteration
        norm = np.linalg.norm(y)
        if norm == 0.0:
            raise AssumptionViolationError(f"{label}: deflated operator annihilates the iterate (lambda2 = 0)")
        x = y / norm

    if _is_oscillating(history):
        raise AssumptionViolationError(
            f"{label}: Rayleigh quotient oscillates over the last {len(history)} iterations "
            f"(range [{min(history):.6f}, {max(history):.6f}]); subdominant pair is complex"
        )
    raise NumericalError(
        f"{label}: power iteration did not converge in {max_iter} iterations (residual {residual:.3e})"
    )


def _orient(vector: np.ndarray, reference: np.ndarray) -> np.ndarray:
    if np.linalg.norm(reference) > 1e-14:
        return vector if vector @ reference >= 0 else -vector
    pivot = vector[np.flatnonzero(np.abs(vector) > 1e-14)[0]]
    return vector if pivot >= 0 else -vector


def degree_proxies(degrees: np.ndarray, nu: float):
    """Centered d^(nu^2) and d^(-nu) shapes (empirical means)."""
    d = np.asarray(degrees, dtype=float)
    delta = d ** (nu ** 2)
    uproxy = d ** (-nu)
    return delta - delta.mean(), uproxy - uproxy.mean()


def subdominant_pair(
    economy: "Economy",
    nu: Optional[float] = None,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
) -> SpectralSummary:
    """lambda2 with right/left eigenvectors from the operator deflated by v1 1'."""
    A = economy.adjacency
    v1 = economy.stationary
    n = economy.n
    rng = make_rng(seed)

    def right(x):
        return A @ x - v1 * x.sum()

    def left(y):
        return A.T @ y - (v1 @ y)

    start = rng.standard_normal(n)
    lam_right, v2, it_right = _power_iterate(right, start - v1 * start.sum(), tol, max_iter, "right subdominant")
    start = rng.standard_normal(n)
    lam_left, u2, it_left = _power_iterate(left, start - start.mean(), tol, max_iter, "left subdominant")

    if abs(lam_right - lam_left) > 1e-6:
        raise NumericalError(
            f"Left and right subdominant eigenvalues disagree: {lam_right:.10f} vs {lam_left:.10f}"
        )
    if lam_right <= 0:
        raise AssumptionViolationError(f"Subdominant eigenvalue is not positive: lambda2={lam_right:.6f}")
    if lam_right >= 1:
        raise AssumptionViolationError(f"Subdominant eigenvalue is not below one: lambda2={lam_right:.12f}")

    if nu is None:
        nu = economy.params.nu if economy.params is not None else 0.5
    delta, uproxy = degree_proxies(economy.degrees.degrees, nu)
    v2 = _orient(v2, delta)
    u2 = _orient(u2, uproxy)
    if abs(u2 @ v2) < 1e-12:
        raise NumericalError("Left and right subdominant vectors are orthogonal; projector undefined")

    gap = 1.0 - lam_right
    logger.info(f"Subdominant pair: lambda2={lam_right:.6f}, gap={gap:.6f}, iterations={max(it_right, it_left)}")
    return SpectralSummary(
        lambda2=float(lam_right),
        gap=float(gap),
        v1=v1,
        v2=v2,
        u2=u2,
        relaxation_time=float(1.0 / gap),
        iterations=int(max(it_right, it_left)),
    )


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-12 or nb < 1e-12:
        return float("nan")
    return float(a @ b / (na * nb))


def proxy_vectors(economy: "Economy", summary: SpectralSummary, nu: Optional[float] = None) -> ProxyVectors:
    """Degree-moment shapes of the second mode and their cosine alignment (nan when degenerate)."""
    if nu is None:
        nu = economy.params.nu if economy.params is not None else 0.5
    delta, uproxy = degree_proxies(economy.degrees.degrees, nu)
    rank = float("nan")
    if np.ptp(delta) > 0 and np.ptp(summary.v2) > 0:
        rank = abs(float(stats.spearmanr(summary.v2, delta)[0]))
    sector = float("nan")
    if economy.sectors is not None and np.unique(economy.sectors).size > 1:
        indicators = [(economy.sectors == s).astype(float) for s in np.unique(economy.sectors)]
        sector = max(abs(_cosine(summary.v2, x - x.mean())) for x in indicators)
    return ProxyVectors(
        delta=delta,
        uproxy=uproxy,
        alignment_v=_cosine(summary.v2, delta),
        alignment_u=_cosine(summary.u2, uproxy),
        rank_alignment=rank,
        sector_alignment=sector,
    )


def exact_propagation(economy: "Economy", shock: np.ndarray, horizon: int) -> np.ndarray:
    """Rows A^tau shock for tau = 0..horizon."""
    out = np.empty((horizon + 1, economy.n))
    x = np.asarray(shock, dtype=float)
    out[0] = x
    for tau in range(1, horizon + 1):
        x = economy.adjacency @ x
        out[tau] = x
    return out


def two_mode_shock(economy: "Economy", summary: SpectralSummary, shock: np.ndarray, horizon: int) -> TwoModeShock:
    shock = np.asarray(shock, dtype=float)
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if (shock < 0).any():
        raise ValueError("shock must be nonnegative")
    permanent = summary.v1 * shock.sum()
    loading = (summary.u2 @ shock) / summary.overlap
    powers = summary.lambda2 ** np.arange(horizon + 1)
    transitory = powers[:, None] * (loading * summary.v2)[None, :]
    return TwoModeShock(
        permanent=permanent,
        transitory=transitory,
        exact=exact_propagation(economy, shock, horizon),
    )


def dense_spectrum(economy: "Economy") -> np.ndarray:
    """All eigenvalues of the dense adjacency, sorted by decreasing modulus."""
    values = np.linalg.eigvals(economy.adjacency.toarray())
    return values[np.argsort(-np.abs(values), kind="stable")]
