import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from netflation.network.spectral import perron_vector
from netflation.utils import logger, make_rng

# Stream identifiers under one network seed
_DEGREE_STREAM = 0
_SECTOR_STREAM = 1
_WIRING_STREAM = 2
_ORPHAN_STREAM = 3
_REPAIR_STREAM = 4

REPAIR_WEIGHT = 1e-6
MAX_REPAIR_ROUNDS = 3

# Cap on the number of Gumbel scores held in memory while wiring
_SCORE_BUDGET = 2_000_000


class ParameterError(ValueError):
    """Raised when network parameters violate their invariants."""

    pass


class GenerationError(Exception):
    """Raised when a production network cannot be generated."""

    pass


@dataclass(frozen=True)
class NetworkParams:
    """Parameters of one production-network draw.

    ``sectors`` and ``sector_affinity`` give the network its slow,
    real subdominant mode; ``nu_w`` pins the disassortative tilt instead of
    calibrating it.
    """

    n: int
    alpha: float
    d_min: int
    d_max: int
    nu: float
    B: float = 1.0
    seed: int = 0
    sectors: int = 2
    sector_affinity: float = 0.9
    nu_w: Optional[float] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if not self.alpha > 1:
            raise ParameterError(f"alpha must exceed 1, got {self.alpha}")
        if self.d_min < 1 or self.d_min > self.d_max:
            raise ParameterError(
                f"Invalid degree support [{self.d_min}, {self.d_max}]: need 1 <= d_min <= d_max"
            )
        if not 0 < self.nu < 1:
            raise ParameterError(f"nu must lie in (0, 1), got {self.nu}")
        if not self.B > 0:
            raise ParameterError(f"B must be positive, got {self.B}")
        if self.sectors < 1:
            raise ParameterError(f"sectors must be >= 1, got {self.sectors}")
        if not 0 <= self.sector_affinity < 1:
            raise ParameterError(f"sector_affinity must lie in [0, 1), got {self.sector_affinity}")

    def with_updates(self, **changes) -> "NetworkParams":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class TruncatedPareto:
    """Continuous power law f(d) = C d^(-alpha) on [lower, upper]."""

    def __init__(self, alpha: float, lower: float, upper: float):
        if not alpha > 1:
            raise ParameterError(f"alpha must exceed 1, got {alpha}")
        if lower <= 0 or lower > upper:
            raise ParameterError(f"Invalid support [{lower}, {upper}]")
        self.alpha = float(alpha)
        self.lower = float(lower)
        self.upper = float(upper)
        self.point_mass = self.lower == self.upper
        self._a1 = self.lower ** (1.0 - self.alpha)
        self._b1 = self.upper ** (1.0 - self.alpha)

    @property
    def norm(self) -> float:
        return (1.0 - self.alpha) / (self._b1 - self._a1)

    def pdf(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        inside = (d >= self.lower) & (d <= self.upper)
        return np.where(inside, self.norm * np.power(d, -self.alpha, where=inside, out=np.ones_like(d)), 0.0)

    def cdf(self, d) -> np.ndarray:
        d = np.clip(np.asarray(d, dtype=float), self.lower, self.upper)
        if self.point_mass:
            return np.ones_like(d)
        return (d ** (1.0 - self.alpha) - self._a1) / (self._b1 - self._a1)

    def ppf(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.point_mass:
            return np.full_like(u, self.lower)
        return (self._a1 + u * (self._b1 - self._a1)) ** (1.0 / (1.0 - self.alpha))

    def rvs(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return self.ppf(rng.random(size))

    def moment(self, s: float) -> float:
        """E[d^s], with the s = alpha - 1 branch integrated as a logarithm."""
        if s == 0:
            return 1.0
        if self.point_mass:
            return self.lower ** s
        exponent = s - self.alpha + 1.0
        if abs(exponent) < 1e-12:
            return self.norm * math.log(self.upper / self.lower)
        return self.norm * (self.upper ** exponent - self.lower ** exponent) / exponent

    def mean(self) -> float:
        return self.moment(1.0)

    def variance(self) -> float:
        return self.moment(2.0) - self.mean() ** 2


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """Supplier counts d_i of every firm."""

    degrees: np.ndarray
    d_min: int
    d_max: int

    def __post_init__(self):
        degrees = np.asarray(self.degrees)
        if degrees.ndim != 1 or degrees.size == 0:
            raise ParameterError("degrees must be a non-empty vector")
        if not np.issubdtype(degrees.dtype, np.integer):
            raise ParameterError("degrees must be integers")
        if degrees.min() < self.d_min or degrees.max() > self.d_max:
            raise ParameterError(
                f"degrees outside support [{self.d_min}, {self.d_max}]: "
                f"found [{degrees.min()}, {degrees.max()}]"
            )
        object.__setattr__(self, "degrees", degrees.astype(np.int64))

    def __len__(self) -> int:
        return int(self.degrees.size)

    def power(self, s: float) -> np.ndarray:
        return self.degrees.astype(float) ** s

    @property
    def log_degrees(self) -> np.ndarray:
        return np.log(self.degrees.astype(float))


@dataclass(frozen=True, eq=False)
class Economy:
    """Immutable production-network snapshot.

    ``adjacency[i, j]`` is the share of buyer j's spending paid to supplier i,
    so every column sums to one and money moves as m_{t+1} = A m_t.
    """

    adjacency: sparse.csc_matrix
    degrees: DegreeSequence
    quantities: np.ndarray
    stationary: np.ndarray
    params: Optional[NetworkParams] = None
    sectors: Optional[np.ndarray] = None
    nu_w: Optional[float] = None
    repair_rounds: int = 0

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=0)).ravel()

    def propagate(self, x: np.ndarray) -> np.ndarray:
        return self.adjacency @ x

    @classmethod
    def from_adjacency(
        cls,
        adjacency,
        degrees: Optional[np.ndarray] = None,
        params: Optional[NetworkParams] = None,
        check_irreducible: bool = True,
    ) -> "Economy":
        """Wrap a hand-made column-stochastic matrix.

        Degrees default to the number of suppliers in each column and
        quantities follow h(d) = d^2.
        """
        A = sparse.csc_matrix(adjacency, dtype=float)
        if A.shape[0] != A.shape[1]:
            raise GenerationError(f"adjacency must be square, got {A.shape}")
        if (A.data < 0).any():
            raise GenerationError("adjacency must be nonnegative")
        sums = np.asarray(A.sum(axis=0)).ravel()
        if np.abs(sums - 1.0).max() > 1e-12:
            raise GenerationError(
                f"adjacency is not column-stochastic (max deviation {np.abs(sums - 1.0).max():.3e})"
            )
        if check_irreducible:
            n_components, _ = connected_components(A, directed=True, connection="strong")
            if n_components != 1:
                raise GenerationError(f"adjacency has {n_components} strongly connected components")

        if degrees is None:
            degrees = np.diff(A.indptr)
        degrees = np.asarray(degrees, dtype=np.int64)
        sequence = DegreeSequence(degrees, int(degrees.min()), int(degrees.max()))
        return cls(
            adjacency=A,
            degrees=sequence,
            quantities=output_from_degree(sequence.degrees),
            stationary=perron_vector(A),
            params=params,
        )


def output_from_degree(degrees: np.ndarray, k: float = 1.0) -> np.ndarray:
    """Equilibrium output h(d) = k d^2."""
    return k * np.asarray(degrees, dtype=float) ** 2


def degree_law(params: NetworkParams) -> TruncatedPareto:
    return TruncatedPareto(params.alpha, params.d_min, params.d_max)


def sample_degrees(params: NetworkParams) -> DegreeSequence:
    """n i.i.d. truncated-Pareto draws rounded to the nearest integer and clamped to the support."""
    rng = make_rng(params.seed, _DEGREE_STREAM)
    draws = degree_law(params).rvs(params.n, rng)
    degrees = np.clip(np.rint(draws), params.d_min, params.d_max).astype(np.int64)
    return DegreeSequence(degrees, params.d_min, params.d_max)


def degree_moment(params: NetworkParams, s: float) -> float:
    """E[d^s] under the continuous truncated-Pareto density of ``params``."""
    return degree_law(params).moment(s)


def assign_sectors(params: NetworkParams) -> np.ndarray:
    rng = make_rng(params.seed, _SECTOR_STREAM)
    sectors = np.empty(params.n, dtype=np.int64)
    sectors[rng.permutation(params.n)] = np.arange(params.n) % params.sectors
    return sectors


def _tilt_position(degrees: np.ndarray) -> np.ndarray:
    log_d = np.log(degrees.astype(float))
    return log_d - log_d.mean()


def wire_suppliers(
    degrees: np.ndarray,
    sectors: np.ndarray,
    nu_w: float,
    sector_affinity: float,
    seed: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Each buyer j draws d_j distinct suppliers without replacement.

    Supplier i gets log-weight (1 - nu_w * l_j) ln d_i, where l_j is the
    buyer's centered log degree, plus ln(1 - sector_affinity) across sectors.
    Sampling uses Gumbel top-k on a noise matrix generated in a fixed group
    order, so two calls with the same seed share their random numbers.

    Returns (suppliers, buyers) edge arrays.
    """
    n = degrees.size
    rng = make_rng(seed, _WIRING_STREAM)
    log_d = np.log(degrees.astype(float))
    position = _tilt_position(degrees)
    cross_penalty = math.log1p(-sector_affinity) if sector_affinity > 0 else 0.0

    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    group_keys = np.stack([degrees, sectors], axis=1)
    unique_groups = np.unique(group_keys, axis=0)
    batch = max(1, _SCORE_BUDGET // n)

    for degree, sector in unique_groups:
        buyers = np.flatnonzero((degrees == degree) & (sectors == sector))
        tilt = 1.0 - nu_w * position[buyers[0]]
        log_weight = tilt * log_d
        if cross_penalty != 0.0:
            log_weight = log_weight + np.where(sectors == sector, 0.0, cross_penalty)

        for start in range(0, buyers.size, batch):
            chunk = buyers[start:start + batch]
            scores = log_weight[None, :] + rng.gumbel(size=(chunk.size, n))
            scores[np.arange(chunk.size), chunk] = -np.inf
            chosen = np.argpartition(-scores, int(degree) - 1, axis=1)[:, : int(degree)]
            rows.append(chosen.ravel())
            cols.append(np.repeat(chunk, int(degree)))

    return np.concatenate(rows), np.concatenate(cols)


def _knn_from_edges(degrees: np.ndarray, suppliers: np.ndarray, buyers: np.ndarray) -> np.ndarray:
    n = degrees.size
    totals = np.bincount(buyers, weights=degrees[suppliers].astype(float), minlength=n)
    counts = np.bincount(buyers, minlength=n)
    return totals / np.maximum(counts, 1)


def _fit_log_slope(degrees: np.ndarray, knn: np.ndarray) -> Tuple[float, float]:
    slope, intercept = np.polyfit(np.log(degrees.astype(float)), np.log(knn), 1)
    return float(slope), float(intercept)


def calibrate_tilt(
    degrees: np.ndarray,
    sectors: np.ndarray,
    params: NetworkParams,
    tolerance: float = 0.02,
    max_iter: int = 30,
) -> float:
    """Bisection on nu_w so the realized k_nn slope matches -nu."""
    if np.ptp(degrees) == 0:
        logger.info("Degree sequence is regular; disassortative tilt disabled (nu_w=0)")
        return 0.0

    target = -params.nu

    def excess(nu_w: float) -> float:
        suppliers, buyers = wire_suppliers(degrees, sectors, nu_w, params.sector_affinity, params.seed)
        slope, _ = _fit_log_slope(degrees, _knn_from_edges(degrees, suppliers, buyers))
        return slope - target

    lo, hi = 0.0, 2.0
    f_lo = excess(lo)
    if f_lo <= 0:
        return lo
    f_hi = excess(hi)
    while f_hi > 0 and hi < 16.0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = excess(hi)
    if f_hi > 0:
        logger.warning(f"k_nn slope target {target:.3f} not reachable; using nu_w={hi}")
        return hi

    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = excess(mid)
        if abs(f_mid) < tolerance:
            break
        if f_mid > 0:
            lo = mid
        else:
            hi = mid
    return float(mid)


def _adopt_orphans(
    degrees: np.ndarray,
    suppliers: np.ndarray,
    buyers: np.ndarray,
    seed: int,
    max_attempts: int = 50,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Give every firm at least one customer without changing any supplier count.

    An orphan replaces the best-connected supplier of a random buyer; that
    supplier keeps at least one other customer.
    """
    n = degrees.size
    rng = make_rng(seed, _ORPHAN_STREAM)
    suppliers = suppliers.copy()
    customers = np.bincount(suppliers, minlength=n)
    orphans = np.flatnonzero(customers == 0)
    if orphans.size == 0:
        return suppliers, buyers, 0

    order = np.argsort(buyers, kind="stable")
    starts = np.searchsorted(buyers[order], np.arange(n))
    ends = np.searchsorted(buyers[order], np.arange(n), side="right")

    adopted = 0
    for orphan in orphans:
        for _ in range(max_attempts):
            buyer = int(rng.integers(n))
            if buyer == orphan:
                continue
            slots = order[starts[buyer]:ends[buyer]]
            current = suppliers[slots]
            if (current == orphan).any():
                continue
            best = int(np.argmax(customers[current]))
            if customers[current[best]] < 2:
                continue
            customers[current[best]] -= 1
            suppliers[slots[best]] = orphan
            customers[orphan] += 1
            adopted += 1
            break
    return suppliers, buyers, adopted


def normalize_columns(adjacency) -> sparse.csc_matrix:
    A = sparse.csc_matrix(adjacency, dtype=float)
    sums = np.asarray(A.sum(axis=0)).ravel()
    if (sums <= 0).any():
        raise GenerationError(f"{int((sums <= 0).sum())} firms have no suppliers")
    return sparse.csc_matrix(A @ sparse.diags(1.0 / sums))


def repair_irreducibility(
    adjacency: sparse.csc_matrix,
    seed: int,
    weight: float = REPAIR_WEIGHT,
    max_rounds: int = MAX_REPAIR_ROUNDS,
) -> Tuple[sparse.csc_matrix, int]:
    """Link strongly connected components in a random cycle of weak edges.

    Returns the repaired, column-normalized matrix and the number of rounds used.
    """
    rng = make_rng(seed, _REPAIR_STREAM)
    A = adjacency
    for round_index in range(max_rounds + 1):
        n_components, labels = connected_components(A, directed=True, connection="strong")
        if n_components == 1:
            return A, round_index
        if round_index == max_rounds:
            sizes = np.bincount(labels)
            raise GenerationError(
                f"Network still has {n_components} strongly connected components after "
                f"{max_rounds} repair rounds (largest component {sizes.max()} of {labels.size} firms)"
            )

        logger.info(f"Repair round {round_index + 1}: linking {n_components} strongly connected components")
        representatives = np.array(
            [rng.choice(np.flatnonzero(labels == c)) for c in range(n_components)]
        )
        cycle = representatives[rng.permutation(n_components)]
        links = sparse.csc_matrix(
            (np.full(n_components, weight), (cycle, np.roll(cycle, -1))),
            shape=A.shape,
        )
        A = normalize_columns(A + links)
    raise GenerationError("unreachable repair state")


def build_economy(params: NetworkParams) -> Economy:
    """Draw degrees and sectors, wire suppliers, repair, and solve the Perron vector."""
    if params.d_max >= params.n:
        raise ParameterError(f"d_max={params.d_max} must be smaller than n={params.n}")

    sequence = sample_degrees(params)
    degrees = sequence.degrees
    sectors = assign_sectors(params)

    nu_w = params.nu_w if params.nu_w is not None else calibrate_tilt(degrees, sectors, params)
    suppliers, buyers = wire_suppliers(degrees, sectors, nu_w, params.sector_affinity, params.seed)
    suppliers, buyers, adopted = _adopt_orphans(degrees, suppliers, buyers, params.seed)

    adjacency = sparse.csc_matrix(
        (1.0 / degrees[buyers].astype(float), (suppliers, buyers)),
        shape=(params.n, params.n),
    )
    adjacency = normalize_columns(adjacency)
    adjacency, rounds = repair_irreducibility(adjacency, params.seed)

    economy = Economy(
        adjacency=adjacency,
        degrees=sequence,
        quantities=output_from_degree(degrees),
        stationary=perron_vector(adjacency),
        params=params,
        sectors=sectors,
        nu_w=float(nu_w),
        repair_rounds=rounds,
    )
    logger.info(
        f"Built economy: n={params.n}, mean degree={degrees.mean():.2f}, "
        f"nu_w={nu_w:.3f}, orphans adopted={adopted}, repair rounds={rounds}"
    )
    return economy


def supplier_mean_degree(economy: Economy) -> np.ndarray:
    """Mean degree of each firm's suppliers on the support graph."""
    A = economy.adjacency
    degrees = economy.degrees.degrees.astype(float)
    indicator = sparse.csc_matrix((np.ones_like(A.data), A.indices, A.indptr), shape=A.shape)
    totals = np.asarray(indicator.T @ degrees).ravel()
    counts = np.diff(A.indptr)
    return totals / np.maximum(counts, 1)


def knn_profile(economy: Economy) -> List[Tuple[int, float]]:
    """(degree, average mean-supplier-degree) per degree class, sorted by degree."""
    degrees = economy.degrees.degrees
    knn = supplier_mean_degree(economy)
    classes = np.unique(degrees)
    return [(int(d), float(knn[degrees == d].mean())) for d in classes]


def knn_slope(economy: Economy) -> Tuple[float, float]:
    """Least-squares (slope, intercept) of log k_nn on log degree over firms.

    Returns (nan, nan) on a regular degree sequence.
    """
    degrees = economy.degrees.degrees
    if np.ptp(degrees) == 0:
        return float("nan"), float("nan")
    return _fit_log_slope(degrees, supplier_mean_degree(economy))


def calibrated_params(params: NetworkParams) -> NetworkParams:
    """Pin nu_w from the draw at ``params.seed`` so every seed of an ensemble shares one tilt."""
    if params.nu_w is not None:
        return params
    nu_w = calibrate_tilt(sample_degrees(params).degrees, assign_sectors(params), params)
    logger.info(f"Calibrated disassortative tilt nu_w={nu_w:.4f} (target k_nn slope {-params.nu:.3f})")
    return params.with_updates(nu_w=nu_w)
