"""Closed-form counterparts of the simulated distortion statistics.

Every function here is a pure evaluation. Functions that take a ``moments``
argument accept any provider of E[d^s] (see ``netflation.analysis.moments``),
so the same formula can be scored on a realized degree sequence or on the
truncated Pareto law it was drawn from.
"""

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import bisect

from netflation.analysis.moments import DegreeMoments
from netflation.utils import logger, make_rng


class TheoryDomainError(ValueError):
    """Raised when a closed form is evaluated outside its admissible domain."""

    pass


# Degree-moment kernels

def G_of_zeta(moments: DegreeMoments, zeta: float, nu: float) -> float:
    """G(zeta) = E[d^(zeta-1+nu^2)] - E[d^(zeta-1)] E[d^(nu^2)]."""
    nu2 = nu ** 2
    return moments.moment(zeta - 1.0 + nu2) - moments.moment(zeta - 1.0) * moments.moment(nu2)


def zeta_star(moments: DegreeMoments, nu: float, alpha: float, xtol: float = 1e-10) -> Tuple[float, float]:
    """Zero of G on [0, 2] by bisection, and the heavy-tail approximation min(1, alpha - nu^2)."""
    approximation = min(1.0, alpha - nu ** 2)
    g_lo, g_hi = G_of_zeta(moments, 0.0, nu), G_of_zeta(moments, 2.0, nu)
    if g_lo == 0.0:
        return 0.0, approximation
    if g_hi == 0.0:
        return 2.0, approximation
    if np.sign(g_lo) == np.sign(g_hi):
        raise TheoryDomainError(f"G does not change sign on [0, 2] (G(0)={g_lo:.3e}, G(2)={g_hi:.3e})")
    root = bisect(lambda z: G_of_zeta(moments, z, nu), 0.0, 2.0, xtol=xtol)
    return float(root), approximation


def phi_prediction(moments: DegreeMoments, pi: float, zeta: float, nu: float, xi_T: float) -> float:
    """log(1+pi) + xi_T (E[d]/E[d^zeta]) G(zeta)."""
    exposure = moments.moment(1.0) / moments.moment(zeta) * G_of_zeta(moments, zeta, nu)
    return math.log1p(pi) + xi_T * exposure


def phi_prediction_firms(degrees, pi: float, zeta: float, nu: float, xi_T: float) -> float:
    """log(1+pi) + xi_T sum_i mu_i(zeta) z_i on a realized sequence, z_i = delta_i / mu_i, mu_i = d_i / sum d."""
    d = np.asarray(degrees, dtype=float)
    weights = d ** zeta / np.sum(d ** zeta)
    delta = d ** (nu ** 2) - np.mean(d ** (nu ** 2))
    z = delta / (d / d.sum())
    return math.log1p(pi) + xi_T * float(weights @ z)


def transient_scale(lambda2: float, pi: float, C_series: Sequence[float], m_tilde: float, T: int) -> Tuple[float, float]:
    """X_T = sum_{t=1}^{T-1} rho^(T-t) C_t with rho = lambda2/(1+pi), and xi_T = pi(1+pi) X_T / m_tilde.

    ``C_series[t-1]`` holds C_t.
    """
    if T < 2:
        raise TheoryDomainError(f"transient scale needs T >= 2, got {T}")
    C = np.asarray(C_series, dtype=float)
    if C.size < T - 1:
        raise TheoryDomainError(f"need C_1..C_{T - 1}, got {C.size} values")
    if m_tilde <= 0:
        raise TheoryDomainError(f"m_tilde must be positive, got {m_tilde}")
    rho = lambda2 / (1.0 + pi)
    t = np.arange(1, T)
    X_T = float(np.sum(rho ** (T - t) * C[: T - 1]))
    return X_T, pi * (1.0 + pi) * X_T / m_tilde


def transient_scale_series(lambda2: float, pi: float, C_series: Sequence[float], m_tilde: float, horizon: int):
    """X_T and xi_T for every T = 2..horizon."""
    X = np.full(horizon + 1, np.nan)
    xi = np.full(horizon + 1, np.nan)
    for T in range(2, horizon + 1):
        X[T], xi[T] = transient_scale(lambda2, pi, C_series, m_tilde, T)
    return X, xi


# Misalignment closures

def c_ub_closure(alpha: float, theta: float, v: float) -> float:
    """alpha/(alpha+v) - a/(a+v) with a = alpha - (1-v) theta; positive, increasing in theta."""
    a = alpha - (1.0 - v) * theta
    if a + v <= 0 or alpha + v <= 0:
        raise TheoryDomainError(f"C_ub closure undefined at alpha={alpha}, theta={theta}, v={v}")
    return alpha / (alpha + v) - a / (a + v)


def c_ub_tilted(alpha: float, theta: float, v: float) -> float:
    """a/(a+v) - alpha/(alpha+v); its theta-derivative is -(1-v) v / (a+v)^2."""
    return -c_ub_closure(alpha, theta, v)


def c_lb_closure(alpha: float, theta: float, v: float) -> float:
    """Same closure with the untilted exponent theta."""
    a = alpha - theta
    if a + v <= 0:
        raise TheoryDomainError(f"C_lb closure undefined at alpha={alpha}, theta={theta}, v={v}")
    return alpha / (alpha + v) - a / (a + v)


def c_bounds_from_moments(moments: DegreeMoments, nu: float, theta: float) -> Tuple[float, float]:
    """(C_ub, C_lb) from E[d^s]; these carry the sign of the realized misalignment."""

    def tilted(exponent):
        weight = moments.moment(exponent)
        return (moments.moment(exponent - nu) - moments.moment(-nu) * weight) / weight

    return tilted((1.0 - nu) * theta), tilted(theta)


def steady_kernel(C_ub: float, lambda2: float, pi: float = 0.0) -> float:
    """C_ub lambda2 / (1 + pi - lambda2); pi = 0 gives the leading-constant kernel."""
    if not 0 <= lambda2 < 1 + pi:
        raise TheoryDomainError(f"kernel needs 0 <= lambda2 < 1+pi, got lambda2={lambda2}, pi={pi}")
    return C_ub * lambda2 / (1.0 + pi - lambda2)


def steady_kernel_tilted(alpha: float, theta: float, v: float, lambda2: float, pi: float) -> float:
    """H(theta) on the tilted closure; decreasing in theta."""
    return steady_kernel(c_ub_tilted(alpha, theta, v), lambda2, pi)


def kernel_lambda_derivative(lambda2: float, pi: float) -> float:
    """d/d lambda2 of lambda2/(1+pi-lambda2)."""
    return (1.0 + pi) / (1.0 + pi - lambda2) ** 2


# Steady-state distortion constants

def fat_tail_dispersion(alpha: float, nu: float) -> float:
    """K1 - 2 B K2 + B^2 K3, a weighted integral of (d^(nu^2) - B)^2 and hence nonnegative."""
    nu2 = nu ** 2
    denominators = (alpha - 1.0 - nu2, alpha + 2.0 - 2.0 * nu2, alpha + 2.0 - nu2, alpha + 2.0)
    if min(denominators) <= 0:
        raise TheoryDomainError(f"dispersion term undefined at alpha={alpha}, nu={nu}")
    B = (alpha - 1.0) / (alpha - 1.0 - nu2)
    K1 = 1.0 / (alpha + 2.0 - 2.0 * nu2)
    K2 = 1.0 / (alpha + 2.0 - nu2)
    K3 = 1.0 / (alpha + 2.0)
    return K1 - 2.0 * B * K2 + B ** 2 * K3


def W_omega_closed(
    alpha: float,
    nu: float,
    theta: float,
    v: float,
    lambda2: float,
    k: float = 1.0,
    tilted: bool = False,
) -> float:
    """k A(alpha)^2 H(alpha) sqrt(Q(alpha)) with A = (alpha-1)/(alpha-2), H = C_ub lambda2/(1-lambda2).

    The default uses the positive closure ``c_ub_closure``: the value is
    positive, falls in alpha, rises in lambda2 and rises in theta. With
    ``tilted`` C_ub is ``c_ub_tilted``; the value is then the signed constant,
    negative and decreasing in theta, with the same magnitude.
    """
    if not alpha > 2:
        raise TheoryDomainError(f"W_omega needs alpha > 2, got {alpha}")
    if not 0 <= lambda2 < 1:
        raise TheoryDomainError(f"W_omega needs lambda2 in [0, 1), got {lambda2}")
    Q = fat_tail_dispersion(alpha, nu)
    if Q < 0:
        raise TheoryDomainError(f"dispersion term is negative ({Q:.3e}) at alpha={alpha}, nu={nu}")
    A = (alpha - 1.0) / (alpha - 2.0)
    C_ub = c_ub_tilted(alpha, theta, v) if tilted else c_ub_closure(alpha, theta, v)
    H = steady_kernel(C_ub, lambda2)
    return k * A ** 2 * H * math.sqrt(Q)


def W_psi_closed(
    alpha: float,
    nu: float,
    theta: float,
    v: float,
    lambda2: float,
    rstar_weights,
    z,
) -> float:
    """(X0^2 / 2) sum_i R_i (z_i - sum_j R_j z_j)^2 with X0 = C_ub lambda2 / (1 - lambda2).

    X0 enters squared, so the positive and tilted closures give the same
    value: falling in alpha, rising in lambda2 and rising in theta.
    """
    if not alpha > 1 + 2 * nu ** 2:
        raise TheoryDomainError(f"W_psi needs alpha > 1 + 2 nu^2, got alpha={alpha}, nu={nu}")
    if not 0 <= lambda2 < 1:
        raise TheoryDomainError(f"W_psi needs lambda2 in [0, 1), got {lambda2}")
    R = np.asarray(rstar_weights, dtype=float)
    z = np.asarray(z, dtype=float)
    if R.shape != z.shape:
        raise TheoryDomainError("weights and z must have the same length")
    if (R < 0).any() or abs(R.sum() - 1.0) > 1e-10:
        raise TheoryDomainError("benchmark weights must lie on the simplex")
    X0 = steady_kernel(c_ub_closure(alpha, theta, v), lambda2)
    centered = z - R @ z
    return 0.5 * X0 ** 2 * float(R @ centered ** 2)


# Calvo and menu-cost baselines

@dataclass(frozen=True)
class CalvoBaseline:
    phi: float
    E_R: float
    E_R2: float
    omega: float
    omega_first_order: float
    eta: float


def calvo_baselines(pi: float, eta: float) -> CalvoBaseline:
    """Time-dependent benchmark with constant reset probability eta in (0, 1]."""
    if pi < 0:
        raise TheoryDomainError(f"pi must be nonnegative, got {pi}")
    if not 0 < eta <= 1:
        raise TheoryDomainError(f"eta must lie in (0, 1], got {eta}")
    stay = 1.0 - eta
    a = stay * (1.0 + pi)
    b = stay * (1.0 + pi) ** 2
    if b >= 1:
        raise TheoryDomainError(
            f"second moment of the relative price diverges: (1-eta)(1+pi)^2 = {b:.6f} >= 1"
        )
    # E[R]-1 and E[R^2]-1 in factored form; the rms gap is their small difference
    excess_1 = stay * pi / (1.0 - a)
    excess_2 = stay * pi * (2.0 + pi) / (1.0 - b)
    return CalvoBaseline(
        phi=pi / eta,
        E_R=1.0 + excess_1,
        E_R2=1.0 + excess_2,
        omega=math.sqrt(max(excess_2 - 2.0 * excess_1, 0.0)),
        omega_first_order=pi * math.sqrt(stay * (2.0 - eta)) / eta,
        eta=eta,
    )


def calvo_monte_carlo(pi: float, eta: float, draws: int = 1_000_000, seed: int = 0) -> CalvoBaseline:
    """Geometric-age oracle: ages tau ~ P(tau = k) = eta (1-eta)^k from stratified uniforms."""
    if not 0 < eta < 1:
        raise TheoryDomainError(f"Monte Carlo oracle needs eta in (0, 1), got {eta}")
    rng = make_rng(seed)
    u = (np.arange(draws) + rng.random(draws)) / draws
    tau = np.floor(np.log1p(-u) / math.log1p(-eta))
    growth = (1.0 + pi) ** tau
    E_R = float(growth.mean())
    E_R2 = float((growth ** 2).mean())
    return CalvoBaseline(
        phi=pi * float((tau + 1.0).mean()),
        E_R=E_R,
        E_R2=E_R2,
        omega=math.sqrt(max(E_R2 + 1.0 - 2.0 * E_R, 0.0)),
        omega_first_order=pi * math.sqrt((1.0 - eta) * (2.0 - eta)) / eta,
        eta=eta,
    )


def menu_cost_eta(pi: float, kappa: float, eta0: float = 0.3, beta: float = 10.0) -> float:
    """Reduced-form adjustment probability, increasing in pi and decreasing in kappa."""
    if kappa < 0 or eta0 <= 0 or beta < 0:
        raise TheoryDomainError(f"invalid menu-cost inputs kappa={kappa}, eta0={eta0}, beta={beta}")
    return min(1.0, eta0 * (1.0 + beta * pi) / (1.0 + kappa))


def menucost_baselines(pi: float, kappa: float, eta0: float = 0.3, beta: float = 10.0, eta_fn=None) -> CalvoBaseline:
    """Calvo formulas evaluated at the state-dependent hazard eta(kappa, pi)."""
    eta = eta_fn(pi, kappa) if eta_fn is not None else menu_cost_eta(pi, kappa, eta0, beta)
    return calvo_baselines(pi, eta)


# Short-run band and sticky windows

@dataclass(frozen=True)
class WronskianBand:
    a: float
    b: float
    c: float
    band: Optional[Tuple[float, float]]

    def evaluate(self, delta):
        delta = np.asarray(delta, dtype=float)
        return self.a * delta ** 2 + self.b * delta + self.c


def phase_sums(lambda2: float, pi: float, T: int):
    """q_tau, alpha_tau and the cumulative sums R1^k, R2^k for tau, k = 1..T (index 0 unused)."""
    tau = np.arange(T + 1, dtype=float)
    q = lambda2 ** tau * (1.0 + pi) ** (tau - 1.0)
    phase = 1.0 + pi * (tau - 1.0) / (1.0 + pi)
    q[0] = phase[0] = 0.0
    return q, phase, np.cumsum(q), np.cumsum(phase * q)


def wronskian_band(lambda2: float, pi: float, C_ub: float, mu_i: float, T: int) -> WronskianBand:
    """Coefficients of the quadratic a delta^2 + b delta + c and its negative band, if any."""
    if T < 2:
        raise TheoryDomainError(f"band needs T >= 2, got {T}")
    q, phase, R1, R2 = phase_sums(lambda2, pi, T)
    W = q[T] * float(np.sum((phase[T] - phase[1:T]) * q[1:T]))
    s = 1.0 + pi
    P = lambda k: s ** (k - 1)
    P_tilde = lambda k: k * s ** k
    B = P_tilde(T) * R1[T - 1] + R2[T] * P(T - 1) - P_tilde(T - 1) * R1[T] - R2[T - 1] * P(T)

    a = C_ub ** 2 * W
    b = mu_i * C_ub * B
    c = mu_i ** 2 * s ** (2 * T - 2)
    disc = b ** 2 - 4.0 * a * c
    band = None
    if a > 0 and disc > 0:
        root = math.sqrt(disc)
        band = ((-b - root) / (2.0 * a), (-b + root) / (2.0 * a))
    return WronskianBand(a=float(a), b=float(b), c=float(c), band=band)


@dataclass(frozen=True)
class StickyWindow:
    underline_X: float
    overline_X: float
    V: float

    @property
    def total(self) -> float:
        return self.underline_X + self.overline_X


def sticky_window(lambda2: float, pi: float, C_ub: float, m_tilde: float, T: int, T_reset: int) -> StickyWindow:
    """Split sum_{L=T_reset}^{T} X_L (constant C_k = C_ub) into pre-window and in-window vintages."""
    if not 1 <= T_reset < T:
        raise TheoryDomainError(f"need 1 <= T_reset < T, got T_reset={T_reset}, T={T}")
    if m_tilde <= 0:
        raise TheoryDomainError(f"m_tilde must be positive, got {m_tilde}")
    rho = lambda2 / (1.0 + pi)
    span = T - T_reset + 1

    # vintages k < T_reset - 1 see the whole window
    k_pre = np.arange(1, T_reset - 1)
    underline = C_ub * float(np.sum(rho ** (T_reset - k_pre))) * (1.0 - rho ** span) / (1.0 - rho)

    # vintages inside the window enter from L = k + 1
    k_in = np.arange(max(1, T_reset - 1), T)
    overline = C_ub * rho / (1.0 - rho) * float(np.sum(1.0 - rho ** (T - k_in)))

    V = (1.0 + pi) ** 2 * C_ub / (m_tilde * (1.0 + pi - lambda2))
    return StickyWindow(underline_X=float(underline), overline_X=float(overline), V=float(V))


def window_double_sum(lambda2: float, pi: float, C_ub: float, T: int, T_reset: int) -> float:
    """Direct sum_{L=T_reset}^{T} sum_{k=1}^{L-1} C_ub rho^(L-k)."""
    rho = lambda2 / (1.0 + pi)
    total = 0.0
    for L in range(T_reset, T + 1):
        for k in range(1, L):
            total += C_ub * rho ** (L - k)
    return total


@dataclass(frozen=True)
class VintageMixture:
    I: float
    J: float
    X_bar: float


def vintage_mixture(weights, pi: float, X_series) -> VintageMixture:
    """I = sum w_t (1+pi)^(t-1), J = sum w_t (1+pi)^(t-1) X_t and X_bar = J / I, over t = 0..T."""
    w = np.asarray(weights, dtype=float)
    X = np.asarray(X_series, dtype=float)
    if w.shape != X.shape:
        raise TheoryDomainError(f"weights ({w.size}) and X series ({X.size}) must align")
    if (w < 0).any() or abs(w.sum() - 1.0) > 1e-8:
        raise TheoryDomainError("vintage weights must lie on the simplex")
    scale = w * (1.0 + pi) ** (np.arange(w.size) - 1.0)
    live = scale > 0
    I = float(scale.sum())
    J = float(scale[live] @ X[live])
    return VintageMixture(I=I, J=J, X_bar=J / I)


# Assembled prediction

@dataclass
class TheoryPrediction:
    """All closed forms for one parameter set; ``G`` is kept as a callable and exported as a grid."""

    parameters: Dict[str, Any]
    moments: str
    zeta_star: float
    zeta_approximation: float
    G: Any = field(repr=False)
    G_grid: List[Tuple[float, float]]
    xi_T: List[float]
    X_T: List[float]
    H_kernel: float
    X0_kernel: float
    W_omega: float
    W_psi: float
    C_lb: float
    C_ub: float
    calvo: Dict[str, float]
    menucost: Dict[str, float]
    wronskian: List[Dict[str, Any]]
    V_sticky: float
    phi_prediction: List[float]

    def to_dict(self) -> Dict[str, Any]:
        out = {k: v for k, v in asdict(self).items() if k != "G"}
        return _json_ready(out)

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        return path


def _json_ready(value):
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return None if not math.isfinite(float(value)) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _or_nan(fn, *args, **kwargs) -> float:
    try:
        return fn(*args, **kwargs)
    except TheoryDomainError as e:
        logger.warning(f"{fn.__name__} not evaluated: {e}")
        return float("nan")


def predict(
    moments: DegreeMoments,
    *,
    alpha: float,
    nu: float,
    theta: float,
    lambda2: float,
    pi: float,
    horizon: int,
    v: Optional[float] = None,
    C_series: Optional[Sequence[float]] = None,
    m_tilde: float = 1.0,
    eta: float = 0.5,
    kappa: float = 0.0,
    zeta: float = 1.0,
    T_reset: Optional[int] = None,
    mu_i: Optional[float] = None,
    rstar_weights=None,
    z=None,
    k: float = 1.0,
) -> TheoryPrediction:
    """Evaluate every closed form at one parameter point.

    ``v`` defaults to ``nu``. Without a recorded ``C_series`` the transient
    terms use the constant misalignment C_ub.
    """
    v = nu if v is None else v
    C_ub = c_ub_closure(alpha, theta, v)
    C_lb = c_lb_closure(alpha, theta, v)
    root, approximation = zeta_star(moments, nu, alpha)
    grid = [(float(x), G_of_zeta(moments, float(x), nu)) for x in np.linspace(0.0, 2.0, 21)]

    series = np.full(horizon, C_ub) if C_series is None else np.asarray(C_series, dtype=float)
    X, xi = transient_scale_series(lambda2, pi, series, m_tilde, horizon)
    phi = [float("nan") if np.isnan(x) else phi_prediction(moments, pi, zeta, nu, x) for x in xi]

    mu = mu_i if mu_i is not None else 1.0
    wronskian = []
    for T in range(2, horizon + 1):
        band = wronskian_band(lambda2, pi, C_ub, mu, T)
        wronskian.append({"T": T, "a": band.a, "b": band.b, "c": band.c, "band": band.band})

    W_psi = float("nan")
    if rstar_weights is not None and z is not None:
        W_psi = _or_nan(W_psi_closed, alpha, nu, theta, v, lambda2, rstar_weights, z)

    calvo = calvo_baselines(pi, eta)
    menucost = menucost_baselines(pi, kappa)
    T_reset = T_reset if T_reset is not None else max(1, horizon // 2)
    window = sticky_window(lambda2, pi, C_ub, m_tilde, horizon, T_reset) if horizon > T_reset else None

    return TheoryPrediction(
        parameters={
            "alpha": alpha, "nu": nu, "theta": theta, "v": v, "lambda2": lambda2, "pi": pi,
            "horizon": horizon, "m_tilde": m_tilde, "eta": eta, "kappa": kappa, "zeta": zeta,
            "T_reset": T_reset, "k": k,
        },
        moments=getattr(moments, "label", type(moments).__name__),
        zeta_star=root,
        zeta_approximation=approximation,
        G=lambda x: G_of_zeta(moments, x, nu),
        G_grid=grid,
        xi_T=[float(x) for x in xi],
        X_T=[float(x) for x in X],
        H_kernel=steady_kernel(C_ub, lambda2, pi),
        X0_kernel=steady_kernel(C_ub, lambda2),
        W_omega=_or_nan(W_omega_closed, alpha, nu, theta, v, lambda2, k),
        W_psi=W_psi,
        C_lb=C_lb,
        C_ub=C_ub,
        calvo=asdict(calvo),
        menucost=asdict(menucost),
        wronskian=wronskian,
        V_sticky=window.V if window is not None else float("nan"),
        phi_prediction=phi,
    )
