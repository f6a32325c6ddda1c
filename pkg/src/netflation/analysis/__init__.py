from netflation.analysis.moments import DegreeMoments, EmpiricalMoments, ParetoMoments
from netflation.analysis.stats import (
    DistortionRecord,
    ElasticityError,
    Elasticities,
    StatisticDomainError,
    degree_weights,
    distortion_record,
    elasticities,
    equilibrium_relative_prices,
    omega_T,
    phi_T,
    psi_T,
    relative_prices,
    select_numeraire,
)
from netflation.analysis.theory import (
    CalvoBaseline,
    StickyWindow,
    TheoryDomainError,
    TheoryPrediction,
    VintageMixture,
    WronskianBand,
    G_of_zeta,
    W_omega_closed,
    W_psi_closed,
    c_bounds_from_moments,
    c_lb_closure,
    c_ub_closure,
    c_ub_tilted,
    calvo_baselines,
    calvo_monte_carlo,
    fat_tail_dispersion,
    kernel_lambda_derivative,
    menu_cost_eta,
    menucost_baselines,
    phi_prediction,
    phi_prediction_firms,
    predict,
    steady_kernel,
    steady_kernel_tilted,
    sticky_window,
    transient_scale,
    transient_scale_series,
    vintage_mixture,
    window_double_sum,
    wronskian_band,
    zeta_star,
)

__all__ = [
    "DegreeMoments",
    "EmpiricalMoments",
    "ParetoMoments",
    "DistortionRecord",
    "ElasticityError",
    "Elasticities",
    "StatisticDomainError",
    "degree_weights",
    "distortion_record",
    "elasticities",
    "equilibrium_relative_prices",
    "omega_T",
    "phi_T",
    "psi_T",
    "relative_prices",
    "select_numeraire",
    "CalvoBaseline",
    "StickyWindow",
    "TheoryDomainError",
    "TheoryPrediction",
    "VintageMixture",
    "WronskianBand",
    "G_of_zeta",
    "W_omega_closed",
    "W_psi_closed",
    "c_bounds_from_moments",
    "c_lb_closure",
    "c_ub_closure",
    "c_ub_tilted",
    "calvo_baselines",
    "calvo_monte_carlo",
    "fat_tail_dispersion",
    "kernel_lambda_derivative",
    "menu_cost_eta",
    "menucost_baselines",
    "phi_prediction",
    "phi_prediction_firms",
    "predict",
    "steady_kernel",
    "steady_kernel_tilted",
    "sticky_window",
    "transient_scale",
    "transient_scale_series",
    "vintage_mixture",
    "window_double_sum",
    "wronskian_band",
    "zeta_star",
]
