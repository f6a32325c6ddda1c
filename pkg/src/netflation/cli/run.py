import math
from typing import Any, Dict, Optional

import click
import numpy as np

from netflation.analysis.moments import EmpiricalMoments
from netflation.analysis.stats import degree_weights, distortion_record, equilibrium_relative_prices
from netflation.analysis.theory import predict
from netflation.cli.common import open_writer, resolve_config, stage
from netflation.data.export import distortion_frame, price_path_frames, trajectory_frames
from netflation.data.snapshot import load_economy, save_economy
from netflation.dynamics.monetary import gamma_steady
from netflation.dynamics.monetary import simulate as simulate_money
from netflation.dynamics.pricing import flexible_prices, reset_frequency, sticky_replications, synchronization_index
from netflation.ensemble.runner import EnsembleSpec
from netflation.network.netgen import build_economy, calibrated_params, knn_slope
from netflation.network.spectral import degree_proxies, proxy_vectors, subdominant_pair
from netflation.utils import logger

SNAPSHOT_NAME = "economy.json"


def _degree_summary(degrees: np.ndarray) -> Dict[str, float]:
    d = degrees.astype(float)
    return {
        "degree_mean": float(d.mean()),
        "degree_std": float(d.std()),
        "degree_min": int(d.min()),
        "degree_max": int(d.max()),
    }


@click.command("generate")
@click.help_option(
    "--help",
    "-h"
)
@click.option(
    "--name",
    type=str,
    default=SNAPSHOT_NAME,
    help="Snapshot file name inside the output directory"
)
@click.pass_context
def generate(ctx, name: str):
    """Draw one economy and write its snapshot with a spectral summary."""
    config = resolve_config(ctx)
    writer = open_writer(config)

    with stage("generate"):
        params = calibrated_params(config.network_params())
        economy = build_economy(params)
    with stage("spectral"):
        spectral = subdominant_pair(economy, seed=config.seed)

    slope, intercept = knn_slope(economy)
    summary: Dict[str, Any] = {
        **spectral.to_dict(),
        **proxy_vectors(economy, spectral).to_dict(),
        **_degree_summary(economy.degrees.degrees),
        "knn_slope": slope,
        "knn_intercept": intercept,
        "nu_w": economy.nu_w,
        "repair_rounds": economy.repair_rounds,
        "seed": config.seed,
    }
    with stage("export"):
        writer.adopt(save_economy(economy, writer.path(name), spectral, extra=summary))
        writer.json("generate_summary.json", summary)
        writer.finalize()
    click.echo(f"Economy written to: {writer.path(name)} (lambda2={spectral.lambda2:.6f})")


def _theory_deltas(prediction, record, pi: float) -> Dict[str, float]:
    """Simulated minus predicted statistics at the final horizon and in the steady window."""
    H = int(record.horizons[-1])
    phi_pred = prediction.phi_prediction[H]
    omega_pred = pi * prediction.W_omega
    psi_pred = pi ** 2 * prediction.W_psi
    return {
        "phi_T": float(record.phi[-1]),
        "phi_T_predicted": phi_pred,
        "phi_T_delta": float(record.phi[-1]) - phi_pred,
        "omega_bar": record.time_averages[0],
        "omega_bar_leading_order": omega_pred,
        "omega_bar_delta": record.time_averages[0] - omega_pred,
        "psi_bar": record.time_averages[1],
        "psi_bar_leading_order": psi_pred,
        "psi_bar_delta": record.time_averages[1] - psi_pred,
    }


@click.command("simulate")
@click.help_option(
    "--help",
    "-h"
)
@click.option(
    "--economy",
    "economy_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Economy snapshot written by 'generate'"
)
@click.pass_context
def simulate(ctx, economy_path: str):
    """Run money, prices and distortion statistics on a saved economy."""
    config = resolve_config(ctx)
    writer = open_writer(config)
    regimes = config.stats.regimes

    with stage("load"):
        economy = load_economy(economy_path)
    with stage("spectral"):
        spectral = subdominant_pair(economy, seed=config.seed)

    params = economy.params
    alpha = params.alpha if params is not None else config.network.alpha
    nu = params.nu if params is not None else config.network.nu

    with stage("monetary"):
        settings = EnsembleSpec.from_config(config).monetary
        monetary = settings.build(economy)
        trajectory = simulate_money(economy, monetary)
        steady = gamma_steady(economy, monetary)

    paths = {}
    report: Dict[str, Any] = {
        "seed": config.seed,
        "economy": economy_path,
        "spectral": spectral.to_dict(),
        "proxy_alignment": proxy_vectors(economy, spectral, nu).to_dict(),
        "mass_law_error": trajectory.mass_law_error(),
        "C_ub_moments": steady.C_ub,
        "C_lb_moments": steady.C_lb,
        "regimes": {},
    }
    with stage("pricing"):
        if "flexible" in regimes:
            paths["flexible"] = flexible_prices(economy, trajectory)
        if "sticky" in regimes:
            sticky = sticky_replications(
                economy,
                trajectory,
                config.hazard_spec(),
                config.seed,
                config.hazard.replications,
                max_workers=config.jobs,
            )
            paths["sticky"] = sticky[0]
            report["sticky_replications"] = [
                {"reset_frequency": reset_frequency(p), "synchronization_index": synchronization_index(p)}
                for p in sticky
            ]
    if not paths:
        raise click.ClickException("stats.regimes must name at least one of: flexible, sticky")

    records = {}
    with stage("stats"):
        numeraire: Optional[int] = None
        for regime, path in paths.items():
            records[regime] = distortion_record(
                path, economy, zeta=config.stats.zeta, nu=nu, numeraire=numeraire, window=config.window()
            )
            numeraire = records[regime].numeraire

    with stage("theory"):
        rstar = equilibrium_relative_prices(economy, numeraire)
        delta, _ = degree_proxies(economy.degrees.degrees, nu)
        mu = degree_weights(economy, 1.0)
        prediction = predict(
            EmpiricalMoments(economy.degrees.degrees),
            alpha=alpha,
            nu=nu,
            theta=config.monetary.theta,
            lambda2=spectral.lambda2,
            pi=config.monetary.pi,
            horizon=trajectory.horizon,
            C_series=trajectory.injection_kernel_series(),
            m_tilde=trajectory.initial_mass,
            eta=config.stats.eta,
            kappa=config.stats.kappa,
            zeta=config.stats.zeta,
            mu_i=float(mu[numeraire]),
            rstar_weights=rstar / rstar.sum(),
            z=delta / mu,
        )
        for regime, record in records.items():
            report["regimes"][regime] = {
                **record.header(),
                **_theory_deltas(prediction, record, config.monetary.pi),
            }
            if regime == "sticky":
                report["regimes"][regime]["reset_frequency"] = reset_frequency(paths[regime])

    with stage("export"):
        if config.output.csv:
            firms, series = trajectory_frames(trajectory)
            writer.csv("trajectory.csv", firms)
            writer.csv("money_series.csv", series)
            for regime, path in paths.items():
                prices, events = price_path_frames(path)
                writer.csv(f"prices_{regime}.csv", prices)
                writer.csv(f"resets_{regime}.csv", events)
                writer.csv(f"distortion_{regime}.csv", distortion_frame(records[regime]))
        writer.json("theory.json", prediction.to_dict())
        writer.json("run_report.json", report)
        writer.finalize()

    for regime, entry in report["regimes"].items():
        logger.info(
            f"{regime}: phi_T={entry['phi_T']:.6f} (log(1+pi)={math.log1p(config.monetary.pi):.6f}), "
            f"omega_bar={entry['omega_bar']:.6f}, psi_bar={entry['psi_bar']:.3e}"
        )
    click.echo(f"Simulation written to: {writer.out_dir}")

