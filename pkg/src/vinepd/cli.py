"""Command-line interface for the default-probability pipeline."""
from __future__ import annotations

import dataclasses
import os
import sys

import click
import numpy as np

from .credit import ROLES
from .dvine import DVineSpec, empirical_tau_matrix, fit_dvine, select_order
from .mixture import gibbs_fit_mixture, pit_transform
from .panel import Frequency, ingest_panel, emit_panel
from .pipeline import (ROLE_OF_COLUMN, RunConfig, emit_report, run_pipeline,
                       _atomic_write)
from .panel import SERIES


def _common(func):
    func = click.option("--seed", default=0, show_default=True,
                        help="Root random seed.")(func)
    func = click.option("--out", default=".", show_default=True,
                        help="Output directory.")(func)
    return func


@click.group()
def main():
    """Estimate firm default probability from a balance-sheet panel."""


@main.command()
@click.argument("panel_csv", type=click.Path(exists=True))
@click.option("--frequency", default="monthly", show_default=True,
              type=click.Choice(["monthly", "semiannual"]))
@click.option("--interpolate", is_flag=True,
              help="Interpolate semiannual statements instead of repeating.")
@click.option("--out", default="-", show_default=True,
              help="Output CSV path, or - for stdout.")
def ingest(panel_csv, frequency, interpolate, out):
    """Validate a panel CSV and emit it as monthly observations."""
    panel = ingest_panel(panel_csv, frequency, interpolate=interpolate)
    text = emit_panel(panel)
    if out == "-":
        click.echo(text, nl=False)
    else:
        _atomic_write(out, text)
        click.echo(f"wrote {len(panel)} monthly rows to {out}")


def _load_monthly(panel_csv, frequency):
    return ingest_panel(panel_csv, frequency)


@main.command("fit-marginals")
@click.argument("panel_csv", type=click.Path(exists=True))
@click.option("--frequency", default="monthly", show_default=True,
              type=click.Choice(["monthly", "semiannual"]))
@click.option("--iters", default=4000, show_default=True)
@click.option("--burnin", default=1000, show_default=True)
@_common
def fit_marginals(panel_csv, frequency, iters, burnin, seed, out):
    """Gibbs-sample the four mixture marginals and write posterior CSVs."""
    panel = _load_monthly(panel_csv, frequency)
    data = panel.matrix()
    os.makedirs(out, exist_ok=True)
    seeds = np.random.SeedSequence(seed).spawn(len(SERIES))
    for j, col in enumerate(SERIES):
        role = ROLE_OF_COLUMN[col]
        post = gibbs_fit_mixture(data[:, j], iterations=iters,
                                 burnin=burnin, seed=seeds[j])
        path = os.path.join(out, f"posterior_{role}.csv")
        _atomic_write(path, post.to_csv())
        p = post.posterior_mean
        click.echo(f"{role}: eta1={p.eta1:.4f} mu1={p.mu1:.4f} "
                   f"mu2={p.mu2:.4f} sigma2={p.sigma2:.4f} -> {path}")


@main.command("fit-vine")
@click.argument("panel_csv", type=click.Path(exists=True))
@click.option("--frequency", default="monthly", show_default=True,
              type=click.Choice(["monthly", "semiannual"]))
@click.option("--iters", default=4000, show_default=True)
@click.option("--burnin", default=1000, show_default=True)
@click.option("--level", default=0.05, show_default=True,
              help="Independence-test level for edge pruning.")
@_common
def fit_vine(panel_csv, frequency, iters, burnin, level, seed, out):
    """Fit marginals, transform to uniforms and estimate the D-vine."""
    panel = _load_monthly(panel_csv, frequency)
    data = panel.matrix()
    os.makedirs(out, exist_ok=True)
    seeds = np.random.SeedSequence(seed).spawn(len(SERIES))
    u_cols = []
    for j, col in enumerate(SERIES):
        post = gibbs_fit_mixture(data[:, j], iterations=iters,
                                 burnin=burnin, seed=seeds[j])
        u_cols.append(pit_transform(data[:, j], post.posterior_mean))
    u = np.column_stack(u_cols)
    order = select_order(empirical_tau_matrix(u))
    spec = fit_dvine(u, order, level=level)
    path = os.path.join(out, "vine.spec")
    _atomic_write(path, spec.to_text())
    click.echo(spec.to_text(), nl=False)
    click.echo(f"wrote {path}")


@main.command()
@click.argument("panel_csv", type=click.Path(exists=True))
@click.option("--frequency", default="monthly", show_default=True,
              type=click.Choice(["monthly", "semiannual"]))
@click.option("--iters", default=4000, show_default=True)
@click.option("--burnin", default=1000, show_default=True)
@click.option("--sims", default=10000, show_default=True)
@click.option("--level", default=0.05, show_default=True)
@_common
def pd(panel_csv, frequency, iters, burnin, sims, level, seed, out):
    """Run the full model and print the default probability."""
    config = RunConfig(seed=seed, iterations=iters, burnin=burnin,
                       n_sims=sims, indep_level=level, out_dir=out)
    result = run_pipeline(_load_monthly(panel_csv, frequency), config)
    r = result.report
    click.echo(f"pd={r.pd:.6f} mc_std_error={r.mc_std_error:.6f} "
               f"n_sims={r.n_sims} seed={r.seed}")


@main.command()
@click.argument("panel_csv", type=click.Path(exists=True))
@click.option("--frequency", default="monthly", show_default=True,
              type=click.Choice(["monthly", "semiannual"]))
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="key=value config file overriding defaults.")
@click.option("--iters", default=4000, show_default=True)
@click.option("--burnin", default=1000, show_default=True)
@click.option("--sims", default=10000, show_default=True)
@click.option("--level", default=0.05, show_default=True)
@_common
def run(panel_csv, frequency, config_path, iters, burnin, sims, level,
        seed, out):
    """Full pipeline: marginals, vine, Monte Carlo PD, all artifacts."""
    if config_path is not None:
        config = RunConfig.from_file(config_path)
        config = dataclasses.replace(config, out_dir=out)
    else:
        config = RunConfig(seed=seed, iterations=iters, burnin=burnin,
                           n_sims=sims, indep_level=level, out_dir=out)
    result = run_pipeline(_load_monthly(panel_csv, frequency), config)
    click.echo(f"pd={result.report.pd:.6f} artifacts in {result.out_dir}")


@main.command()
@click.option("--out", default=".", show_default=True,
              help="Run directory holding the artifacts.")
def report(out):
    """Print a human-readable summary of a completed run directory."""
    click.echo(emit_report(out), nl=False)


if __name__ == "__main__":
    main()
