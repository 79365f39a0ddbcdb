"""Pipeline orchestration: marginals first, dependence second, then the
Monte Carlo default probability, with all artifacts written to disk.

Stages run in the two-step order used throughout: the four mixture
marginals are estimated first, the fitted CDFs turn the panel into
uniforms, and only then is the vine estimated on those uniforms.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .credit import FirmModel, PDReport, ROLES, equity_samples_csv, estimate_pd
from .dvine import DVineSpec, empirical_tau_matrix, fit_dvine, select_order
from .mixture import (MixturePosterior, gibbs_fit_mixture, pit_transform)
from .panel import BalancePanel, SERIES

# panel columns a_c, a_l, b_c, b_l correspond to these marginal roles
ROLE_OF_COLUMN = dict(zip(SERIES, ROLES))

ARTIFACTS = tuple(f"posterior_{role}.csv" for role in ROLES) + (
    "vine.spec", "pd_report.txt", "equity_samples.csv", "manifest.txt")


class PipelineError(RuntimeError):
    """Stage failure; the message names the stage that halted the run."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    iterations: int = 4000
    burnin: int = 1000
    n_sims: int = 10000
    indep_level: float = 0.05
    discount_rate: float = 0.0
    horizon: float = 1.0
    candidates: tuple | None = None
    out_dir: str = "."

    def __post_init__(self):
        if not 0 <= self.burnin < self.iterations:
            raise ValueError("burnin must satisfy 0 <= burnin < iterations")
        if self.n_sims < 1000:
            raise ValueError("n_sims must be at least 1000")
        if not 0.0 < self.indep_level < 1.0:
            raise ValueError("indep_level must lie in (0, 1)")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")

    @property
    def discount_factor(self) -> float:
        return float(np.exp(-self.discount_rate * self.horizon))

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Flat key=value overrides of the defaults."""
        kwargs = {}
        casts = {"seed": int, "iterations": int, "burnin": int, "n_sims": int,
                 "indep_level": float, "discount_rate": float,
                 "horizon": float, "out_dir": str}
        with open(path) as fh:
            for ln, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"config line {ln}: expected key=value")
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key not in casts:
                    raise ValueError(f"config line {ln}: unknown key {key!r}")
                kwargs[key] = casts[key](value)
        return cls(**kwargs)

    def to_text(self) -> str:
        pairs = [("seed", self.seed), ("iterations", self.iterations),
                 ("burnin", self.burnin), ("n_sims", self.n_sims),
                 ("indep_level", self.indep_level),
                 ("discount_rate", self.discount_rate),
                 ("horizon", self.horizon)]
        return "\n".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in pairs) + "\n"


def _atomic_write(path: str, text: str) -> None:
    """Write-then-rename so readers never observe a partial artifact."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunResult:
    posteriors: dict[str, MixturePosterior]
    model: FirmModel
    report: PDReport
    out_dir: str


def run_pipeline(panel: BalancePanel, config: RunConfig) -> RunResult:
    """Fit marginals, transform, fit the vine, simulate and write artifacts.

    Deterministic given the config: marginal samplers get per-role child
    seeds derived from ``config.seed``, and the simulation reuses the root
    seed directly.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    data = panel.matrix()

    seeds = np.random.SeedSequence(config.seed).spawn(len(SERIES))
    posteriors, params = {}, {}
    for j, col in enumerate(SERIES):
        role = ROLE_OF_COLUMN[col]
        try:
            post = gibbs_fit_mixture(
                data[:, j], iterations=config.iterations,
                burnin=config.burnin, seed=seeds[j])
        except Exception as exc:
            raise PipelineError("fit-marginals",
                                f"marginal {role}: {exc}") from exc
        posteriors[role] = post
        params[role] = post.posterior_mean

    try:
        u = np.column_stack([
            pit_transform(data[:, j], params[ROLE_OF_COLUMN[col]])
            for j, col in enumerate(SERIES)])
    except Exception as exc:
        raise PipelineError("pit", str(exc)) from exc

    try:
        tau = empirical_tau_matrix(u)
        order = select_order(tau)
        spec = fit_dvine(u, order, candidates=config.candidates,
                         level=config.indep_level)
    except Exception as exc:
        raise PipelineError("fit-vine", str(exc)) from exc

    variable_key = {j: ROLE_OF_COLUMN[col] for j, col in enumerate(SERIES)}
    model = FirmModel(marginals=params, vine=spec, variable_key=variable_key)
    try:
        report, equity = estimate_pd(
            model, n_sims=config.n_sims, discount=config.discount_factor,
            seed=config.seed, return_samples=True)
    except Exception as exc:
        raise PipelineError("pd", str(exc)) from exc

    out = config.out_dir
    for role in ROLES:
        _atomic_write(os.path.join(out, f"posterior_{role}.csv"),
                      posteriors[role].to_csv())
    _atomic_write(os.path.join(out, "vine.spec"), spec.to_text())
    _atomic_write(os.path.join(out, "pd_report.txt"), report.to_text())
    _atomic_write(os.path.join(out, "equity_samples.csv"),
                  equity_samples_csv(equity))
    _atomic_write(os.path.join(out, "manifest.txt"),
                  _manifest_text(panel, config))
    return RunResult(posteriors=posteriors, model=model, report=report,
                     out_dir=out)


def _manifest_text(panel: BalancePanel, config: RunConfig) -> str:
    lines = ["run manifest",
             f"library_version={__version__}",
             f"firm_id={panel.firm_id}",
             f"n_observations={len(panel)}",
             config.to_text().rstrip(),
             "artifacts=" + ",".join(ARTIFACTS)]
    return "\n".join(lines) + "\n"


def emit_report(out_dir: str) -> str:
    """Assemble one human-readable summary from a completed run directory."""
    missing = [name for name in ARTIFACTS
               if not os.path.exists(os.path.join(out_dir, name))]
    if missing:
        raise PipelineError("report",
                            f"missing artifacts: {', '.join(missing)}")
    sections = []
    for role in ROLES:
        path = os.path.join(out_dir, f"posterior_{role}.csv")
        draws = np.loadtxt(path, delimiter=",", skiprows=1)[:, 1:]
        names = ("eta1", "mu1", "mu2", "sigma2")
        lines = [f"marginal {role}"]
        for k, name in enumerate(names):
            lo, hi = np.quantile(draws[:, k], [0.025, 0.975])
            lines.append(f"  {name:<7s} mean {np.mean(draws[:, k]):+.6f}"
                         f"   95% CI [{lo:+.6f}, {hi:+.6f}]")
        sections.append("\n".join(lines))
    with open(os.path.join(out_dir, "vine.spec")) as fh:
        sections.append("vine structure\n" + fh.read().rstrip())
    with open(os.path.join(out_dir, "pd_report.txt")) as fh:
        sections.append(fh.read().rstrip())
    return "\n\n".join(sections) + "\n"
