"""Firm default probability from balance-sheet panels via Bayesian
Normal-mixture marginals and D-vine pair-copula constructions, with
Merton and Altman Z-score baselines."""

__version__ = "0.1.0"

from .copulas import (
    Family, NumericError, PairCopula, Rotation,
    copula_cdf, copula_density, copula_logdensity,
    h_function, h_inverse, h2_function, h2_inverse,
    kendall_tau_of, sample_pair, transpose,
)
from .fitting import (
    FitResult, IndepTestResult, empirical_kendall_tau, fit_mle,
    independence_test, select_pair_copula,
)
from .mixture import (
    MixtureParams, MixturePosterior, MixturePriors, NormalMixtureMarginals,
    gibbs_fit_mixture, mixture_cdf, mixture_pdf, mixture_quantile,
    pit_transform,
)
from .gof import KSRecord, KSReport, KsModel, bootstrap_ks, ks_screen
from .dvine import (
    DVineCopula, DVineSpec, VineEdge, dvine_density, dvine_logdensity,
    empirical_tau_matrix, fit_dvine, select_order, simulate_dvine,
)
from .credit import (
    FirmModel, MertonInputs, PDReport, Zone, altman_z, equity_payoff,
    estimate_pd, merton_equity, merton_pd, merton_solve, simulate_equity,
)
from .panel import BalancePanel, Frequency, PanelFormatError, ingest_panel
from .pipeline import PipelineError, RunConfig, RunResult, emit_report, run_pipeline

__all__ = [
    "Family", "Rotation", "PairCopula", "NumericError",
    "copula_cdf", "copula_density", "copula_logdensity",
    "h_function", "h_inverse", "h2_function", "h2_inverse",
    "kendall_tau_of", "sample_pair", "transpose",
    "FitResult", "IndepTestResult", "empirical_kendall_tau", "fit_mle",
    "independence_test", "select_pair_copula",
    "MixtureParams", "MixturePosterior", "MixturePriors",
    "NormalMixtureMarginals", "gibbs_fit_mixture", "mixture_cdf",
    "mixture_pdf", "mixture_quantile", "pit_transform",
    "KsModel", "KSRecord", "KSReport", "bootstrap_ks", "ks_screen",
    "DVineCopula", "DVineSpec", "VineEdge", "dvine_density",
    "dvine_logdensity", "empirical_tau_matrix", "fit_dvine", "select_order",
    "simulate_dvine",
    "FirmModel", "MertonInputs", "PDReport", "Zone", "altman_z",
    "equity_payoff", "estimate_pd", "merton_equity", "merton_pd",
    "merton_solve", "simulate_equity",
    "BalancePanel", "Frequency", "PanelFormatError", "ingest_panel",
    "PipelineError", "RunConfig", "RunResult", "emit_report", "run_pipeline",
    "__version__",
]
