"""Default probability estimation: Monte Carlo equity simulation from the
fitted mixture/vine model, the Merton structural baseline and the Altman
Z-score classifier.

The Merton equations are used exactly as stated in the structural-model
literature this mirrors: the drift entering d1 is the physical asset drift
while the strike is discounted at the risk-free rate, so the two measures
are mixed on purpose rather than repaired.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize
from scipy.stats import norm

from .dvine import DVineSpec, simulate_dvine
from .mixture import MixtureParams, mixture_quantile

ROLES = ("A_C", "A_L", "B_C", "B_L")

EQUITY_CSV_HEADER = "sim,equity"


class Zone(str, Enum):
    SAFE = "Safe"
    GREY = "Grey"
    DISTRESS = "Distress"


@dataclass(frozen=True)
class FirmModel:
    """Fitted marginals plus dependence structure for one firm.

    ``variable_key`` maps each original vine variable index (a column of
    the simulated uniforms) to one of the four balance-sheet roles.
    """

    marginals: dict[str, MixtureParams]
    vine: DVineSpec
    variable_key: dict[int, str] = field(
        default_factory=lambda: dict(enumerate(ROLES)))

    def __post_init__(self):
        if set(self.marginals) != set(ROLES):
            raise ValueError(f"marginals must be keyed by {ROLES}")
        if self.vine.dim != 4:
            raise ValueError("vine must be 4-dimensional")
        if sorted(self.variable_key) != [0, 1, 2, 3] \
                or sorted(self.variable_key.values()) != sorted(ROLES):
            raise ValueError(
                "variable_key must biject vine variables 0..3 onto the roles")


@dataclass(frozen=True)
class PDReport:
    """Monte Carlo summary of the simulated discounted equity."""

    pd: float
    mc_std_error: float
    n_sims: int
    discount_factor: float
    equity_quantiles: dict[str, float]
    mean_equity: float
    seed: int

    QUANTILE_LEVELS = (0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99)

    def to_text(self) -> str:
        lines = [
            "default probability report",
            f"pd              {self.pd!r}",
            f"mc_std_error    {self.mc_std_error!r}",
            f"n_sims          {self.n_sims}",
            f"discount_factor {self.discount_factor!r}",
            f"mean_equity     {self.mean_equity!r}",
            f"seed            {self.seed}",
            "equity quantiles:",
        ]
        for name, q in self.equity_quantiles.items():
            lines.append(f"  {name:>4s}  {q!r}")
        return "\n".join(lines) + "\n"


def equity_payoff(a_c, a_l, b_c, b_l):
    """Equity as total assets minus total liabilities.

    Negative accounting values are legitimate inputs, so no sign
    restrictions are imposed.
    """
    return (np.asarray(a_c, dtype=float) + np.asarray(a_l, dtype=float)
            - np.asarray(b_c, dtype=float) - np.asarray(b_l, dtype=float))


def simulate_equity(model: FirmModel, n_sims: int, seed: int) -> np.ndarray:
    """Draw equity values: vine uniforms -> marginal quantiles -> payoff."""
    u = simulate_dvine(model.vine, n_sims, seed)
    cols = {}
    for var, role in model.variable_key.items():
        try:
            cols[role] = mixture_quantile(model.marginals[role], u[:, var])
        except Exception as exc:
            raise type(exc)(f"quantile transform of role {role}: {exc}") from exc
    return equity_payoff(cols["A_C"], cols["A_L"], cols["B_C"], cols["B_L"])


def estimate_pd(model: FirmModel, n_sims: int = 10000, discount: float = 1.0,
                seed: int = 0, return_samples: bool = False):
    """Monte Carlo default probability Pr(discounted equity <= 0).

    The discount factor scales every simulated equity value, so with any
    positive discount the reported pd depends only on the sign pattern of
    the raw payoffs and is invariant to the factor itself.
    """
    if n_sims < 1000:
        raise ValueError(f"n_sims={n_sims} must be at least 1000")
    if not discount > 0:
        raise ValueError(f"discount={discount} must be positive")
    equity = discount * simulate_equity(model, n_sims, seed)
    pd_hat = float(np.mean(equity <= 0.0))
    se = math.sqrt(pd_hat * (1.0 - pd_hat) / n_sims)
    quantiles = {
        f"{int(round(100 * q))}%": float(np.quantile(equity, q))
        for q in PDReport.QUANTILE_LEVELS
    }
    report = PDReport(pd=pd_hat, mc_std_error=se, n_sims=n_sims,
                      discount_factor=float(discount),
                      equity_quantiles=quantiles,
                      mean_equity=float(np.mean(equity)), seed=seed)
    if return_samples:
        return report, equity
    return report


def equity_samples_csv(equity, path=None) -> str | None:
    """Simulated equity values as a two-column CSV for external plotting."""
    buf = io.StringIO()
    buf.write(EQUITY_CSV_HEADER + "\n")
    for i, e in enumerate(np.asarray(equity, dtype=float)):
        buf.write(f"{i},{float(e)!r}\n")
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return None


# -- Merton structural baseline ---------------------------------------------

@dataclass(frozen=True)
class MertonInputs:
    equity_value: float
    equity_vol: float
    face_value: float
    risk_free: float
    drift: float
    maturity: float

    def __post_init__(self):
        for name in ("equity_value", "equity_vol", "face_value", "maturity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def _d1_d2(A, sigma_A, D, mu_A, T):
    st = sigma_A * math.sqrt(T)
    d1 = (math.log(A / D) + (mu_A + 0.5 * sigma_A ** 2) * T) / st
    return d1, d1 - st


def merton_equity(A, sigma_A, D, r, mu_A, T):
    """Equity value and volatility of a firm with lognormal assets.

    E = A N(d1) - e^{-rT} D N(d2) with the asset drift in d1, and
    sigma_E = (A / E) N(d1) sigma_A.
    """
    if not (A > 0 and sigma_A > 0 and D > 0 and T > 0):
        raise ValueError("A, sigma_A, D and T must all be positive")
    d1, d2 = _d1_d2(A, sigma_A, D, mu_A, T)
    E = A * norm.cdf(d1) - math.exp(-r * T) * D * norm.cdf(d2)
    # E can hit 0 (or below, since the drift in d1 is physical) in deep
    # distress; the leverage ratio then degenerates rather than erroring
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        sigma_E = A / E * norm.cdf(d1) * sigma_A
    return float(E), float(sigma_E)


def merton_solve(inputs: MertonInputs) -> tuple[float, float]:
    """Invert the equity equations for the asset value and volatility.

    Solves the 2-D system in (log A, log sigma_A) so the positivity
    constraints hold automatically; starts from A0 = E + e^{-rT} D and
    sigma0 = sigma_E * E / A0.
    """
    E, sE = inputs.equity_value, inputs.equity_vol
    D, r = inputs.face_value, inputs.risk_free
    mu, T = inputs.drift, inputs.maturity
    A0 = E + math.exp(-r * T) * D
    s0 = max(sE * E / A0, 1e-6)

    def residual(x):
        A, sA = math.exp(x[0]), math.exp(x[1])
        try:
            Ehat, sEhat = merton_equity(A, sA, D, r, mu, T)
        except (ValueError, OverflowError):
            return [1e6, 1e6]
        out = [(Ehat - E) / E, (sEhat - sE) / sE]
        return out if all(math.isfinite(v) for v in out) else [1e6, 1e6]

    sol = optimize.root(residual, [math.log(A0), math.log(s0)],
                        method="hybr", tol=1e-12)
    res = residual(sol.x)
    if max(abs(res[0]), abs(res[1])) <= 1e-8:
        return float(math.exp(sol.x[0])), float(math.exp(sol.x[1]))

    # fallback: nested 1-D solve.  For a trial sigma_A the equity equation
    # pins A (equity increases with assets), leaving one residual in the
    # equity volatility to bracket over sigma_A.
    def asset_for(sA):
        def f(logA):
            try:
                Ehat, _ = merton_equity(math.exp(logA), sA, D, r, mu, T)
            except (ValueError, OverflowError):
                return 1e6
            return Ehat - E if math.isfinite(Ehat) else 1e6
        lo, hi = math.log(E * 1e-3 + 1e-300), math.log((E + D) * 1e3)
        if f(lo) > 0 or f(hi) < 0:
            return None
        return math.exp(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16))

    def vol_residual(sA):
        A = asset_for(sA)
        if A is None:
            return None
        return merton_equity(A, sA, D, r, mu, T)[1] - sE

    grid = np.geomspace(1e-4, 10.0, 200)
    vals = [vol_residual(s) for s in grid]
    bracket = None
    for k in range(len(grid) - 1):
        if vals[k] is not None and vals[k + 1] is not None \
                and vals[k] * vals[k + 1] <= 0:
            bracket = (grid[k], grid[k + 1])
            break
    if bracket is not None:
        sA = optimize.brentq(lambda s: vol_residual(s), *bracket,
                             xtol=1e-14, rtol=8.9e-16)
        A = asset_for(sA)
        res = residual([math.log(A), math.log(sA)])
        if max(abs(res[0]), abs(res[1])) <= 1e-8:
            return float(A), float(sA)
    raise RuntimeError(
        f"asset-value inversion did not converge: residuals {res}")


def merton_pd(A, sigma_A, D, mu_A, T) -> float:
    """Physical default probability N(-d2)."""
    if not (A > 0 and sigma_A > 0 and D > 0 and T > 0):
        raise ValueError("A, sigma_A, D and T must all be positive")
    _, d2 = _d1_d2(A, sigma_A, D, mu_A, T)
    return float(norm.cdf(-d2))


# -- Altman Z-score ----------------------------------------------------------

ALTMAN_COEFFICIENTS = (1.2, 1.4, 3.3, 0.6, 1.0)
Z_SAFE = 2.99
Z_DISTRESS = 1.81


def altman_z(x1: float, x2: float, x3: float, x4: float,
             x5: float) -> tuple[float, Zone]:
    """Classic five-ratio discriminant score with zone classification.

    Inputs are working capital / TA, retained earnings / TA, EBIT / TA,
    market equity / total liabilities and sales / TA.  Scores above 2.99
    are Safe, below 1.81 Distress, boundaries inclusive go to Grey.
    """
    z = float(np.dot(ALTMAN_COEFFICIENTS, (x1, x2, x3, x4, x5)))
    if z > Z_SAFE:
        zone = Zone.SAFE
    elif z < Z_DISTRESS:
        zone = Zone.DISTRESS
    else:
        zone = Zone.GREY
    return z, zone
