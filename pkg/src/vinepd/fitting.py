"""Pair-copula estimation: Kendall's tau, independence testing, maximum
likelihood fitting and AIC-based family selection."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.stats import kendalltau, norm

from .copulas import (
    EPS, Family, NumericError, PARAM_BOUNDS, PairCopula, ROTATABLE, Rotation,
    copula_logdensity, kendall_tau_of,
)

# Default candidate menu: every family in the catalog, with all rotations
# for the families that admit them.
DEFAULT_CANDIDATES: tuple[tuple[Family, Rotation], ...] = tuple(
    (fam, rot)
    for fam in Family if fam is not Family.INDEPENDENCE
    for rot in ((Rotation.NONE, Rotation.ROT90, Rotation.SURVIVAL,
                 Rotation.ROT270) if fam in ROTATABLE else (Rotation.NONE,))
)


@dataclass(frozen=True)
class FitResult:
    copula: PairCopula
    loglik: float
    n_params: int
    aic: float
    at_boundary: bool = False


@dataclass(frozen=True)
class IndepTestResult:
    tau_hat: float
    statistic: float
    p_value: float
    reject: bool


def empirical_kendall_tau(pairs) -> float:
    """Sample Kendall's tau (tau-b, so ties are corrected for)."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("pairs must be an (n, 2) array with n >= 2")
    tau, _ = kendalltau(arr[:, 0], arr[:, 1])
    return float(tau)


def independence_test(pairs, level: float = 0.05) -> IndepTestResult:
    """Asymptotic rank-based test of pairwise independence.

    The statistic rescales |tau_hat| by its null standard deviation
    sqrt(2(2n+5) / (9n(n-1))) and refers it to a standard Normal.
    """
    arr = np.asarray(pairs, dtype=float)
    n = arr.shape[0]
    if n < 10:
        raise ValueError("need at least 10 pairs for the asymptotic test")
    tau = empirical_kendall_tau(arr)
    stat = math.sqrt(9.0 * n * (n - 1) / (2.0 * (2 * n + 5))) * abs(tau)
    p = 2.0 * (1.0 - norm.cdf(stat))
    return IndepTestResult(tau_hat=tau, statistic=stat, p_value=p,
                           reject=p < level)


def _invert_tau(family: Family, rotation: Rotation, tau: float,
                theta2: float | None) -> float:
    """First-parameter starting value from the family's tau map."""
    bounds = PARAM_BOUNDS[family]
    lo, hi = bounds[0]
    if rotation in (Rotation.ROT90, Rotation.ROT270):
        tau = -tau
    if family in (Family.NORMAL, Family.STUDENT_T):
        return min(max(math.sin(math.pi * tau / 2.0), lo), hi)
    if family is Family.CLAYTON:
        if tau <= 0:
            return lo
        return min(2.0 * tau / (1.0 - tau), hi)
    if family is Family.GUMBEL:
        if tau <= 0:
            return lo
        return min(1.0 / (1.0 - tau), hi)
    if family is Family.BB1:
        de = theta2 if theta2 is not None else 1.1
        th = 2.0 / (de * max(1.0 - tau, 1e-6)) - 2.0
        return min(max(th, lo), hi)

    def tau_at(par1):
        pars = (par1,) if theta2 is None else (par1, theta2)
        return kendall_tau_of(PairCopula(family, Rotation.NONE, *pars))

    a, b = lo + 1e-6, hi - 1e-6
    try:
        ta, tb = tau_at(a), tau_at(b)
        if (ta - tau) * (tb - tau) > 0:
            return a if abs(ta - tau) < abs(tb - tau) else b
        return optimize.brentq(lambda x: tau_at(x) - tau, a, b, xtol=1e-4)
    except (ValueError, NumericError):
        return 0.5 * (lo + hi)


def starting_values(family: Family, rotation: Rotation, tau: float):
    """Tau-inversion start for the first parameter; second parameter starts
    just above its lower box edge."""
    bounds = PARAM_BOUNDS[family]
    theta2 = None
    if len(bounds) == 2:
        lo2, hi2 = bounds[1]
        theta2 = min(lo2 + 0.1, hi2)
    theta1 = _invert_tau(family, rotation, tau, theta2)
    return (theta1,) if theta2 is None else (theta1, theta2)


def fit_mle(family: Family, rotation: Rotation, pseudo_obs,
            start=None) -> FitResult:
    """Fit one family/rotation by maximum likelihood on pseudo-observations."""
    uv = np.asarray(pseudo_obs, dtype=float)
    if uv.ndim != 2 or uv.shape[1] != 2:
        raise ValueError("pseudo_obs must be an (n, 2) array")
    if np.any(uv <= 0) or np.any(uv >= 1):
        raise ValueError("pseudo-observations must lie strictly inside (0, 1)")
    n = uv.shape[0]
    if n < 30:
        warnings.warn(f"only {n} observations; copula MLE may be unstable")
    u, v = uv[:, 0], uv[:, 1]

    family, rotation = Family(family), Rotation(rotation)
    if family is Family.INDEPENDENCE:
        cop = PairCopula(Family.INDEPENDENCE)
        return FitResult(copula=cop, loglik=0.0, n_params=0, aic=0.0)

    bounds = list(PARAM_BOUNDS[family])
    if start is None:
        start = starting_values(family, rotation, empirical_kendall_tau(uv))
    x0 = np.array([min(max(s, lo + 1e-6), hi - 1e-6)
                   for s, (lo, hi) in zip(start, bounds)])

    def nll(x):
        try:
            cop = PairCopula(family, rotation, *x)
        except ValueError:
            return 1e12
        val = -float(np.sum(copula_logdensity(cop, u, v)))
        return val if np.isfinite(val) else 1e12

    opt_bounds = [(lo + 1e-6, hi - 1e-6) for lo, hi in bounds]
    res = optimize.minimize(nll, x0, method="L-BFGS-B", bounds=opt_bounds,
                            options={"maxiter": 500, "ftol": 1e-10})
    if not np.all(np.isfinite(res.x)) or not np.isfinite(res.fun):
        raise NumericError(
            f"MLE failed for {family.value}@{rotation.value}: {res.message} "
            f"(best iterate {res.x})")
    pars = res.x
    at_boundary = any(
        p <= lo + 1e-5 or p >= hi - 1e-5
        for p, (lo, hi) in zip(pars, opt_bounds))
    cop = PairCopula(family, rotation, *pars)
    loglik = -float(res.fun)
    k = cop.n_params
    return FitResult(copula=cop, loglik=loglik, n_params=k,
                     aic=2.0 * k - 2.0 * loglik, at_boundary=at_boundary)


def select_pair_copula(pseudo_obs, candidates=None,
                       level: float = 0.05) -> FitResult:
    """Pick a pair copula: independence gate first, then minimum AIC.

    Ties break toward fewer parameters, then catalog order of the
    candidate menu.
    """
    if candidates is None:
        candidates = DEFAULT_CANDIDATES
    candidates = list(candidates)
    if not candidates:
        raise ValueError("candidate menu must be nonempty")
    uv = np.asarray(pseudo_obs, dtype=float)

    test = independence_test(uv, level=level)
    if not test.reject:
        return FitResult(copula=PairCopula(Family.INDEPENDENCE),
                         loglik=0.0, n_params=0, aic=0.0)

    results, failures = [], []
    for idx, (family, rotation) in enumerate(candidates):
        try:
            fit = fit_mle(family, rotation, uv)
        except (ValueError, NumericError) as exc:
            failures.append(f"{Family(family).value}@{rotation}: {exc}")
            continue
        results.append((fit.aic, fit.n_params, idx, fit))
    if not results:
        raise NumericError(
            "every candidate fit failed: " + "; ".join(failures))
    results.sort(key=lambda r: (r[0], r[1], r[2]))
    return results[0][3]
