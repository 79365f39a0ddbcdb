"""Bayesian two-component location-shift Normal mixture marginals.

Each marginal is modelled as eta1 * N(mu1, sigma2) + eta2 * N(mu2, sigma2)
with shared variance.  Parameters are estimated with a data-augmentation
Gibbs sampler; component labels are identified by ascending means.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm
from sklearn.base import BaseEstimator, TransformerMixin

from .copulas import EPS

POSTERIOR_CSV_HEADER = "iter,eta1,mu1,mu2,sigma2"


@dataclass(frozen=True)
class MixtureParams:
    """Two-component location-shift Normal mixture; eta2 = 1 - eta1."""

    eta1: float
    mu1: float
    mu2: float
    sigma2: float

    def __post_init__(self):
        if not 0.0 < self.eta1 < 1.0:
            raise ValueError(f"eta1={self.eta1} must lie in (0, 1)")
        if not self.mu1 < self.mu2:
            raise ValueError(f"means must ascend: mu1={self.mu1}, mu2={self.mu2}")
        if not self.sigma2 > 0.0:
            raise ValueError(f"sigma2={self.sigma2} must be positive")

    @property
    def eta2(self) -> float:
        return 1.0 - self.eta1

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


@dataclass(frozen=True)
class MixturePriors:
    """Conjugate priors: Dirichlet weights, Normal means, inverse-gamma
    variance (shape nu/2, scale nu*S/2)."""

    alpha1: float = 1.0
    alpha2: float = 1.0
    b1: float = 0.0
    b2: float = 0.0
    B1: float = 1e4
    B2: float = 1e4
    nu: float = 2.0
    S: float = 1.0

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "B1", "B2", "nu", "S"):
            if not getattr(self, name) > 0:
                raise ValueError(f"prior {name} must be positive")

    @classmethod
    def vague_for(cls, data) -> "MixturePriors":
        """Weakly informative, scale-adaptive defaults for a data vector."""
        x = np.asarray(data, dtype=float)
        m, var = float(np.mean(x)), float(np.var(x))
        var = max(var, 1e-12)
        return cls(alpha1=1.0, alpha2=1.0, b1=m, b2=m,
                   B1=10.0 * var, B2=10.0 * var, nu=2.0, S=var)


@dataclass
class MixturePosterior:
    draws: np.ndarray  # (n_draws, 4): eta1, mu1, mu2, sigma2
    allocations_summary: np.ndarray  # (n, 2) posterior membership probs
    posterior_mean: MixtureParams
    credible_intervals: dict[str, tuple[float, float]]
    degenerate_warning: bool = False

    PARAM_NAMES = ("eta1", "mu1", "mu2", "sigma2")

    def to_csv(self, path=None) -> str | None:
        """Draws as CSV (iter, eta1, mu1, mu2, sigma2); returns the text
        when no path is given."""
        buf = io.StringIO()
        buf.write(POSTERIOR_CSV_HEADER + "\n")
        for i, row in enumerate(self.draws):
            buf.write(f"{i}," + ",".join(repr(float(v)) for v in row) + "\n")
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None


def gibbs_fit_mixture(data, priors: MixturePriors | None = None,
                      iterations: int = 4000, burnin: int = 1000,
                      seed: int = 0) -> MixturePosterior:
    """Data-augmentation Gibbs sampler for the location-shift mixture.

    Each sweep draws component labels, then weights from their Dirichlet
    full conditional, component means from their Normal full conditionals
    and the shared variance from its inverse-gamma full conditional.
    Draws with mu1 > mu2 are relabelled by swapping components, which
    enforces the ascending-mean identification without rejecting moves.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 1 or x.size < 20:
        raise ValueError("need a 1-D data vector with at least 20 points")
    if not np.all(np.isfinite(x)):
        raise ValueError("data contains non-finite values")
    if not 0 <= burnin < iterations:
        raise ValueError("burnin must satisfy 0 <= burnin < iterations")
    if priors is None:
        priors = MixturePriors.vague_for(x)
    n = x.size
    rng = np.random.default_rng(seed)

    # moment-based initialization: split at the median
    med = np.median(x)
    z = (x > med).astype(int)
    eta = np.array([0.5, 0.5])
    mu = np.array([np.mean(x[z == 0]), np.mean(x[z == 1])])
    if not np.isfinite(mu).all() or mu[0] == mu[1]:
        mu = np.array([med - 1.0, med + 1.0])
    sigma2 = max(float(np.var(x)), 1e-12)

    alpha = np.array([priors.alpha1, priors.alpha2])
    b = np.array([priors.b1, priors.b2])
    B = np.array([priors.B1, priors.B2])

    n_draws = iterations - burnin
    draws = np.empty((n_draws, 4))
    alloc = np.zeros((n, 2))
    empty_count = 0

    for it in range(iterations):
        # latent allocations
        logw = (np.log(eta)[None, :]
                - 0.5 * (x[:, None] - mu[None, :]) ** 2 / sigma2)
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        p2 = w[:, 1] / (w[:, 0] + w[:, 1])
        z = (rng.uniform(size=n) < p2).astype(int)
        n2 = int(z.sum())
        n1 = n - n2
        if n1 == 0 or n2 == 0:
            empty_count += 1

        # weights
        eta = rng.dirichlet(alpha + np.array([n1, n2]))
        eta = np.clip(eta, 1e-12, 1.0 - 1e-12)

        # component means at the current shared variance
        for p in (0, 1):
            xp = x[z == p]
            prec = 1.0 / B[p] + xp.size / sigma2
            mean = (b[p] / B[p] + xp.sum() / sigma2) / prec
            mu[p] = rng.normal(mean, math.sqrt(1.0 / prec))

        # shared variance from pooled residuals
        resid2 = float(np.sum((x - mu[z]) ** 2))
        shape = 0.5 * (priors.nu + n)
        scale = 0.5 * (priors.nu * priors.S + resid2)
        sigma2 = scale / rng.gamma(shape)

        # ascending-mean relabelling
        if mu[0] > mu[1]:
            mu = mu[::-1].copy()
            eta = eta[::-1].copy()
            z = 1 - z
            p2 = 1.0 - p2

        if it >= burnin:
            draws[it - burnin] = (eta[0], mu[0], mu[1], sigma2)
            alloc[:, 1] += p2
            alloc[:, 0] += 1.0 - p2

    alloc /= n_draws
    mean = draws.mean(axis=0)
    mu1, mu2 = float(mean[1]), float(mean[2])
    if mu1 >= mu2:  # collapsed components
        mu2 = mu1 + 1e-9
    posterior_mean = MixtureParams(eta1=float(np.clip(mean[0], 1e-9, 1 - 1e-9)),
                                   mu1=mu1, mu2=mu2, sigma2=float(mean[3]))
    ci = {
        name: (float(np.quantile(draws[:, j], 0.025)),
               float(np.quantile(draws[:, j], 0.975)))
        for j, name in enumerate(MixturePosterior.PARAM_NAMES)
    }
    return MixturePosterior(
        draws=draws, allocations_summary=alloc, posterior_mean=posterior_mean,
        credible_intervals=ci,
        degenerate_warning=empty_count > 0.5 * iterations)


def mixture_cdf(p: MixtureParams, x):
    """eta1 * Phi((x - mu1)/sigma) + eta2 * Phi((x - mu2)/sigma)."""
    x = np.asarray(x, dtype=float)
    s = p.sigma
    return (p.eta1 * norm.cdf((x - p.mu1) / s)
            + p.eta2 * norm.cdf((x - p.mu2) / s))


def mixture_pdf(p: MixtureParams, x):
    x = np.asarray(x, dtype=float)
    s = p.sigma
    return (p.eta1 * norm.pdf(x, p.mu1, s) + p.eta2 * norm.pdf(x, p.mu2, s))


def mixture_quantile(p: MixtureParams, q):
    """Inverse of mixture_cdf by bracketed root finding."""
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any(q_arr <= 0.0) or np.any(q_arr >= 1.0):
        raise ValueError("quantile levels must lie in (0, 1)")
    s = p.sigma
    # mixture CDF is bounded by the component CDFs, so the component
    # quantiles bracket the root
    lo = p.mu1 + s * norm.ppf(q_arr) - 1e-9
    hi = p.mu2 + s * norm.ppf(q_arr) + 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = mixture_cdf(p, mid) < q_arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo) < 1e-12:
            break
    out = 0.5 * (lo + hi)
    return out[0] if np.isscalar(q) or np.ndim(q) == 0 else out


def pit_transform(data, p: MixtureParams):
    """Probability integral transform through the fitted mixture CDF."""
    u = mixture_cdf(p, np.asarray(data, dtype=float))
    return np.clip(u, EPS, 1.0 - EPS)


class NormalMixtureMarginals(BaseEstimator, TransformerMixin):
    """Column-wise mixture marginals with a scikit-learn transformer surface.

    ``fit`` runs the Gibbs sampler on every column, ``transform`` maps data
    to uniforms through the posterior-mean CDFs and ``inverse_transform``
    maps uniforms back to data units.
    """

    def __init__(self, iterations=4000, burnin=1000, seed=0, priors=None):
        self.iterations = iterations
        self.burnin = burnin
        self.seed = seed
        self.priors = priors

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        seeds = np.random.SeedSequence(self.seed).spawn(X.shape[1])
        self.posteriors_ = [
            gibbs_fit_mixture(X[:, j], priors=self.priors,
                              iterations=self.iterations, burnin=self.burnin,
                              seed=seeds[j])
            for j in range(X.shape[1])
        ]
        self.params_ = [post.posterior_mean for post in self.posteriors_]
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        return np.column_stack([
            pit_transform(X[:, j], p) for j, p in enumerate(self.params_)])

    def inverse_transform(self, U):
        U = np.asarray(U, dtype=float)
        if U.ndim == 1:
            U = U[:, None]
        return np.column_stack([
            mixture_quantile(p, np.clip(U[:, j], EPS, 1 - EPS))
            for j, p in enumerate(self.params_)])
