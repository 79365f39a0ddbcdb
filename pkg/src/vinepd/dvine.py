"""D-vine pair copula constructions: structure selection, sequential
estimation with independence pruning, density evaluation and simulation.

Variables are arranged on a path (the first tree); tree t couples the
pairs (j, j+t) given the variables strictly between them.  Edge (t, j)
therefore stores the copula of positions j and j+t in path order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .copulas import (
    Family, PairCopula, Rotation, copula_logdensity, h_function, h2_function,
    h_inverse, h2_inverse, kendall_tau_of,
)
from .fitting import empirical_kendall_tau, select_pair_copula, FitResult

MAX_DIM = 8


@dataclass(frozen=True)
class VineEdge:
    copula: PairCopula
    # True when the edge was forced to independence by the pruning rule
    # (never tested), as opposed to a tested non-rejection.
    skipped: bool = False


@dataclass(frozen=True)
class DVineSpec:
    """First-tree path order plus one pair copula per edge."""

    order: tuple[int, ...]
    edges: dict[tuple[int, int], VineEdge]

    def __post_init__(self):
        d = len(self.order)
        if not 2 <= d <= MAX_DIM:
            raise ValueError(f"dimension {d} outside [2, {MAX_DIM}]")
        if sorted(self.order) != list(range(d)):
            raise ValueError(f"order {self.order} is not a permutation of 0..{d-1}")
        expected = {(t, j) for t in range(1, d) for j in range(d - t)}
        if set(self.edges) != expected:
            raise ValueError("edge map must hold exactly the d(d-1)/2 vine slots")

    @property
    def dim(self) -> int:
        return len(self.order)

    def edge_label(self, t: int, j: int) -> tuple[tuple[int, int], tuple[int, ...]]:
        """(pair, conditioning set) in original variable indices."""
        pair = (self.order[j], self.order[j + t])
        cond = tuple(self.order[j + 1:j + t])
        return pair, cond

    @classmethod
    def all_independence(cls, order) -> "DVineSpec":
        order = tuple(order)
        d = len(order)
        edges = {(t, j): VineEdge(PairCopula(Family.INDEPENDENCE))
                 for t in range(1, d) for j in range(d - t)}
        return cls(order=order, edges=edges)

    # -- plain-text serialization ------------------------------------------

    def to_text(self) -> str:
        lines = [f"# d-vine dimension {self.dim}",
                 "order " + " ".join(str(i) for i in self.order),
                 "# tree pair cond family rotation par1 par2 tau skipped"]
        for t in range(1, self.dim):
            for j in range(self.dim - t):
                e = self.edges[(t, j)]
                pair, cond = self.edge_label(t, j)
                pars = e.copula.params
                par1 = repr(float(pars[0])) if len(pars) > 0 else "-"
                par2 = repr(float(pars[1])) if len(pars) > 1 else "-"
                tau = float(kendall_tau_of(e.copula))
                lines.append(
                    f"edge {t} {pair[0]},{pair[1]} "
                    f"{','.join(map(str, cond)) if cond else '-'} "
                    f"{e.copula.family.value} {e.copula.rotation.value} "
                    f"{par1} {par2} {tau!r} {int(e.skipped)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DVineSpec":
        order = None
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if toks[0] == "order":
                order = tuple(int(x) for x in toks[1:])
            elif toks[0] == "edge":
                rows.append(toks[1:])
            else:
                raise ValueError(f"unrecognized vine line: {line!r}")
        if order is None:
            raise ValueError("vine text is missing the order line")
        pos = {v: k for k, v in enumerate(order)}
        edges = {}
        for toks in rows:
            t = int(toks[0])
            left = int(toks[1].split(",")[0])
            j = pos[left]
            family = Family(toks[3])
            rotation = Rotation(int(toks[4]))
            pars = [float(x) for x in (toks[5], toks[6]) if x != "-"]
            skipped = bool(int(toks[8]))
            cop = PairCopula(family, rotation, *pars)
            edges[(t, j)] = VineEdge(copula=cop, skipped=skipped)
        return cls(order=order, edges=edges)


def empirical_tau_matrix(u_matrix) -> np.ndarray:
    """Symmetric matrix of pairwise sample Kendall taus with unit diagonal."""
    u = np.asarray(u_matrix, dtype=float)
    d = u.shape[1]
    tau = np.eye(d)
    for i, j in itertools.combinations(range(d), 2):
        tau[i, j] = tau[j, i] = empirical_kendall_tau(u[:, [i, j]])
    return tau


def select_order(tau_matrix) -> tuple[int, ...]:
    """Path over the variables maximizing the total |tau| of adjacent pairs.

    Exhausts all d!/2 direction-collapsed orders (a path equals its
    reverse; the canonical form puts the smaller endpoint first).  Ties
    break toward the lexicographically smallest order.
    """
    tau = np.asarray(tau_matrix, dtype=float)
    d = tau.shape[0]
    if tau.shape != (d, d) or not np.allclose(tau, tau.T):
        raise ValueError("tau matrix must be square and symmetric")
    if not 3 <= d <= MAX_DIM:
        raise ValueError(f"dimension {d} outside [3, {MAX_DIM}]")
    best, best_score = None, -math.inf
    for perm in itertools.permutations(range(d)):
        if perm[0] > perm[-1]:
            continue
        score = sum(abs(tau[perm[i], perm[i + 1]]) for i in range(d - 1))
        if score > best_score + 1e-12:
            best, best_score = perm, score
    return best


def fit_dvine(u_matrix, order, candidates=None, level: float = 0.05,
              on_edge=None) -> DVineSpec:
    """Sequential tree-by-tree estimation of a D-vine.

    Tree 1 fits each adjacent pair along ``order``; pseudo-observations for
    the following trees come from the fitted h-functions.  From tree 3 on,
    an edge fed by an independence edge of the previous tree is pruned
    outright (marked as skipped) instead of being tested.
    """
    u = np.asarray(u_matrix, dtype=float)
    if u.ndim != 2:
        raise ValueError("u_matrix must be 2-D")
    n, d = u.shape
    order = tuple(order)
    if len(order) != d:
        raise ValueError("order length must match the number of columns")
    if n < 30:
        raise ValueError(f"need at least 30 rows, got {n}")
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("all entries must lie strictly inside (0, 1)")

    w = u[:, list(order)]
    a = {(1, j): w[:, j] for j in range(d)}
    b = {(1, j): w[:, j + 1] for j in range(d - 1)}
    edges: dict[tuple[int, int], VineEdge] = {}

    for t in range(1, d):
        for j in range(d - t):
            prune = t >= 3 and (
                edges[(t - 1, j)].copula.family is Family.INDEPENDENCE
                or edges[(t - 1, j + 1)].copula.family is Family.INDEPENDENCE)
            if prune:
                edge = VineEdge(PairCopula(Family.INDEPENDENCE), skipped=True)
            else:
                try:
                    fit = select_pair_copula(
                        np.column_stack([a[(t, j)], b[(t, j)]]),
                        candidates=candidates, level=level)
                except Exception as exc:
                    raise type(exc)(
                        f"tree {t}, edge {j}: {exc}") from exc
                edge = VineEdge(fit.copula)
                if on_edge is not None:
                    on_edge(t, j, fit)
            edges[(t, j)] = edge
        if t < d - 1:
            for j in range(d - t):
                cop = edges[(t, j)].copula
                a[(t + 1, j)] = h_function(cop, a[(t, j)], b[(t, j)])
            for j in range(d - t - 1):
                cop = edges[(t, j + 1)].copula
                b[(t + 1, j)] = h2_function(cop, b[(t, j + 1)], a[(t, j + 1)])
    return DVineSpec(order=order, edges=edges)


def dvine_logdensity(spec: DVineSpec, u_matrix) -> np.ndarray:
    """Log copula density: sum of the edge log densities at the recursively
    computed conditional arguments."""
    u = np.atleast_2d(np.asarray(u_matrix, dtype=float))
    d = spec.dim
    if u.shape[1] != d:
        raise ValueError(f"expected {d} columns, got {u.shape[1]}")
    w = u[:, list(spec.order)]
    a = {(1, j): w[:, j] for j in range(d)}
    b = {(1, j): w[:, j + 1] for j in range(d - 1)}
    logl = np.zeros(u.shape[0])
    for t in range(1, d):
        for j in range(d - t):
            cop = spec.edges[(t, j)].copula
            logl += copula_logdensity(cop, a[(t, j)], b[(t, j)])
        if t < d - 1:
            for j in range(d - t):
                cop = spec.edges[(t, j)].copula
                a[(t + 1, j)] = h_function(cop, a[(t, j)], b[(t, j)])
            for j in range(d - t - 1):
                cop = spec.edges[(t, j + 1)].copula
                b[(t + 1, j)] = h2_function(cop, b[(t, j + 1)], a[(t, j + 1)])
    return logl


def dvine_density(spec: DVineSpec, u):
    """Copula density of the vine at one point or a batch of points."""
    out = np.exp(dvine_logdensity(spec, u))
    return float(out[0]) if np.ndim(u) == 1 else out


def simulate_dvine(spec: DVineSpec, n: int, seed: int) -> np.ndarray:
    """Sample the vine by nested conditional inversion; deterministic given
    the seed.  Columns are returned in original variable order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = spec.dim
    rng = np.random.default_rng(seed)
    eps = rng.uniform(size=(n, d))
    w = np.empty((n, d))
    a: dict[tuple[int, int], np.ndarray] = {}
    b: dict[tuple[int, int], np.ndarray] = {}

    w[:, 0] = eps[:, 0]
    a[(1, 0)] = w[:, 0]
    for k in range(1, d):
        p = eps[:, k]
        for j in range(k):
            t = k - j
            cop = spec.edges[(t, j)].copula
            try:
                p = h2_inverse(cop, p, a[(t, j)])
            except Exception as exc:
                raise type(exc)(
                    f"sampling column {k} through edge ({t}, {j}): {exc}"
                ) from exc
            b[(t, j)] = p
        w[:, k] = p
        a[(1, k)] = w[:, k]
        if k < d - 1:
            for j in range(k):
                t = k - j
                cop = spec.edges[(t, j)].copula
                a[(t + 1, j)] = h_function(cop, a[(t, j)], b[(t, j)])

    out = np.empty_like(w)
    out[:, list(spec.order)] = w
    return out


class DVineCopula(BaseEstimator):
    """Scikit-learn style wrapper around order selection and vine fitting.

    ``fit`` expects an (n, d) matrix of uniforms (PIT output); afterwards
    ``spec_`` holds the fitted structure.
    """

    def __init__(self, candidates=None, level=0.05, order=None):
        self.candidates = candidates
        self.level = level
        self.order = order

    def fit(self, U, y=None):
        U = np.asarray(U, dtype=float)
        self.tau_matrix_ = empirical_tau_matrix(U)
        order = self.order if self.order is not None \
            else select_order(self.tau_matrix_)
        self.spec_ = fit_dvine(U, order, candidates=self.candidates,
                               level=self.level)
        return self

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        return simulate_dvine(self.spec_, n, seed)

    def log_density(self, U) -> np.ndarray:
        return dvine_logdensity(self.spec_, U)

    def score(self, U, y=None) -> float:
        return float(np.mean(self.log_density(U)))
