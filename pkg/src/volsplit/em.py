"""Two-component Gaussian EM used as the split proposal engine.

EM is only a means of finding a candidate bipartition whose pseudo-volume
sum is small; the clustering decisions themselves are made by the ratio
tests in :mod:`volsplit.cluster`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .moments import GaussianComponent, as_data_matrix, sample_moments

__all__ = ["EmConfig", "EmFit", "SplitResult", "em_two_gaussian", "hard_partition"]


@dataclass(frozen=True)
class EmConfig:
    """Knobs for a two-component EM fit."""

    max_iters: int = 200
    loglik_tol: float = 1e-8
    ridge: float = 1e-6
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.loglik_tol <= 0:
            raise ValueError("loglik_tol must be positive")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass(frozen=True)
class EmFit:
    """Converged (or iteration-capped) two-component fit."""

    components: tuple[GaussianComponent, GaussianComponent]
    responsibilities: np.ndarray
    log_likelihood: float
    converged: bool
    n_iter: int


@dataclass(frozen=True)
class SplitResult:
    """Hard bipartition of a cluster with its pseudo-volume ratio."""

    left: "ClusterView"
    right: "ClusterView"
    ratio: float
    converged: bool


def _log_gaussian(x: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    d = x.shape[1]
    chol = cholesky(cov, lower=True)
    white = solve_triangular(chol, (x - mean).T, lower=True)
    logdet = 2.0 * np.log(np.diag(chol)).sum()
    return -0.5 * (d * math.log(2.0 * math.pi) + logdet + (white ** 2).sum(axis=0))


def _run_em(x: np.ndarray, resp: np.ndarray, cfg: EmConfig) -> EmFit | None:
    """Iterate EM from the given initial responsibilities.

    Returns None when a component collapses to zero weight.
    """
    n, d = x.shape
    data_cov = sample_moments(x).covariance
    ridge = cfg.ridge * float(np.trace(data_cov)) / d * np.eye(d)
    loglik = -math.inf
    prev = -math.inf
    converged = False
    n_iter = 0
    weights = None
    means = None
    covs = None
    for it in range(cfg.max_iters):
        n_iter = it + 1
        counts = resp.sum(axis=0)
        if counts.min() < 1e-9:
            return None
        weights = counts / n
        means = (resp.T @ x) / counts[:, None]
        covs = []
        for k in range(2):
            z = x - means[k]
            cov = (z * resp[:, k : k + 1]).T @ z / counts[k]
            covs.append((cov + cov.T) / 2.0 + ridge)
        logp = np.column_stack(
            [np.log(weights[k]) + _log_gaussian(x, means[k], covs[k]) for k in range(2)]
        )
        top = logp.max(axis=1, keepdims=True)
        lse = top[:, 0] + np.log(np.exp(logp - top).sum(axis=1))
        loglik = float(lse.sum())
        resp = np.exp(logp - lse[:, None])
        if abs(loglik - prev) < cfg.loglik_tol * max(1.0, abs(prev)):
            converged = True
            break
        prev = loglik
    components = tuple(
        GaussianComponent(weight=float(weights[k]), mean=means[k], covariance=covs[k])
        for k in range(2)
    )
    return EmFit(
        components=components,
        responsibilities=resp,
        log_likelihood=loglik,
        converged=converged,
        n_iter=n_iter,
    )


def _initial_responsibilities(x: np.ndarray, cfg: EmConfig):
    """Yield one hard 0/1 init per leading principal axis, then random fills.

    Splitting along a single axis misses structure orthogonal to it, so each
    of the leading principal axes seeds its own restart before random
    responsibilities fill the remaining budget.
    """
    n, d = x.shape
    m = sample_moments(x)
    _, vecs = np.linalg.eigh(m.covariance)
    n_axis = min(d, max(1, cfg.restarts - 1))
    for r in range(cfg.restarts):
        if r < n_axis:
            proj = (x - m.mean) @ vecs[:, -1 - r]
            resp = np.zeros((n, 2))
            resp[proj <= 0, 0] = 1.0
            resp[proj > 0, 1] = 1.0
        else:
            rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, r)))
            p = rng.random(n)
            resp = np.column_stack([p, 1.0 - p])
        yield resp


def _em_candidates(data, cfg: EmConfig) -> list[EmFit]:
    """All restart fits, best log-likelihood first (ties keep restart order)."""
    x = as_data_matrix(data)
    n, d = x.shape
    if n < 2 * (d + 1):
        raise ValueError("cluster too small to split")
    fits = []
    for resp in _initial_responsibilities(x, cfg):
        fit = _run_em(x, resp, cfg)
        if fit is not None:
            fits.append(fit)
    fits.sort(key=lambda f: -f.log_likelihood)
    return fits


def em_two_gaussian(data, cfg: EmConfig | None = None) -> EmFit:
    """Fit a two-component Gaussian mixture, best of ``cfg.restarts`` runs.

    Requires ``n >= 2 * (d + 1)`` so that both sides of a hard partition can
    in principle support a nonsingular covariance.
    """
    cfg = cfg or EmConfig()
    fits = _em_candidates(data, cfg)
    if not fits:
        raise ValueError("cluster too small to split")
    return fits[0]


def hard_partition(parent, fit_or_resp) -> SplitResult:
    """Assign each point to its higher-responsibility component.

    ``parent`` is the :class:`~volsplit.cluster.ClusterView` the EM was run
    on.  Ties go to component 0.  Raises when all points land on one side;
    callers treat that as an unsplittable cluster.
    """
    resp = fit_or_resp.responsibilities if isinstance(fit_or_resp, EmFit) else np.asarray(fit_or_resp, dtype=float)
    if resp.ndim != 2 or resp.shape[1] != 2:
        raise ValueError("responsibilities must be an (n, 2) array")
    if not np.allclose(resp.sum(axis=1), 1.0, atol=1e-8):
        raise ValueError("responsibility rows must sum to 1")
    side = resp[:, 0] >= resp[:, 1]
    if side.all() or (~side).all():
        raise ValueError("degenerate split")
    left = parent.subset(parent.indices[side])
    right = parent.subset(parent.indices[~side])
    parent_pv = parent.pseudo_volume
    if parent_pv > 0:
        ratio = (left.pseudo_volume + right.pseudo_volume) / parent_pv
    else:
        ratio = math.inf
    converged = fit_or_resp.converged if isinstance(fit_or_resp, EmFit) else True
    return SplitResult(left=left, right=right, ratio=ratio, converged=converged)
