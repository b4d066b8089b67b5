"""Monte-Carlo oracles for the inequalities behind the split and merge tests.

Each check draws randomized instances, measures the signed margin by which an
inequality holds, and returns a machine-readable report.  These back the
property-test suite and the ``verify`` CLI subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .em import EmConfig, em_two_gaussian
from .moments import (
    GaussianComponent,
    min_pseudo_volume_bound,
    pseudo_volume,
    sample_moments,
    spherical_uniform_covariance,
)

__all__ = [
    "InequalityReport",
    "shell_volume_form",
    "check_subadditivity",
    "check_unimodal_partitions",
    "compare_kl",
    "check_min_volume_bound",
    "check_ball_covariance",
    "sample_uniform_ball",
    "sample_uniform_cube",
    "sample_elliptical_logistic",
]

DENSITY_FAMILIES = ("gaussian", "logistic-elliptical", "uniform-ball")
PARTITION_STRATEGIES = ("hyperplane", "em")


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of a randomized inequality check.

    ``worst_margin`` is the minimum over trials of RHS - LHS; ``violations``
    counts trials whose margin fell below the check's tolerance.
    """

    name: str
    trials: int
    violations: int
    worst_margin: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def _rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, trial)))


def shell_volume_form(x, d: int) -> float:
    """The degree-1 homogeneous form (sum x_i^(1+2/d))^(d/2) / (sum x_i)^(d/2).

    Subadditive over elementwise sums, with equality exactly for
    proportional sequences.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty 1-D sequence")
    if np.any(v < 0):
        raise ValueError("entries must be nonnegative")
    total = v.sum()
    if total <= 0:
        raise ValueError("sequence must contain a positive entry")
    if d < 1:
        raise ValueError("d must be a positive integer")
    return float((v ** (1.0 + 2.0 / d)).sum() ** (d / 2.0) / total ** (d / 2.0))


def check_subadditivity(
    trials: int,
    n: int,
    d: int,
    seed: int = 0,
    proportional: bool = False,
    tol: float = 1e-10,
) -> InequalityReport:
    """Randomized check that the shell volume form is subadditive.

    Draws nonnegative b, c of length n and tests f(b+c) <= f(b) + f(c) up to
    relative tolerance.  With ``proportional=True``, c is a positive multiple
    of b and the margin must vanish (the equality case), so violations count
    trials where |f(b)+f(c)-f(b+c)| exceeds the tolerance.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    violations = 0
    worst = math.inf
    for t in range(trials):
        rng = _rng(seed, t)
        b = rng.random(n) * rng.choice([0.1, 1.0, 10.0])
        if proportional:
            b = b + 1e-3
            c = float(rng.random() * 10.0 + 1e-3) * b
        else:
            c = rng.random(n) * rng.choice([0.1, 1.0, 10.0])
            keep = rng.random(n) < 0.8
            b = np.where(keep, b, 0.0)
            c = np.where(rng.random(n) < 0.8, c, 0.0)
            c[~keep] += 1e-6
            if b.sum() == 0:
                b[rng.integers(n)] = 1e-6
            if c.sum() == 0:
                c[rng.integers(n)] = 1e-6
        lhs = shell_volume_form(b + c, d)
        rhs = shell_volume_form(b, d) + shell_volume_form(c, d)
        margin = rhs - lhs
        scale = max(abs(lhs), abs(rhs), 1.0)
        if proportional:
            bad = abs(margin) > tol * scale
        else:
            bad = margin < -tol * scale
        if bad:
            violations += 1
        worst = min(worst, margin)
    return InequalityReport("subadditivity", trials, violations, worst)


def sample_uniform_ball(n: int, d: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    z = rng.standard_normal((n, d))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    r = radius * rng.random(n) ** (1.0 / d)
    return z / norms * r[:, None]


def sample_uniform_cube(n: int, d: int, rng: np.random.Generator, side: float = 1.0) -> np.ndarray:
    return rng.random((n, d)) * side


def sample_elliptical_logistic(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Independent unit-scale logistic axes pushed through a random linear map."""
    u = rng.random((n, d))
    x = np.log(u / (1.0 - u))
    a = rng.standard_normal((d, d))
    a += np.eye(d) * (0.1 + abs(np.linalg.det(a)) ** (1.0 / d))
    return x @ a.T


def _sample_family(family: str, n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    if family == "gaussian":
        return rng.standard_normal((n, d))
    if family == "logistic-elliptical":
        return sample_elliptical_logistic(n, d, rng)
    if family == "uniform-ball":
        return sample_uniform_ball(n, d, rng)
    raise ValueError(f"unknown density family: {family!r}")


def _partition_ratio(x: np.ndarray, strategy: str, rng: np.random.Generator) -> float:
    n, d = x.shape
    pv_full = pseudo_volume(sample_moments(x))
    if strategy == "hyperplane":
        u = rng.standard_normal(d)
        u /= np.linalg.norm(u)
        proj = x @ u
        q = rng.uniform(0.2, 0.8)
        side = proj <= np.quantile(proj, q)
    elif strategy == "em":
        cfg = EmConfig(seed=int(rng.integers(2**32)))
        fit = em_two_gaussian(x, cfg)
        side = fit.responsibilities[:, 0] >= fit.responsibilities[:, 1]
    else:
        raise ValueError(f"unknown partition strategy: {strategy!r}")
    if side.all() or not side.any():
        return 1.0
    pv_parts = pseudo_volume(sample_moments(x[side])) + pseudo_volume(sample_moments(x[~side]))
    return pv_parts / pv_full


def check_unimodal_partitions(
    family: str,
    d: int,
    strategy: str = "hyperplane",
    trials: int = 50,
    seed: int = 0,
    n: int = 5000,
    eps: float = 0.1,
) -> InequalityReport:
    """Check that bipartitions of a unimodal sample cannot shrink pseudo-volume.

    Per trial: draw n points from the family, split them by the given
    strategy, and require (pv(G) + pv(H)) / pv(F) >= 1 - eps.  The slack eps
    absorbs finite-sample fluctuation; the population statement is exact.
    """
    if family not in DENSITY_FAMILIES:
        raise ValueError(f"unknown density family: {family!r}")
    if strategy not in PARTITION_STRATEGIES:
        raise ValueError(f"unknown partition strategy: {strategy!r}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    violations = 0
    worst = math.inf
    for t in range(trials):
        rng = _rng(seed, t)
        x = _sample_family(family, n, d, rng)
        ratio = _partition_ratio(x, strategy, rng)
        margin = ratio - (1.0 - eps)
        if margin < 0:
            violations += 1
        worst = min(worst, margin)
    return InequalityReport("unimodal-split", trials, violations, worst)


def _component_logpdf(x: np.ndarray, comp: GaussianComponent) -> np.ndarray:
    mean = np.asarray(comp.mean, dtype=float)
    cov = np.atleast_2d(np.asarray(comp.covariance, dtype=float))
    d = mean.size
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ValueError("singular component covariance") from None
    diff = x - mean
    sol = np.linalg.solve(chol, diff.T)
    logdet = 2.0 * np.log(np.diag(chol)).sum()
    return -0.5 * ((sol * sol).sum(axis=0) + d * math.log(2.0 * math.pi) + logdet)


def _mixture_logpdf(x: np.ndarray, comps: list[GaussianComponent]) -> np.ndarray:
    logs = np.stack([
        math.log(c.weight) + _component_logpdf(x, c) for c in comps
    ])
    peak = logs.max(axis=0)
    return peak + np.log(np.exp(logs - peak).sum(axis=0))


def compare_kl(
    f_sampler,
    single: GaussianComponent,
    mixture: list[GaussianComponent],
    mc_n: int = 100_000,
    seed: int = 0,
    f_logdensity=None,
) -> tuple[float, float]:
    """Monte-Carlo estimate of KL(f||single) - KL(f||mixture) with its stderr.

    Computed as E_f[log q_mixture(X) - log q_single(X)]; the entropy of f
    cancels, so ``f_logdensity`` is accepted for symmetry but never needed.
    ``f_sampler(n, rng)`` must return an (n, d) sample.  Positive delta means
    the mixture fits f strictly better than the single Gaussian.
    """
    if mc_n < 1:
        raise ValueError("mc_n must be at least 1")
    weight_sum = sum(c.weight for c in mixture)
    if abs(weight_sum - 1.0) > 1e-8:
        raise ValueError("mixture weights must sum to 1")
    rng = _rng(seed, 0)
    x = np.atleast_2d(np.asarray(f_sampler(mc_n, rng), dtype=float))
    if x.shape[0] == 1 and mc_n > 1:
        x = x.T
    terms = _mixture_logpdf(x, list(mixture)) - _component_logpdf(x, single)
    delta = float(terms.mean())
    stderr = float(terms.std(ddof=1) / math.sqrt(mc_n)) if mc_n > 1 else math.inf
    return delta, stderr


def check_min_volume_bound(
    bounded_density_sampler,
    max_density: float,
    d: int,
    n: int = 10_000,
    seed: int = 0,
    bootstrap: int = 200,
) -> InequalityReport:
    """Check a bounded density's sample pseudo-volume against the floor.

    Draws one sample, estimates the pseudo-volume and a bootstrap standard
    error, and requires pv + 4*SE >= min_pseudo_volume_bound(max_density, d).
    """
    if n < d + 1:
        raise ValueError("sample too small")
    rng = _rng(seed, 0)
    x = np.atleast_2d(np.asarray(bounded_density_sampler(n, rng), dtype=float))
    if x.shape[0] == 1 and n > 1:
        x = x.T
    pv = pseudo_volume(sample_moments(x))
    boot = np.empty(bootstrap)
    for b in range(bootstrap):
        idx = rng.integers(n, size=n)
        boot[b] = pseudo_volume(sample_moments(x[idx]))
    se = float(boot.std(ddof=1))
    bound = min_pseudo_volume_bound(max_density, d)
    margin = pv + 4.0 * se - bound
    return InequalityReport("min-volume", 1, int(margin < 0), margin)


def check_ball_covariance(
    d: int,
    radius: float = 1.0,
    n: int = 200_000,
    seed: int = 0,
) -> InequalityReport:
    """Compare the MC covariance of a uniform ball to radius^2/(d+2) * I.

    Margin is 4*SE minus the worst entrywise deviation, where SE is the
    Monte-Carlo standard error of a covariance entry.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    rng = _rng(seed, 0)
    x = sample_uniform_ball(n, d, rng, radius)
    sample_cov = sample_moments(x).covariance
    target = spherical_uniform_covariance(radius, d).covariance
    dev = float(np.abs(sample_cov - target).max())
    centered = x - x.mean(axis=0)
    prods = centered[:, :, None] * centered[:, None, :]
    se = float(prods.std(axis=0, ddof=1).max() / math.sqrt(n))
    margin = 4.0 * se - dev
    return InequalityReport("ball-cov", 1, int(margin < 0), margin)
