"""Sample moments, covariance pseudo-volumes, and related closed forms.

The pseudo-volume of a covariance matrix is the square root of its
determinant; in one dimension it reduces to the standard deviation.  All
clustering and density-splitting decisions in this package compare sums of
pseudo-volumes, so the routines here are the numerical core everything else
builds on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Moments",
    "GaussianComponent",
    "sample_moments",
    "pseudo_volume",
    "min_pseudo_volume_bound",
    "spherical_uniform_covariance",
    "moment_match_gaussian",
]

# Eigenvalues above -tol*trace are treated as floating-point PSD drift.
_PSD_SLACK = 1e-8


@dataclass(frozen=True)
class Moments:
    """First and second sample moments of a point set.

    Attributes
    ----------
    mean : ndarray, shape (d,)
    covariance : ndarray, shape (d, d)
        Symmetric positive semidefinite.
    count : int
        Number of points the moments were computed from.
    """

    mean: np.ndarray
    covariance: np.ndarray
    count: int


@dataclass(frozen=True)
class GaussianComponent:
    """One weighted Gaussian in a mixture."""

    weight: float
    mean: np.ndarray
    covariance: np.ndarray


def as_data_matrix(data) -> np.ndarray:
    """Validate and coerce ``data`` to an (n, d) float array.

    1-D input is treated as n points in one dimension.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError("empty dataset")
    if not np.all(np.isfinite(x)):
        raise ValueError("data contains non-finite values")
    return x


def sample_moments(data, ddof: int = 0) -> Moments:
    """Mean and covariance of a point set.

    The covariance uses divisor ``n - ddof`` with ``ddof=0`` by default
    (population convention), so that ratio tests comparing pseudo-volumes of
    nested point sets are internally consistent.  The matrix is symmetrized
    explicitly to kill round-off asymmetry.
    """
    x = as_data_matrix(data)
    n = x.shape[0]
    if n - ddof < 1:
        raise ValueError("empty dataset")
    mean = x.mean(axis=0)
    z = x - mean
    cov = z.T @ z / (n - ddof)
    cov = (cov + cov.T) / 2.0
    return Moments(mean=mean, covariance=cov, count=n)


def _covariance_of(m) -> np.ndarray:
    if isinstance(m, Moments):
        return m.covariance
    return np.asarray(m, dtype=float)


def pseudo_volume(m) -> float:
    """Square root of the determinant of a covariance matrix.

    Accepts a :class:`Moments` or a bare covariance matrix.  Computed from
    the eigenvalues of the symmetrized matrix; eigenvalues within
    ``-1e-8 * trace`` of zero are clamped to zero, so singular covariances
    give 0.0 rather than an error (degenerate clusters legitimately arise
    during cluster search).

    Raises
    ------
    ValueError
        If an eigenvalue is more negative than the PSD drift tolerance.
    """
    cov = _covariance_of(m)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    cov = (cov + cov.T) / 2.0
    eigvals = np.linalg.eigvalsh(cov)
    tol = _PSD_SLACK * max(float(np.trace(cov)), 1.0)
    if eigvals[0] < -tol:
        raise ValueError("covariance not PSD")
    eigvals = np.clip(eigvals, 0.0, None)
    return float(np.sqrt(np.prod(eigvals)))


def min_pseudo_volume_bound(max_density: float, d: int) -> float:
    """Lower bound on the pseudo-volume of any density bounded by ``max_density``.

    Over all d-dimensional densities with sup at most M, the pseudo-volume is
    minimized by the uniform density on a ball, giving

        Gamma(d/2 + 1) / (M * (pi * (d + 2))**(d/2)).

    For d=1 this is 1/(M*sqrt(12)), the uniform-interval case.
    """
    if max_density <= 0:
        raise ValueError("max_density must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return math.gamma(d / 2.0 + 1.0) / (max_density * (math.pi * (d + 2.0)) ** (d / 2.0))


def spherical_uniform_covariance(radius: float, d: int) -> Moments:
    """Moments of the uniform density on a d-ball of given radius.

    The covariance is ``radius**2 / (d + 2)`` times the identity; the mean is
    the origin.  ``count`` is set to 1 (analytic moments, not sample ones).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    cov = (radius ** 2 / (d + 2.0)) * np.eye(d)
    return Moments(mean=np.zeros(d), covariance=cov, count=1)


def moment_match_gaussian(cluster) -> GaussianComponent:
    """Gaussian with the cluster's sample mean and covariance.

    The weight is the cluster's share of its parent dataset.  A singular
    covariance is nudged to positive definite with a trace-scaled ridge so
    the component is always a usable density.
    """
    size = cluster.size
    if size < 2:
        raise ValueError("degenerate cluster")
    m = cluster.moments
    cov = m.covariance
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals[0] <= 0:
        d = cov.shape[0]
        ridge = 1e-6 * float(np.trace(cov)) / d + 1e-12
        cov = cov + ridge * np.eye(d)
    weight = size / cluster.total_size
    return GaussianComponent(weight=weight, mean=m.mean.copy(), covariance=cov)
