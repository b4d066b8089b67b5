import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit import (
    ClusterView,
    Moments,
    min_pseudo_volume_bound,
    moment_match_gaussian,
    pseudo_volume,
    sample_moments,
    spherical_uniform_covariance,
)

SQUARE = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]])


class TestSampleMoments:
    def test_square_mean_and_covariance(self):
        m = sample_moments(SQUARE)
        assert np.allclose(m.mean, [1.0, 1.0])
        assert np.allclose(m.covariance, np.eye(2))
        assert m.count == 4

    def test_single_point(self):
        m = sample_moments(np.array([5.0]))
        assert m.mean[0] == 5.0
        assert m.covariance[0, 0] == 0.0

    def test_two_points_1d(self):
        m = sample_moments(np.array([0.0, 1.0]))
        assert m.mean[0] == pytest.approx(0.5)
        assert m.covariance[0, 0] == pytest.approx(0.25)

    def test_divisor_override(self):
        m = sample_moments(np.array([0.0, 1.0]), ddof=1)
        assert m.covariance[0, 0] == pytest.approx(0.5)

    def test_empty_errors(self):
        with pytest.raises(ValueError, match="empty dataset"):
            sample_moments(np.empty((0, 2)))

    def test_non_finite_errors(self):
        with pytest.raises(ValueError, match="non-finite"):
            sample_moments(np.array([1.0, np.nan]))

    def test_covariance_symmetric(self, rng):
        m = sample_moments(rng.standard_normal((40, 3)))
        assert np.array_equal(m.covariance, m.covariance.T)


class TestPseudoVolume:
    def test_identity(self):
        assert pseudo_volume(Moments(np.zeros(2), np.eye(2), 1)) == pytest.approx(1.0)

    def test_1d_quarter(self):
        assert pseudo_volume(np.array([[0.25]])) == pytest.approx(0.5)

    def test_wide_logistic_diagonal(self):
        pi2 = math.pi**2
        cov = np.diag([12.0 * pi2, pi2 / 3.0])
        assert pseudo_volume(cov) == pytest.approx(2.0 * pi2, rel=1e-12)

    def test_singular_returns_zero(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        assert pseudo_volume(sample_moments(x)) == 0.0

    def test_negative_eigenvalue_errors(self):
        with pytest.raises(ValueError, match="covariance not PSD"):
            pseudo_volume(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_tiny_negative_drift_clamped(self):
        cov = np.array([[1.0, 1.0], [1.0, 1.0 - 1e-12]])
        assert pseudo_volume(cov) == 0.0

    def test_1d_data_matches_std(self, rng):
        x = rng.standard_normal(200)
        assert pseudo_volume(sample_moments(x)) == pytest.approx(x.std())

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_rotation_invariance(self, seed):
        r = np.random.default_rng(seed)
        x = r.standard_normal((60, 3))
        q, _ = np.linalg.qr(r.standard_normal((3, 3)))
        pv = pseudo_volume(sample_moments(x))
        pv_rot = pseudo_volume(sample_moments(x @ q.T))
        assert pv_rot == pytest.approx(pv, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_linear_map_scales_by_det(self, seed):
        r = np.random.default_rng(seed)
        x = r.standard_normal((60, 2))
        a = r.standard_normal((2, 2)) + 2.0 * np.eye(2)
        pv = pseudo_volume(sample_moments(x))
        pv_mapped = pseudo_volume(sample_moments(x @ a.T))
        assert pv_mapped == pytest.approx(abs(np.linalg.det(a)) * pv, rel=1e-8)


class TestMinPseudoVolumeBound:
    def test_d1_recovers_uniform_sigma(self):
        assert min_pseudo_volume_bound(1.0, 1) == pytest.approx(1.0 / math.sqrt(12.0), rel=1e-12)

    def test_d2(self):
        assert min_pseudo_volume_bound(1.0, 2) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)

    def test_density_scaling(self):
        assert min_pseudo_volume_bound(2.0, 1) == pytest.approx(1.0 / (2.0 * math.sqrt(12.0)))

    def test_nonpositive_density_errors(self):
        with pytest.raises(ValueError):
            min_pseudo_volume_bound(0.0, 2)

    @given(st.floats(0.1, 100.0), st.integers(1, 6), st.floats(1.5, 4.0))
    def test_inverse_in_density(self, m, d, c):
        assert min_pseudo_volume_bound(c * m, d) == pytest.approx(
            min_pseudo_volume_bound(m, d) / c, rel=1e-12
        )

    def test_hypercube_d2_exceeds_bound(self):
        pv_cube = pseudo_volume(np.eye(2) / 12.0)
        assert pv_cube == pytest.approx(1.0 / 12.0)
        assert pv_cube > min_pseudo_volume_bound(1.0, 2)


class TestSphericalUniformCovariance:
    def test_ball_d3(self):
        m = spherical_uniform_covariance(1.0, 3)
        assert np.allclose(m.covariance, np.eye(3) / 5.0)
        assert np.allclose(m.mean, 0.0)

    def test_interval_variance(self):
        m = spherical_uniform_covariance(1.0, 1)
        assert m.covariance[0, 0] == pytest.approx(1.0 / 3.0)

    def test_radius_two_d2_identity(self):
        m = spherical_uniform_covariance(2.0, 2)
        assert np.allclose(m.covariance, np.eye(2))

    def test_nonpositive_radius_errors(self):
        with pytest.raises(ValueError):
            spherical_uniform_covariance(0.0, 2)

    def test_ball_equality_case_of_bound(self, rng):
        # uniform ball density is the minimizer, so its pv sits on the bound
        d = 3
        ball_volume = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
        pv = pseudo_volume(spherical_uniform_covariance(1.0, d))
        assert pv == pytest.approx(min_pseudo_volume_bound(1.0 / ball_volume, d), rel=1e-12)


class TestMomentMatchGaussian:
    def test_full_cluster_weight_one(self):
        view = ClusterView.full(SQUARE)
        comp = moment_match_gaussian(view)
        assert comp.weight == pytest.approx(1.0)
        assert np.allclose(comp.mean, [1.0, 1.0])
        assert np.allclose(comp.covariance, np.eye(2))

    def test_subset_weight_is_share(self, iris):
        view = ClusterView.full(iris.data)
        setosa = view.subset(np.where(iris.labels == 0)[0])
        comp = moment_match_gaussian(setosa)
        assert comp.weight == pytest.approx(50.0 / 150.0)

    def test_tiny_cluster_errors(self):
        view = ClusterView.full(SQUARE).subset([0])
        with pytest.raises(ValueError, match="degenerate cluster"):
            moment_match_gaussian(view)
