"""Clustering and density estimation guided by covariance pseudo-volumes.

The pseudo-volume of a cluster is sqrt(det(covariance)).  A dataset splits
when a two-part partition lowers the summed pseudo-volume; clusters merge
when pooling does not raise it.  The same ratio test segments 1-D samples
for mixture kernel density estimation.
"""

from .cluster import (
    ClusteringConfig,
    ClusterTree,
    ClusterView,
    adjusted_rand_index,
    kmeans,
    merge_test,
    split_merge_cluster,
    split_test,
)
from .em import EmConfig, EmFit, SplitResult, em_two_gaussian, hard_partition
from .kde import (
    KdeModel,
    best_1d_split,
    ise,
    ise_grid,
    kde_eval,
    mixture_kde,
    sample_sech2_bimodal,
    sech2_bimodal_density,
    silverman_bandwidth,
    single_kde,
)
from .moments import (
    GaussianComponent,
    Moments,
    min_pseudo_volume_bound,
    moment_match_gaussian,
    pseudo_volume,
    sample_moments,
    spherical_uniform_covariance,
)
from .datasets import (
    LabeledDataset,
    load_iris,
    read_csv,
    sample_logistic_mixture_5,
    write_csv,
    write_labels_json,
)
from .verify import (
    InequalityReport,
    check_ball_covariance,
    check_min_volume_bound,
    check_subadditivity,
    check_unimodal_partitions,
    compare_kl,
    shell_volume_form,
)

__version__ = "0.1.0"

__all__ = [
    "ClusteringConfig",
    "ClusterTree",
    "ClusterView",
    "EmConfig",
    "EmFit",
    "GaussianComponent",
    "InequalityReport",
    "KdeModel",
    "LabeledDataset",
    "Moments",
    "SplitResult",
    "adjusted_rand_index",
    "best_1d_split",
    "check_ball_covariance",
    "check_min_volume_bound",
    "check_subadditivity",
    "check_unimodal_partitions",
    "compare_kl",
    "em_two_gaussian",
    "hard_partition",
    "ise",
    "ise_grid",
    "kde_eval",
    "kmeans",
    "load_iris",
    "merge_test",
    "min_pseudo_volume_bound",
    "mixture_kde",
    "moment_match_gaussian",
    "pseudo_volume",
    "read_csv",
    "sample_logistic_mixture_5",
    "sample_moments",
    "sample_sech2_bimodal",
    "sech2_bimodal_density",
    "shell_volume_form",
    "silverman_bandwidth",
    "single_kde",
    "spherical_uniform_covariance",
    "split_merge_cluster",
    "split_test",
    "write_csv",
    "write_labels_json",
]
