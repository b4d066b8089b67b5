"""Split-merge clustering driven by covariance pseudo-volume ratios.

Phase 1 repeatedly fits two-component Gaussians and keeps any bipartition
whose pseudo-volume sum is below ``(1 + tau_s)`` times the parent's.  Phase 2
greedily merges final clusters whose pseudo-volume sum stays above
``(1 + tau_m)`` times their pooled pseudo-volume.  A k-means baseline and an
adjusted Rand index round out the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .em import EmConfig, _em_candidates, hard_partition
from .moments import Moments, as_data_matrix, pseudo_volume, sample_moments

__all__ = [
    "ClusterView",
    "ClusteringConfig",
    "ClusterEvent",
    "ClusterTree",
    "split_test",
    "merge_test",
    "split_merge_cluster",
    "kmeans",
    "adjusted_rand_index",
]

# A candidate bipartition must leave at least this share of the parent's
# points on each side; two-component fits that peel off less are tail
# trimming, which shrinks determinants without evidence of real structure.
MIN_CHILD_FRACTION = 0.1

# Default floor on the size of clusters the engine will try to split.  Below
# roughly 25 points per dimension the sample determinant fluctuates so much
# that the ratio test accepts spurious partitions of single Gaussians.
MIN_POINTS_PER_DIM = 25


class ClusterView:
    """An index subset of a data matrix with cached moments and pseudo-volume."""

    def __init__(self, data: np.ndarray, indices):
        self.data = data
        idx = np.asarray(indices, dtype=int)
        if idx.ndim != 1 or len(idx) == 0:
            raise ValueError("cluster must contain at least one point")
        if len(np.unique(idx)) != len(idx):
            raise ValueError("cluster indices must be unique")
        if idx.min() < 0 or idx.max() >= data.shape[0]:
            raise ValueError("cluster indices out of range")
        self.indices = np.sort(idx)
        self._moments: Moments | None = None
        self._pv: float | None = None

    @classmethod
    def full(cls, data) -> "ClusterView":
        x = as_data_matrix(data)
        return cls(x, np.arange(x.shape[0]))

    def subset(self, indices) -> "ClusterView":
        return ClusterView(self.data, indices)

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def total_size(self) -> int:
        return self.data.shape[0]

    @property
    def points(self) -> np.ndarray:
        return self.data[self.indices]

    @property
    def moments(self) -> Moments:
        if self._moments is None:
            self._moments = sample_moments(self.points)
        return self._moments

    @property
    def pseudo_volume(self) -> float:
        if self._pv is None:
            self._pv = pseudo_volume(self.moments)
        return self._pv


@dataclass(frozen=True)
class ClusteringConfig:
    """Thresholds and EM settings for :func:`split_merge_cluster`.

    ``min_cluster_size=None`` resolves to ``max(2 * (d + 1),
    MIN_POINTS_PER_DIM * d)`` for d-dimensional data.
    """

    tau_s: float = 0.05
    tau_m: float = -0.05
    em: EmConfig = field(default_factory=EmConfig)
    min_cluster_size: int | None = None


@dataclass(frozen=True)
class SplitDecision:
    ratio: float
    accept: bool


@dataclass(frozen=True)
class MergeDecision:
    ratio: float
    merge: bool


@dataclass(frozen=True)
class ClusterEvent:
    """One recorded split or merge decision."""

    type: str
    ratio: float
    accepted: bool
    clusters: tuple[int, ...]


@dataclass(frozen=True)
class ClusterTree:
    """Event log and final labeling of a split-merge run."""

    events: tuple[ClusterEvent, ...]
    final_labels: np.ndarray
    k: int
    clusters: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "labels": [int(v) for v in self.final_labels],
            "events": [
                {
                    "type": e.type,
                    "ratio": e.ratio,
                    "accepted": e.accepted,
                    "clusters": list(e.clusters),
                }
                for e in self.events
            ],
            "clusters": [dict(c) for c in self.clusters],
        }


def _check_partition(parent: ClusterView, a: ClusterView, b: ClusterView):
    merged = np.concatenate([a.indices, b.indices])
    if len(merged) != parent.size or not np.array_equal(np.sort(merged), parent.indices):
        raise ValueError("clusters do not partition the parent")


def split_test(parent: ClusterView, left: ClusterView, right: ClusterView, tau_s: float) -> SplitDecision:
    """Accept a bipartition when its pseudo-volume sum is below (1 + tau_s) x parent's."""
    _check_partition(parent, left, right)
    parent_pv = parent.pseudo_volume
    if parent_pv <= 0:
        return SplitDecision(ratio=math.inf, accept=False)
    ratio = (left.pseudo_volume + right.pseudo_volume) / parent_pv
    return SplitDecision(ratio=ratio, accept=ratio < 1.0 + tau_s)


def merge_test(p: ClusterView, q: ClusterView, r: ClusterView, tau_m: float) -> MergeDecision:
    """Merge q and r when their pseudo-volume sum is at least (1 + tau_m) x pooled."""
    _check_partition(p, q, r)
    pooled = p.pseudo_volume
    if pooled <= 0:
        return MergeDecision(ratio=math.inf, merge=True)
    ratio = (q.pseudo_volume + r.pseudo_volume) / pooled
    return MergeDecision(ratio=ratio, merge=ratio >= 1.0 + tau_m)


def _default_min_cluster_size(d: int) -> int:
    return max(2 * (d + 1), MIN_POINTS_PER_DIM * d)


def _derive_seed(seed: int, step: int) -> int:
    return int(np.random.SeedSequence((seed, step)).generate_state(1)[0])


def _propose_split(view: ClusterView, cfg: ClusteringConfig, step: int):
    """Best-likelihood EM bipartition that keeps both children above the floor."""
    em_cfg = replace(cfg.em, seed=_derive_seed(cfg.em.seed, step))
    try:
        fits = _em_candidates(view.points, em_cfg)
    except ValueError:
        return None
    d = view.data.shape[1]
    floor = max(d + 1, math.ceil(MIN_CHILD_FRACTION * view.size))
    for fit in fits:
        side = fit.responsibilities[:, 0] >= fit.responsibilities[:, 1]
        small = min(int(side.sum()), int((~side).sum()))
        if small < floor:
            continue
        return hard_partition(view, fit)
    return None


def split_merge_cluster(data, cfg: ClusteringConfig | None = None) -> ClusterTree:
    """Recover clusters by recursive splitting and greedy merging.

    Splitting proceeds over a FIFO queue seeded with the full dataset;
    clusters below ``min_cluster_size`` or failing the split test become
    final.  Merging repeatedly joins the highest-ratio eligible pair until
    none passes the merge test.  Deterministic given (data, config).
    """
    cfg = cfg or ClusteringConfig()
    root = ClusterView.full(data)
    n, d = root.data.shape
    min_size = cfg.min_cluster_size if cfg.min_cluster_size is not None else _default_min_cluster_size(d)
    if min_size < 2 * (d + 1):
        raise ValueError("min_cluster_size must be at least 2 * (d + 1)")
    if n < min_size:
        raise ValueError("dataset smaller than min_cluster_size")

    events: list[ClusterEvent] = []
    next_id = 0

    def new_id() -> int:
        nonlocal next_id
        next_id += 1
        return next_id - 1

    queue: list[tuple[int, ClusterView]] = [(new_id(), root)]
    final: list[tuple[int, ClusterView]] = []
    step = 0
    while queue:
        cid, view = queue.pop(0)
        step += 1
        if view.size < min_size:
            final.append((cid, view))
            continue
        proposal = _propose_split(view, cfg, step)
        if proposal is None:
            final.append((cid, view))
            continue
        decision = split_test(view, proposal.left, proposal.right, cfg.tau_s)
        if decision.accept:
            lid, rid = new_id(), new_id()
            events.append(
                ClusterEvent("split", decision.ratio, True, (cid, lid, rid))
            )
            queue.append((lid, proposal.left))
            queue.append((rid, proposal.right))
        else:
            events.append(ClusterEvent("split", decision.ratio, False, (cid,)))
            final.append((cid, view))

    while len(final) > 1:
        best = None
        for i in range(len(final)):
            for j in range(i + 1, len(final)):
                qi, vi = final[i]
                qj, vj = final[j]
                pooled = vi.subset(np.concatenate([vi.indices, vj.indices]))
                decision = merge_test(pooled, vi, vj, cfg.tau_m)
                if decision.merge and (best is None or decision.ratio > best[0]):
                    best = (decision.ratio, i, j, pooled)
        if best is None:
            break
        ratio, i, j, pooled = best
        mid = new_id()
        events.append(ClusterEvent("merge", ratio, True, (final[i][0], final[j][0], mid)))
        final[i] = (mid, pooled)
        final.pop(j)

    if len(events) > 4 * n:
        raise RuntimeError("event log exceeded termination bound")

    labels = np.empty(n, dtype=int)
    summaries = []
    for cid, view in final:
        labels[view.indices] = cid
        summaries.append(
            {
                "id": cid,
                "size": view.size,
                "mean": [float(v) for v in view.moments.mean],
                "pseudo_volume": view.pseudo_volume,
            }
        )
    return ClusterTree(
        events=tuple(events),
        final_labels=labels,
        k=len(final),
        clusters=tuple(summaries),
    )


def kmeans(data, k: int, seed: int = 0):
    """Lloyd's algorithm with k-means++ seeding.

    Returns (labels, centroids).  Empty clusters are re-seeded with the point
    farthest from its centroid.
    """
    x = as_data_matrix(data)
    n = x.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > n:
        raise ValueError("k exceeds number of points")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    centroids = np.empty((k, x.shape[1]))
    centroids[0] = x[rng.integers(n)]
    dist2 = ((x - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = dist2.sum()
        if total <= 0:
            centroids[i] = x[rng.integers(n)]
        else:
            centroids[i] = x[rng.choice(n, p=dist2 / total)]
        dist2 = np.minimum(dist2, ((x - centroids[i]) ** 2).sum(axis=1))
    labels = np.zeros(n, dtype=int)
    for _ in range(300):
        d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        for c in range(k):
            members = new_labels == c
            if members.any():
                centroids[c] = x[members].mean(axis=0)
            else:
                worst = int(d2[np.arange(n), new_labels].argmax())
                centroids[c] = x[worst]
                new_labels[worst] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, centroids


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-corrected agreement between two labelings."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape:
        raise ValueError("labelings must have equal length")
    n = len(a)
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)

    def comb2(v):
        return v * (v - 1) / 2.0

    sum_cells = comb2(table).sum()
    sum_rows = comb2(table.sum(axis=1)).sum()
    sum_cols = comb2(table.sum(axis=0)).sum()
    expected = sum_rows * sum_cols / comb2(n)
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))
