"""Command-line interface: clustering, KDE, k-means, simulations, verification.

Exit codes: 0 success, 1 at least one verification violation, 2 usage or
input error.  All outputs are deterministic given (input, flags, seed).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .cluster import (
    ClusteringConfig,
    adjusted_rand_index,
    kmeans,
    split_merge_cluster,
)
from .datasets import (
    load_iris,
    read_csv,
    sample_logistic_mixture_5,
    write_csv,
    write_labels_json,
)
from .em import EmConfig
from .kde import (
    ise,
    ise_grid,
    mixture_kde,
    sample_sech2_bimodal,
    sech2_bimodal_density,
    single_kde,
)
from .svgplot import curves_svg, scatter_svg
from .moments import GaussianComponent
from .verify import (
    InequalityReport,
    check_ball_covariance,
    check_min_volume_bound,
    check_subadditivity,
    check_unimodal_partitions,
    compare_kl,
    sample_uniform_ball,
    sample_uniform_cube,
)

VERIFY_SUITES = (
    "min-volume",
    "subadditivity",
    "unimodal-split",
    "kl-mixture",
    "ball-cov",
    "all",
)


def _load_points(args) -> tuple[np.ndarray, np.ndarray | None]:
    """Resolve the input source; returns (data, truth labels or None)."""
    if getattr(args, "iris", None):
        ds = load_iris(args.iris)
        return ds.data, ds.labels
    if getattr(args, "simulate", None):
        if args.simulate == "logistic5":
            ds = sample_logistic_mixture_5(args.n or 100, seed=args.seed)
            return ds.data, ds.labels
        if args.simulate == "sech2":
            return sample_sech2_bimodal(args.n or 1000, seed=args.seed), None
        raise ValueError(f"unknown simulation: {args.simulate!r}")
    if args.input is None:
        raise ValueError("no input given: pass a CSV path, --iris, or --simulate")
    return read_csv(args.input), None


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_cluster(args) -> int:
    data, truth = _load_points(args)
    cfg = ClusteringConfig(
        tau_s=args.tau_s,
        tau_m=args.tau_m,
        em=EmConfig(seed=args.seed),
        min_cluster_size=args.min_cluster_size,
    )
    tree = split_merge_cluster(data, cfg)
    out = _outdir(args)
    write_labels_json(tree, out / "labels.json")
    lines = [f"k = {tree.k}"]
    for c in tree.clusters:
        lines.append(
            f"cluster {c['id']}: size={c['size']} pseudo_volume={c['pseudo_volume']:.6g}"
        )
    for e in tree.events:
        mark = "accepted" if e.accepted else "rejected"
        ids = ",".join(str(i) for i in e.clusters)
        lines.append(f"{e.type} [{ids}] ratio={e.ratio:.6g} {mark}")
    if truth is not None:
        ari = adjusted_rand_index(truth, tree.final_labels)
        lines.append(f"adjusted_rand_vs_truth = {ari:.6g}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    if args.plot:
        (out / "scatter.svg").write_text(scatter_svg(data, tree.final_labels))
    return 0


def cmd_kmeans(args) -> int:
    data, truth = _load_points(args)
    labels, centroids = kmeans(data, args.k, seed=args.seed)
    out = _outdir(args)
    doc = {
        "k": args.k,
        "labels": [int(v) for v in labels],
        "centroids": [[float(v) for v in c] for c in centroids],
    }
    (out / "labels.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    sizes = ",".join(str(int((labels == c).sum())) for c in range(args.k))
    lines = [f"k = {args.k}", f"sizes = {sizes}"]
    if truth is not None:
        lines.append(f"adjusted_rand_vs_truth = {adjusted_rand_index(truth, labels):.6g}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    if args.plot:
        (out / "scatter.svg").write_text(scatter_svg(data, labels))
    return 0


def cmd_kde(args) -> int:
    data, _ = _load_points(args)
    x = np.asarray(data, dtype=float)
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise ValueError("kde requires 1-D data")
        x = x[:, 0]
    single = single_kde(x)
    model = single if args.no_split else mixture_kde(x, tau_s=args.tau_s)
    grid = ise_grid(x)
    mix_curve = model.evaluate(grid)
    single_curve = single.evaluate(grid)
    out = _outdir(args)
    write_csv(
        out / "curves.csv",
        np.column_stack([grid, mix_curve, single_curve]),
        header="x,mixture,single",
    )
    (out / "model.json").write_text(
        json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    lines = [f"segments = {len(model.segments)}"]
    for s in model.segments:
        lines.append(
            f"segment [{s.lo},{s.hi}): weight={s.weight:.6g} bandwidth={s.bandwidth:.6g}"
        )
    curves = {"mixture": mix_curve, "single": single_curve}
    if args.true_density:
        if args.true_density != "sech2":
            raise ValueError(f"unknown true density: {args.true_density!r}")
        truth = sech2_bimodal_density(grid)
        curves["true"] = truth
        ise_mix = ise(model, sech2_bimodal_density, grid)
        ise_single = ise(single, sech2_bimodal_density, grid)
        lines.append(f"ise_mixture = {ise_mix:.6g}")
        lines.append(f"ise_single = {ise_single:.6g}")
        lines.append(f"mixture_better = {ise_mix < ise_single}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    if args.plot:
        (out / "curves.svg").write_text(curves_svg(grid, curves))
    return 0


def cmd_simulate(args) -> int:
    out = _outdir(args)
    if args.family == "logistic5":
        ds = sample_logistic_mixture_5(args.n or 100, seed=args.seed)
        write_csv(out / "data.csv", ds.data)
        write_csv(out / "labels.csv", ds.labels[:, None].astype(float))
        print(f"wrote {ds.data.shape[0]} points to {out / 'data.csv'}")
        return 0
    if args.family == "sech2":
        x = sample_sech2_bimodal(args.n or 1000, seed=args.seed)
        write_csv(out / "data.csv", x[:, None])
        print(f"wrote {x.size} points to {out / 'data.csv'}")
        return 0
    raise ValueError(f"unknown simulation: {args.family!r}")


def _suite_subadditivity(trials: int, seed: int) -> list:
    reports = []
    grid = [(n, d) for n in range(2, 11) for d in range(1, 6)]
    per = max(1, trials // len(grid))
    for i, (n, d) in enumerate(grid):
        reports.append(check_subadditivity(per, n, d, seed=seed + i))
    reports.append(
        check_subadditivity(max(1, per // 10), 5, 3, seed=seed + 99, proportional=True)
    )
    return reports


def _suite_unimodal(trials: int, seed: int) -> list:
    reports = []
    for family in ("gaussian", "logistic-elliptical"):
        for d in (1, 2, 4):
            reports.append(
                check_unimodal_partitions(
                    family, d, strategy="hyperplane", trials=trials, seed=seed
                )
            )
    return reports


def _suite_kl(seed: int) -> list:
    def two_blob(n, rng):
        comp = rng.random(n) < 0.5
        return np.where(comp, -10.0, 10.0)[:, None] + rng.standard_normal((n, 1))

    single = GaussianComponent(1.0, np.zeros(1), np.array([[101.0]]))
    mixture = [
        GaussianComponent(0.5, np.array([-10.0]), np.eye(1)),
        GaussianComponent(0.5, np.array([10.0]), np.eye(1)),
    ]
    delta, stderr = compare_kl(two_blob, single, mixture, mc_n=100_000, seed=seed)
    margin = delta - 5.0 * stderr
    return [InequalityReport("kl-mixture", 1, int(margin < 0), margin)]


def _suite_min_volume(seed: int) -> list:
    ball_volume_3 = 4.0 * math.pi / 3.0
    return [
        check_min_volume_bound(
            lambda n, rng: sample_uniform_cube(n, 2, rng), 1.0, 2, seed=seed
        ),
        check_min_volume_bound(
            lambda n, rng: sample_uniform_ball(n, 3, rng), 1.0 / ball_volume_3, 3, seed=seed
        ),
        check_min_volume_bound(
            lambda n, rng: sample_uniform_cube(n, 1, rng), 1.0, 1, seed=seed
        ),
    ]


def _suite_ball_cov(seed: int) -> list:
    return [check_ball_covariance(d, seed=seed) for d in (1, 2, 3)]


def cmd_verify(args) -> int:
    suite = args.suite
    trials = args.trials
    reports = []
    if suite in ("subadditivity", "all"):
        reports += _suite_subadditivity(trials or 45_000, args.seed)
    if suite in ("unimodal-split", "all"):
        reports += _suite_unimodal(trials or 50, args.seed)
    if suite in ("kl-mixture", "all"):
        reports += _suite_kl(args.seed)
    if suite in ("min-volume", "all"):
        reports += _suite_min_volume(args.seed)
    if suite in ("ball-cov", "all"):
        reports += _suite_ball_cov(args.seed)
    out = _outdir(args)
    violations = sum(r.violations for r in reports)
    doc = {
        "suite": suite,
        "violations": violations,
        "reports": [r.to_dict() for r in reports],
    }
    (out / "report.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    for r in reports:
        print(
            f"{r.name}: trials={r.trials} violations={r.violations} "
            f"worst_margin={r.worst_margin:.6g}"
        )
    print(f"total violations: {violations}")
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volsplit",
        description="Pseudo-volume guided clustering and density estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, simulate_choices=None):
        p.add_argument("input", nargs="?", help="numeric CSV input path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--plot", action="store_true", help="emit SVG plots")
        p.add_argument("--iris", help="UCI-format iris.data path")
        if simulate_choices:
            p.add_argument("--simulate", choices=simulate_choices)
            p.add_argument("--n", type=int, help="simulation size")

    p_cluster = sub.add_parser("cluster", help="split-merge clustering")
    common(p_cluster, ("logistic5",))
    p_cluster.add_argument("--tau-s", type=float, default=0.05, dest="tau_s")
    p_cluster.add_argument("--tau-m", type=float, default=-0.05, dest="tau_m")
    p_cluster.add_argument("--min-cluster-size", type=int, dest="min_cluster_size")
    p_cluster.set_defaults(func=cmd_cluster)

    p_kmeans = sub.add_parser("kmeans", help="k-means baseline")
    common(p_kmeans, ("logistic5",))
    p_kmeans.add_argument("--k", type=int, required=True)
    p_kmeans.set_defaults(func=cmd_kmeans)

    p_kde = sub.add_parser("kde", help="segmented kernel density estimate")
    common(p_kde, ("sech2",))
    p_kde.add_argument("--tau-s", type=float, default=0.05, dest="tau_s")
    p_kde.add_argument("--no-split", action="store_true", dest="no_split")
    p_kde.add_argument("--true-density", choices=("sech2",), dest="true_density")
    p_kde.set_defaults(func=cmd_kde)

    p_verify = sub.add_parser("verify", help="randomized inequality checks")
    p_verify.add_argument("suite", choices=VERIFY_SUITES)
    p_verify.add_argument("--trials", type=int)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", default=".")
    p_verify.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate", help="write simulated datasets as CSV")
    p_sim.add_argument("family", choices=("logistic5", "sech2"))
    p_sim.add_argument("--n", type=int)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=".")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
