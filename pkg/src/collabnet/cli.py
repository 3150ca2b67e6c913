"""Command-line front end.

Subcommands: features, cluster, simulate, synthesize, report.
Exit codes: 0 success, 1 input/parse error, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import clustering as km, dynamics
from .errors import (
    ConfigError,
    InputError,
    InvalidParameter,
    NonPositiveHorizon,
    NonPositiveStep,
    ParseError,
    TooFewCountries,
)
from .features import (
    Quadrant,
    QuadrantThresholds,
    compute_features,
    extremes,
    features_to_csv,
    median_thresholds,
    quadrant_counts,
)
from .graph_io import parse_edge_list, synthesize_graph, write_graph
from .svg import ScatterPlotSpec, render_scatter

COMMANDS = ("features", "cluster", "simulate", "synthesize", "report")
NEEDS_INPUT = ("features", "cluster", "report")
CLUSTERS_HEADER = "country,cluster,distinct_partners,external_share_pct"
MAX_PLOT_POINTS = 1001

_UMASK = os.umask(0)
os.umask(_UMASK)


@dataclass
class RunConfig:
    command: str = "features"
    input: str | None = None
    out_dir: str = "."
    k: int = km.DEFAULT_K
    seed: int = 1
    restarts: int = km.DEFAULT_RESTARTS
    tol: float = km.DEFAULT_TOL
    max_iter: int = km.DEFAULT_MAX_ITER
    alpha: float = dynamics.ModelParams.alpha
    beta: float = dynamics.ModelParams.beta
    y0: float = dynamics.ModelParams.y0
    x0: float = dynamics.ModelParams.x0
    p0: float = dynamics.ModelParams.p0
    dt: float = dynamics.DEFAULT_DT
    t_end: float = dynamics.DEFAULT_T_END
    n_countries: int = 50
    share_cut: float | None = None
    partners_cut: float | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command in NEEDS_INPUT and not self.input:
            raise ConfigError(f"{self.command} requires --input")
        if self.k < 1:
            raise ConfigError(f"--k must be >= 1, got {self.k}")
        if self.restarts < 1 or self.max_iter < 1:
            raise ConfigError("--restarts and --max-iter must be >= 1")
        if not self.tol > 0:
            raise ConfigError(f"--tol must be > 0, got {self.tol}")
        if self.n_countries < 4:
            raise TooFewCountries(f"--n-countries must be >= 4, got {self.n_countries}")
        if not self.dt > 0:
            raise NonPositiveStep(f"--dt must be > 0, got {self.dt}")
        if not self.t_end > 0:
            raise NonPositiveHorizon(f"--t-end must be > 0, got {self.t_end}")
        if self.dt > self.t_end:
            raise NonPositiveStep(f"--dt ({self.dt}) must not exceed --t-end ({self.t_end})")
        self.params()
        if self.share_cut is not None and not 0 < self.share_cut < 100:
            raise InvalidParameter(f"--share-cut must lie in (0, 100), got {self.share_cut}")
        if self.partners_cut is not None and not self.partners_cut > 0:
            raise InvalidParameter(f"--partners-cut must be > 0, got {self.partners_cut}")

    def params(self) -> dynamics.ModelParams:
        return dynamics.ModelParams(self.alpha, self.beta, self.y0, self.x0, self.p0)

    def thresholds(self, features) -> QuadrantThresholds:
        med = median_thresholds(features)
        return QuadrantThresholds(
            med.share_cut if self.share_cut is None else self.share_cut,
            med.partners_cut if self.partners_cut is None else self.partners_cut,
        )


def write_outputs(out_dir: str | Path, files: dict[str, str]) -> list[Path]:
    """Write every file to a temp name first, then rename them all into place."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=out)
            staged.append((tmp, out / name))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.chmod(tmp, 0o666 & ~_UMASK)
        for tmp, final in staged:
            os.replace(tmp, final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
    return [final for _, final in staged]


def load_graph(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return parse_edge_list(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _downsample(n: int) -> np.ndarray:
    if n <= MAX_PLOT_POINTS:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, MAX_PLOT_POINTS).round().astype(int))


def cmd_features(cfg: RunConfig) -> int:
    feats = compute_features(load_graph(cfg.input))
    write_outputs(cfg.out_dir, {"features.csv": features_to_csv(feats)})
    return 0


def clusters_to_csv(feats, model: km.ClusterModel) -> str:
    rows = sorted(feats, key=lambda f: (model.assignments[f.country], f.country))
    lines = [CLUSTERS_HEADER]
    for f in rows:
        lines.append(f"{f.country},{model.assignments[f.country]},{f.distinct_partners},{f.external_share_pct:.6f}")
    return "\n".join(lines) + "\n"


def cluster_features(feats, cfg: RunConfig) -> km.ClusterModel:
    coords, _ = km.standardize([f.point for f in feats])
    points = km.feature_points([f.country for f in feats], coords)
    return km.kmeans(points, k=cfg.k, seed=cfg.seed, restarts=cfg.restarts, tol=cfg.tol, max_iter=cfg.max_iter)


def cmd_cluster(cfg: RunConfig) -> int:
    feats = compute_features(load_graph(cfg.input))
    model = cluster_features(feats, cfg)
    cuts = cfg.thresholds(feats)
    spec = ScatterPlotSpec(
        points=[(f.point[0], f.point[1], model.assignments[f.country]) for f in feats],
        x_label="distinct partner countries",
        y_label="external connections (%)",
        title=f"k-means clusters (k={model.k})",
        vlines=[cuts.partners_cut],
        hlines=[cuts.share_cut],
        metadata={
            "k": cfg.k, "seed": cfg.seed, "restarts": cfg.restarts, "tol": cfg.tol,
            "max_iter": cfg.max_iter, "wcss": f"{model.wcss:.6f}",
            "share_cut": cuts.share_cut, "partners_cut": cuts.partners_cut,
        },
    )
    write_outputs(cfg.out_dir, {
        "clusters.csv": clusters_to_csv(feats, model),
        "clusters.svg": render_scatter(spec),
    })
    print(model.summary())
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    params = cfg.params()
    traj = dynamics.simulate(params, t_end=cfg.t_end, dt=cfg.dt)
    curve = dynamics.fig3_curve(traj)
    meta = {**asdict(params), "dt": cfg.dt, "t_end": cfg.t_end, "values": "illustrative, not fitted"}
    idx = _downsample(len(traj))
    fig2 = ScatterPlotSpec(
        points=[(float(traj.t[i]), float(traj.x[i]), 0) for i in idx],
        x_label="time", y_label="connections x", title="developing-country connections over time",
        line=True, metadata=meta,
    )
    hlines = [dynamics.foreign_share_asymptote(params)] if params.rate > 0 else []
    fig3 = ScatterPlotSpec(
        points=[(curve[i][0], curve[i][1], 0) for i in idx],
        x_label="self connections S", y_label="foreign connections (%)",
        title="self connections vs. foreign share", hlines=hlines, line=True, metadata=meta,
    )
    write_outputs(cfg.out_dir, {
        "trajectory.csv": dynamics.trajectory_to_csv(traj),
        "fig2.svg": render_scatter(fig2),
        "fig3.csv": dynamics.fig3_to_csv(curve),
        "fig3.svg": render_scatter(fig3),
    })
    return 0


def cmd_synthesize(cfg: RunConfig) -> int:
    graph = synthesize_graph(cfg.seed, cfg.n_countries)
    write_outputs(cfg.out_dir, {"edges.csv": write_graph(graph)})
    return 0


def _describe(f) -> str:
    return (f"{f.country} distinct_partners={f.distinct_partners} "
            f"external_share_pct={f.external_share_pct:.6f} self_weight={f.self_weight} "
            f"external_weight={f.external_weight}")


def report_text(feats, cuts: QuadrantThresholds) -> str:
    by_name = {f.country: f for f in feats}
    ext = extremes(feats)
    counts = quadrant_counts(feats, cuts)
    lines = [
        f"countries: {len(feats)}",
        f"thresholds: share_cut={cuts.share_cut:.6f} partners_cut={cuts.partners_cut:g}",
        f"top_right: {_describe(by_name[ext.top_right])}",
        f"bottom_left: {_describe(by_name[ext.bottom_left])}",
        f"fully_external: {len(ext.fully_external)}",
    ]
    lines.extend(f"  {_describe(by_name[c])}" for c in ext.fully_external)
    lines.append("quadrants: " + " ".join(f"{q.value}={counts[q]}" for q in Quadrant))
    return "\n".join(lines) + "\n"


def cmd_report(cfg: RunConfig) -> int:
    feats = compute_features(load_graph(cfg.input))
    sys.stdout.write(report_text(feats, cfg.thresholds(feats)))
    return 0


HANDLERS = {
    "features": cmd_features,
    "cluster": cmd_cluster,
    "simulate": cmd_simulate,
    "synthesize": cmd_synthesize,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    d = RunConfig()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="edge-list CSV (source,target,weight)")
    common.add_argument("--out-dir", default=d.out_dir, help="directory for output files")
    common.add_argument("--k", type=int, default=d.k)
    common.add_argument("--seed", type=int, default=d.seed)
    common.add_argument("--restarts", type=int, default=d.restarts)
    common.add_argument("--tol", type=float, default=d.tol)
    common.add_argument("--max-iter", type=int, default=d.max_iter)
    common.add_argument("--alpha", type=float, default=d.alpha)
    common.add_argument("--beta", type=float, default=d.beta)
    common.add_argument("--y0", type=float, default=d.y0)
    common.add_argument("--x0", type=float, default=d.x0)
    common.add_argument("--p0", type=float, default=d.p0)
    common.add_argument("--dt", type=float, default=d.dt)
    common.add_argument("--t-end", type=float, default=d.t_end)
    common.add_argument("--n-countries", type=int, default=d.n_countries)
    common.add_argument("--share-cut", type=float, default=None)
    common.add_argument("--partners-cut", type=float, default=None)
    common.add_argument("--print-config", action="store_true", help="print the resolved configuration and exit")

    parser = argparse.ArgumentParser(prog="collabnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("features", parents=[common], help="write per-country features CSV")
    sub.add_parser("cluster", parents=[common], help="k-means clusters CSV and scatter SVG")
    sub.add_parser("simulate", parents=[common], help="simulate the growth model")
    sub.add_parser("synthesize", parents=[common], help="write a synthetic edge list")
    sub.add_parser("report", parents=[common], help="print extremes and quadrant counts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    names = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in names})
    try:
        cfg.validate()
        if args.print_config:
            print(json.dumps(asdict(cfg), indent=2, sort_keys=True))
            return 0
        return HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"collabnet: configuration error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"collabnet: input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
