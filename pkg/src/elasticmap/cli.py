"""Command-line front end.

Two subcommands:

* ``reproduce`` fits one demonstration set and writes the reproduction
  plus weight/energy/metric artifacts.
* ``benchmark`` compares weighting methods (cartesian / uniform / auto)
  across datasets and writes a raw + worst-normalized metric table and
  plot-ready per-demo data.

Exit codes: 0 success, 1 usage or input error, 2 numerical degeneracy.
Config precedence is flags > manifest file > defaults; the manifest is a
JSON object whose keys mirror the long flag names.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import em, metrics
from .dataset import SYNTH_SHAPES, build_set, load_demonstrations, synth_demos
from .errors import DegenerateSystemError, DimensionError, FormatError, SizeError
from .solver import PointConstraint

METHODS = ("cartesian", "uniform", "auto")
_METHOD_WEIGHTS = {
    "cartesian": (1.0, 0.0, 0.0),
    "uniform": (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    "auto": None,
}
METRIC_NAMES = ("frechet", "sse", "angular", "jerk")


class UsageError(Exception):
    """Bad flags, manifest or input files (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value):
    return format(float(value), ".17g")


def _parse_point(text, flag):
    try:
        return [float(f) for f in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _parse_constraint(text):
    head, sep, tail = text.partition(":")
    if not sep:
        raise UsageError(
            f"--constraint expects idx:x,y[,z], got {text!r}")
    try:
        idx = int(head)
    except ValueError:
        raise UsageError(f"--constraint node index {head!r} is not an integer") from None
    return idx, _parse_point(tail, "--constraint")


def _add_common(parser):
    parser.add_argument("--manifest", help="JSON file with defaults for the flags below")
    parser.add_argument("--input", action="append", help="demonstration file (repeatable)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt",
                        help="input format (default: by file extension)")
    parser.add_argument("--nodes", type=int, help="number of chain nodes (default 100)")
    parser.add_argument("--lambda0", type=float, help="stretching balance constant (> 1)")
    parser.add_argument("--mu0", type=float, help="bending balance constant (> 1)")
    parser.add_argument("--max-iters", type=int, dest="max_iters", help="iteration cap")
    parser.add_argument("--freeze-tuning", action="store_true", default=None,
                        dest="freeze_tuning",
                        help="tune weights on the first iteration only")
    parser.add_argument("--seed", type=int, help="seed for synthetic data")
    parser.add_argument("--out", help="output directory (required)")
    parser.add_argument("--svg", action="store_true", default=None,
                        help="also write an overlay.svg rendering")


def build_parser():
    parser = _Parser(prog="elasticmap",
                     description="Trajectory learning with multi-coordinate elastic maps")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("reproduce", help="fit one demonstration set")
    _add_common(rep)
    rep.add_argument("--method", choices=METHODS,
                     help="weighting method (default auto)")
    rep.add_argument("--constraint", action="append", metavar="IDX:X,Y[,Z]",
                     help="pin node IDX (0-based) to a point (repeatable)")
    rep.add_argument("--start", metavar="X,Y[,Z]", help="pin the first node")
    rep.add_argument("--end", metavar="X,Y[,Z]", help="pin the last node")

    ben = sub.add_parser("benchmark", help="compare weighting methods on datasets")
    _add_common(ben)
    ben.add_argument("--method", action="append", choices=METHODS,
                     help="method to run (repeatable; default all three)")
    ben.add_argument("--synthetic", action="append", metavar="SHAPE",
                     help=f"synthetic dataset to include, one of {SYNTH_SHAPES}")
    ben.add_argument("--n-demos", type=int, dest="n_demos",
                     help="demos per synthetic dataset (default 5)")
    ben.add_argument("--noise-sd", type=float, dest="noise_sd",
                     help="per-point noise of synthetic demos (default 0.05)")
    ben.add_argument("--offset-sd", type=float, dest="offset_sd",
                     help="per-demo positional offset of synthetic demos (default 0)")
    ben.add_argument("--samples", type=int, help="points per synthetic demo (default 100)")
    return parser


_DEFAULTS = {
    "input": None, "fmt": None, "nodes": 100, "lambda0": 1.5, "mu0": 1.5,
    "max_iters": 100, "freeze_tuning": False, "seed": 0, "out": None,
    "svg": False, "method": None, "constraint": None, "start": None,
    "end": None, "synthetic": None, "n_demos": 5, "noise_sd": 0.05,
    "offset_sd": 0.0, "samples": 100,
}

_MANIFEST_ALIASES = {"format": "fmt", "max-iters": "max_iters",
                     "freeze-tuning": "freeze_tuning", "n-demos": "n_demos",
                     "noise-sd": "noise_sd", "offset-sd": "offset_sd"}


def _load_manifest(path):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"manifest not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest {p} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"manifest {p} must be a JSON object")
    return {_MANIFEST_ALIASES.get(k, k): v for k, v in doc.items()}


def _merge(args):
    cfg = dict(_DEFAULTS)
    if args.manifest:
        manifest = _load_manifest(args.manifest)
        unknown = set(manifest) - set(cfg)
        if unknown:
            raise UsageError(f"unknown manifest keys: {sorted(unknown)}")
        cfg.update(manifest)
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["out"] is None:
        raise UsageError("--out is required")
    for key in ("input", "constraint", "synthetic"):
        if isinstance(cfg[key], str):
            cfg[key] = [cfg[key]]
    return cfg


def _fit_config(cfg, method):
    try:
        return em.FitConfig(
            n_nodes=cfg["nodes"], lambda0=cfg["lambda0"], mu0=cfg["mu0"],
            max_iter=cfg["max_iters"],
            retune_every_iteration=not cfg["freeze_tuning"],
            fixed_weights=_METHOD_WEIGHTS[method])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_csv_matrix(path, rows):
    lines = [",".join(_fmt(v) for v in row) for row in np.asarray(rows)]
    path.write_text("\n".join(lines) + "\n")


def _write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_fit_artifacts(outdir, result, dset):
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv_matrix(outdir / "reproduction.csv", result.nodes)
    _write_json(outdir / "weights.json", {
        "iterations": [w.to_dict() for w in result.weight_trace],
        "final": result.weights.to_dict(),
    })
    _write_json(outdir / "energies.json", {
        "iterations": [e.to_dict() for e in result.energy_trace],
        "final": result.energies.to_dict(),
        "converged": result.converged,
        "n_iterations": result.iterations,
    })
    rep = metrics.report(result.nodes, dset)
    _write_json(outdir / "metrics.json", rep.to_dict())
    return rep


def _write_svg(path, dset, nodes):
    data = np.vstack([dset.g[:, :2], nodes[:, :2]])
    lo, hi = data.min(axis=0), data.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    size = 500.0

    def pts(arr):
        xy = (arr[:, :2] - lo) / span
        return " ".join(f"{size * p[0]:.2f},{size * (1 - p[1]):.2f}" for p in xy)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="-10 -10 {size + 20} {size + 20}">']
    for demo in dset.demos:
        parts.append(f'<polyline points="{pts(demo)}" fill="none" '
                     'stroke="#999" stroke-width="1.5"/>')
    parts.append(f'<polyline points="{pts(nodes)}" fill="none" '
                 'stroke="#c22" stroke-width="2.5"/>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")


def _load_dataset(cfg):
    if not cfg["input"]:
        raise UsageError("no --input files given")
    demos = load_demonstrations([Path(p) for p in cfg["input"]], fmt=cfg["fmt"])
    return build_set(demos)


def cmd_reproduce(cfg):
    dset = _load_dataset(cfg)
    constraints = []
    for spec in cfg["constraint"] or []:
        idx, point = spec if isinstance(spec, tuple) else _parse_constraint(spec)
        constraints.append(PointConstraint(idx, point))
    if cfg["start"] is not None:
        constraints.append(PointConstraint(0, _parse_point(cfg["start"], "--start")))
    if cfg["end"] is not None:
        constraints.append(
            PointConstraint(cfg["nodes"] - 1, _parse_point(cfg["end"], "--end")))
    method = cfg["method"] or "auto"
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; expected one of {METHODS}")
    result = em.fit(dset, constraints, _fit_config(cfg, method))
    outdir = Path(cfg["out"])
    _write_fit_artifacts(outdir, result, dset)
    if cfg["svg"]:
        _write_svg(outdir / "overlay.svg", dset, result.nodes)
    return 0


def _benchmark_datasets(cfg):
    datasets = []
    for i, shape in enumerate(cfg["synthetic"] or []):
        if shape not in SYNTH_SHAPES:
            raise UsageError(
                f"unknown synthetic shape {shape!r}; expected one of {SYNTH_SHAPES}")
        demos = synth_demos(shape, cfg["n_demos"], cfg["noise_sd"],
                            seed=cfg["seed"] + i, n_samples=cfg["samples"],
                            offset_sd=cfg["offset_sd"])
        datasets.append((shape, build_set(demos)))
    for path in cfg["input"] or []:
        demos = load_demonstrations(Path(path), fmt=cfg["fmt"])
        datasets.append((Path(path).stem, build_set(demos)))
    if not datasets:
        raise UsageError("benchmark needs --synthetic shapes and/or --input files")
    return datasets


def cmd_benchmark(cfg):
    methods = cfg["method"] if cfg["method"] is not None else list(METHODS)
    if not methods:
        raise UsageError("benchmark needs at least one --method")
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; expected one of {METHODS}")
    datasets = _benchmark_datasets(cfg)
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)

    per_cell = {}  # (method) -> list of MetricsReport across datasets
    any_ok = False
    for name, dset in datasets:
        mean = dset.mean_demo()
        constraints = [PointConstraint(0, mean[0]),
                       PointConstraint(cfg["nodes"] - 1, mean[-1])]
        boxplot_rows = []
        for method in methods:
            run_dir = outdir / name / method
            try:
                result = em.fit(dset, constraints, _fit_config(cfg, method))
                rep = _write_fit_artifacts(run_dir, result, dset)
                if cfg["svg"]:
                    _write_svg(run_dir / "overlay.svg", dset, result.nodes)
            except DegenerateSystemError as exc:
                print(f"benchmark: {name}/{method} failed: {exc}", file=sys.stderr)
                continue
            any_ok = True
            per_cell.setdefault(method, []).append(rep)
            for i, demo in enumerate(dset.demos):
                boxplot_rows.append((method, "frechet", str(i),
                                     _fmt(metrics.frechet(result.nodes, demo))))
                boxplot_rows.append((method, "sse", str(i),
                                     _fmt(metrics.sse(result.nodes, demo))))
                boxplot_rows.append((method, "angular", str(i),
                                     _fmt(metrics.angular_similarity(result.nodes, demo))))
            boxplot_rows.append((method, "jerk", "", _fmt(rep.jerk)))
        if boxplot_rows:
            lines = ["method,metric,demo,value"]
            lines += [",".join(r) for r in boxplot_rows]
            (outdir / name / "boxplot_data.csv").write_text("\n".join(lines) + "\n")

    if not any_ok:
        raise DegenerateSystemError("every benchmark run failed")

    raw = {}
    for method in methods:
        reps = per_cell.get(method)
        if reps:
            raw[method] = {m: float(np.mean([getattr(r, m) for r in reps]))
                           for m in METRIC_NAMES}
    worst = {m: max(raw[meth][m] for meth in raw) for m in METRIC_NAMES}
    header = ["method"] + list(METRIC_NAMES) + [f"{m}_norm" for m in METRIC_NAMES]
    lines = [",".join(header)]
    for method in methods:
        if method in raw:
            row = [method]
            row += [_fmt(raw[method][m]) for m in METRIC_NAMES]
            row += [_fmt(raw[method][m] / worst[m]) if worst[m] > 0 else _fmt(1.0)
                    for m in METRIC_NAMES]
        else:
            row = [method] + [""] * (2 * len(METRIC_NAMES))
        lines.append(",".join(row))
    (outdir / "table.csv").write_text("\n".join(lines) + "\n")
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _merge(args)
        if args.command == "reproduce":
            return cmd_reproduce(cfg)
        return cmd_benchmark(cfg)
    except (UsageError, FormatError, SizeError, DimensionError, ValueError) as exc:
        print(f"elasticmap: error: {exc}", file=sys.stderr)
        return 1
    except DegenerateSystemError as exc:
        print(f"elasticmap: degenerate system: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
