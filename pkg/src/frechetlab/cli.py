"""Command-line front end.

Reads curves, laws and sample batches from files, dispatches to the
registered distances, and emits plain values, JSON records, pairwise
CSV matrices, or free-space SVGs.

Exit codes: 0 success, 1 computation error, 2 usage or parse error,
3 refusal for metrics that are declared but have no algorithm here.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import curves, divergences, gaussian, laws

UNIMPLEMENTED = {
    "prokhorov": "prokhorov is defined through epsilon-enlargements of events; "
    "no computable algorithm for it ships in this library",
    "skorokhod": "skorokhod balances value mismatch against time distortion; "
    "no computable algorithm for it ships in this library",
}

CURVE_METRICS = ("frechet", "discrete-frechet", "dtw", "hausdorff", "closed-frechet", "shortest", "maxmin")
LAW_METRICS = ("wasserstein", "w1-area", "winf", "kolmogorov", "levy1", "levy2", "frechet1957", "gini")
GAUSS_METRICS = ("w2", "fid", "gelbrich")
DIV_METRICS = ("tv", "kl", "js", "hellinger", "bhattacharyya", "energy", "mmd", "sinkhorn")


class Refusal(Exception):
    pass


def format_value(v: float) -> str:
    """Locale-independent decimal text with a fixed-width mantissa."""
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0.0 or 1e-3 <= abs(v) < 1e7:
        return f"{v:.12f}"
    return f"{v:.12e}"


def _load_curve(path):
    return curves.load_polyline_csv(path)


def _load_law(path):
    return laws.load_law(path)


def _load_samples(path):
    values = []
    for line in open(path):
        line = line.strip()
        if line and not line.startswith("#"):
            values.append(float(line))
    if not values:
        raise ValueError(f"{path}: no samples found")
    return values


def _load_batch(path):
    return gaussian.load_batch_csv(path)


def _load_law_d(path):
    return divergences.load_law_d(path)


def _compute_curve(metric, a, b, ns):
    if metric == "frechet":
        r = curves.frechet_distance(a, b, ns.tol)
        return r.value, r.bracket, {"tol": ns.tol}
    if metric == "discrete-frechet":
        return curves.discrete_frechet(a, b), None, {}
    if metric == "dtw":
        return curves.dtw(a, b), None, {}
    if metric == "hausdorff":
        return curves.hausdorff(a, b, ns.resolution), None, {"resolution": ns.resolution}
    if metric == "closed-frechet":
        r = curves.closed_frechet(a, b, ns.tol, ns.shifts)
        return r.value, r.bracket, {"tol": ns.tol, "shifts": ns.shifts}
    if metric == "shortest":
        return curves.shortest_distance(a, b, ns.resolution), None, {"resolution": ns.resolution}
    if metric == "maxmin":
        return curves.directed_maxmin(a, b, ns.resolution), None, {"resolution": ns.resolution}
    raise ValueError(f"unknown curve metric {metric}")


def _compute_law(metric, a, b, ns):
    if metric == "wasserstein":
        return laws.wasserstein_p(a, b, ns.p), None, {"p": ns.p}
    if metric == "w1-area":
        return laws.w1_cdf_area(a, b), None, {}
    if metric == "winf":
        return laws.w_infinity(a, b), None, {}
    if metric == "kolmogorov":
        return laws.kolmogorov(a, b), None, {}
    if metric == "levy1":
        return laws.levy_1950_def1(a, b), None, {}
    if metric == "levy2":
        return laws.levy_1950_def2(a, b, ns.point_metric), None, {"point_metric": ns.point_metric}
    if metric == "frechet1957":
        return laws.frechet_1957_distance(a, b), None, {}
    raise ValueError(f"unknown law metric {metric}")


def _compute_gauss(metric, a, b, ns):
    if metric == "w2":
        value = gaussian.gaussian_w2(gaussian.estimate_gaussian(a), gaussian.estimate_gaussian(b))
        return value, None, {}
    if metric == "fid":
        return gaussian.fid(a, b), None, {}
    if metric == "gelbrich":
        ga, gb = gaussian.estimate_gaussian(a), gaussian.estimate_gaussian(b)
        return gaussian.gelbrich_bound(ga.mean, ga.cov, gb.mean, gb.cov), None, {}
    raise ValueError(f"unknown gauss metric {metric}")


def _compute_div(metric, a, b, ns):
    if metric == "tv":
        return divergences.total_variation(a, b), None, {}
    if metric == "kl":
        return divergences.kl(a, b), None, {}
    if metric == "js":
        return divergences.js(a, b), None, {}
    if metric == "hellinger":
        return divergences.hellinger(a, b), None, {}
    if metric == "bhattacharyya":
        return divergences.bhattacharyya_distance(a, b), None, {}
    if metric == "energy":
        return divergences.energy_distance(a, b), None, {}
    if metric == "mmd":
        return divergences.mmd(a, b, divergences.KernelSpec(ns.sigma)), None, {"sigma": ns.sigma}
    if metric == "sinkhorn":
        cfg = divergences.SinkhornConfig(ns.eps, ns.max_iters, ns.stop_tol)
        return divergences.sinkhorn_divergence(a, b, cfg), None, {"eps": ns.eps}
    raise ValueError(f"unknown divergence {metric}")


FAMILIES = {
    "curve-dist": (CURVE_METRICS, _load_curve, _compute_curve),
    "law-dist": (LAW_METRICS, _load_law, _compute_law),
    "gauss": (GAUSS_METRICS, _load_batch, _compute_gauss),
    "div": (DIV_METRICS, _load_law_d, _compute_div),
}


def _emit(ns, text: str):
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _run_pair(ns) -> int:
    metrics, loader, compute = FAMILIES[ns.command]
    if ns.metric in UNIMPLEMENTED:
        raise Refusal(UNIMPLEMENTED[ns.metric])
    if ns.metric not in metrics:
        print(f"error: unknown metric {ns.metric!r} for {ns.command}", file=sys.stderr)
        return 2
    if ns.command == "law-dist" and ns.metric == "gini":
        try:
            a = sorted(_load_samples(ns.file_a))
            b = sorted(_load_samples(ns.file_b))
        except (OSError, ValueError) as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        value, bracket, params = laws.gini_index(a, b, ns.p), None, {"p": ns.p}
    else:
        try:
            a = loader(ns.file_a)
            b = loader(ns.file_b)
        except (OSError, ValueError, KeyError) as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        value, bracket, params = compute(ns.metric, a, b, ns)
    if ns.format == "json":
        record = {"metric": ns.metric, "value": value, "params": params}
        if bracket is not None:
            record["bracket"] = [bracket[0], bracket[1]]
        _emit(ns, json.dumps(record, sort_keys=True))
    else:
        _emit(ns, format_value(value))
    return 0


def _run_freespace(ns) -> int:
    try:
        a = _load_curve(ns.file_a)
        b = _load_curve(ns.file_b)
    except (OSError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    svg = curves.free_space_svg(a, b, ns.eps)
    if ns.svg:
        with open(ns.svg, "w") as fh:
            fh.write(svg + "\n")
    else:
        print(svg)
    return 0


def _thread_count() -> int:
    raw = os.environ.get("FRECHET_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"FRECHET_THREADS must be an integer >= 1, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"FRECHET_THREADS must be >= 1, got {n}")
    return n


def _run_matrix(ns) -> int:
    metric = ns.metric
    if metric in UNIMPLEMENTED:
        raise Refusal(UNIMPLEMENTED[metric])
    for command, (metrics, loader, compute) in FAMILIES.items():
        if metric in metrics and metric != "gini":
            break
    else:
        print(f"error: unknown metric {metric!r}", file=sys.stderr)
        return 2
    try:
        names = sorted(
            f for f in os.listdir(ns.directory) if not f.startswith(".")
        )
        inputs = [loader(os.path.join(ns.directory, f)) for f in names]
    except (OSError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if not inputs:
        print("error: directory holds no inputs", file=sys.stderr)
        return 2
    pairs = [(i, j) for i in range(len(inputs)) for j in range(len(inputs))]

    def job(pair):
        i, j = pair
        value, _, _ = compute(metric, inputs[i], inputs[j], ns)
        return value

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(job, pairs))
    else:
        values = [job(pair) for pair in pairs]
    grid = {}
    for (i, j), v in zip(pairs, values):
        grid[i, j] = v
    lines = ["," + ",".join(names)]
    for i, name in enumerate(names):
        row = [format_value(grid[i, j]) for j in range(len(names))]
        lines.append(name + "," + ",".join(row))
    _emit(ns, "\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frechetlab",
        description="Distances between polygonal curves and probability laws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def numeric_options(p):
        p.add_argument("--tol", type=float, default=curves.DEFAULT_TOL)
        p.add_argument("--resolution", type=float, default=1e-3)
        p.add_argument("--shifts", type=int, default=1)
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--point-metric", choices=("euclidean", "taxicab"), default="euclidean")
        p.add_argument("--sigma", type=float, default=1.0)
        p.add_argument("--eps", type=float, default=1e-2)
        p.add_argument("--max-iters", type=int, default=100_000)
        p.add_argument("--stop-tol", type=float, default=1e-6)
        p.add_argument("--format", choices=("plain", "json"), default="plain")
        p.add_argument("--output", "-o", default=None)

    for name in ("curve-dist", "law-dist", "gauss", "div"):
        p = sub.add_parser(name)
        p.add_argument("metric")
        p.add_argument("file_a")
        p.add_argument("file_b")
        numeric_options(p)

    p = sub.add_parser("freespace")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("matrix")
    p.add_argument("directory")
    p.add_argument("--metric", required=True)
    numeric_options(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.command == "freespace":
            return _run_freespace(ns)
        if ns.command == "matrix":
            return _run_matrix(ns)
        return _run_pair(ns)
    except Refusal as exc:
        print(f"unimplemented: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # computation failure: name the error class
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(run())


if __name__ == "__main__":
    entry()
