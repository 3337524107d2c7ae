"""``repmetric`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or dimension error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from ._rng import UINT64_MAX
from .analysis import agglomerate, convergence_experiment, pairwise_distances, probe_generalization
from .analysis.distances import DistanceMatrix
from .approx import ApproxConfig, build_factor, ukp_lowrank
from .errors import ConfigError, DegenerateInputError, DimensionError, NumericError
from .kernels import KernelSpec, Representation, center_gram, gram_matrix
from .metrics import Metric, MetricConfig, ukp

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_BANDWIDTH = 0.1
DEFAULT_LAMBDA = 0.01


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _uint64(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v <= UINT64_MAX:
        raise argparse.ArgumentTypeError(f"seed out of uint64 range: {text}")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_kernel(p, lam: bool = True):
    p.add_argument("--kernel", choices=["linear", "rbf", "laplace"], default=None,
                   help="kernel family (default rbf)")
    p.add_argument("--bandwidth", type=float, default=None,
                   help=f"kernel bandwidth h (default {DEFAULT_BANDWIDTH} for rbf/laplace)")
    if lam:
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help=f"ridge parameter (default {DEFAULT_LAMBDA})")


def _add_approx(p):
    p.add_argument("--approx", choices=["none", "nystrom", "rff"], default="none")
    p.add_argument("--rank", type=int, default=None, help="rank budget D for --approx")
    p.add_argument("--seed", type=_uint64, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="repmetric", description="Kernel-based distances between representations.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gram", help="write the Gram matrix of one representation as CSV")
    _add_kernel(p, lam=False)
    p.add_argument("--center", action="store_true", help="double-center the Gram matrix")
    p.add_argument("--header", action="store_true", help="input CSV has a header row")
    p.add_argument("--out", type=Path)
    p.add_argument("input", type=Path)

    p = sub.add_parser("ukp", help="UKP distance between two representations")
    _add_kernel(p)
    _add_approx(p)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)

    p = sub.add_parser("compare", help="pairwise distance matrix as JSON")
    p.add_argument("--metric", choices=[m.value for m in Metric], default="ukp")
    _add_kernel(p)
    _add_approx(p)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("inputs", type=Path, nargs="+")

    p = sub.add_parser("cluster", help="agglomerative clustering of a distance matrix")
    p.add_argument("--dist", type=Path, required=True)
    p.add_argument("--linkage", choices=["average", "single", "complete"], default="average")
    p.add_argument("--clusters", type=int, default=None, help="also report a flat cut into this many clusters")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("probe", help="correlate distances with KRR prediction disagreement")
    _add_kernel(p)
    p.add_argument("--metric", action="append", default=None,
                   help="metric[:kernel], repeatable (default: ukp and cka:linear)")
    p.add_argument("--tasks", type=int, default=10)
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--seed", type=_uint64, default=0)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("inputs", type=Path, nargs="+")

    p = sub.add_parser("converge", help="empirical convergence rate of the squared UKP estimate")
    _add_kernel(p)
    p.add_argument("--n-grid", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--n-ref", type=int, default=4096)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--dim", type=int, default=10, help="input dimension of the synthetic pair")
    p.add_argument("--dims", type=_int_list, default=[5, 8], help="output dimensions k,l of the synthetic maps")
    p.add_argument("--seed", type=_uint64, default=0)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("pool", type=Path, nargs="*", help="optional two CSVs used as the sample pool")

    sub.add_parser("selftest", help="run the built-in numerical self-checks")
    return parser


def _kernel(args) -> KernelSpec:
    family = args.kernel or "rbf"
    if family == "linear":
        if args.bandwidth is not None:
            raise UsageError("--bandwidth does not apply to the linear kernel")
        return KernelSpec.linear()
    return KernelSpec(family, DEFAULT_BANDWIDTH if args.bandwidth is None else args.bandwidth)


def _lam(args) -> float:
    return DEFAULT_LAMBDA if args.lam is None else args.lam


def _approx(args) -> ApproxConfig | None:
    if args.approx == "none":
        if args.rank is not None:
            raise UsageError("--rank requires --approx nystrom or --approx rff")
        return None
    if args.rank is None:
        raise UsageError(f"--approx {args.approx} requires --rank")
    return ApproxConfig(args.approx, args.rank, args.seed)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        io.write_atomic(out, text)


def _metric_config(name: str, kernel: KernelSpec, lam: float | None) -> MetricConfig:
    metric = Metric(name)
    if metric in (Metric.CKA, Metric.CCA):
        return MetricConfig(metric, None if metric is Metric.CCA else kernel, None)
    if metric is Metric.GULP:
        return MetricConfig(metric, None, lam)
    return MetricConfig(metric, kernel, lam)


def cmd_gram(args) -> None:
    K = gram_matrix(_kernel(args), io.read_matrix(args.input, args.header))
    if args.center:
        K = center_gram(K)
    _emit(io.format_matrix_csv(K), args.out)


def cmd_ukp(args) -> None:
    kernel = _kernel(args)
    lam = _lam(args)
    approx = _approx(args)
    A = io.read_matrix(args.a, args.header)
    B = io.read_matrix(args.b, args.header)
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"{args.a} has {A.shape[0]} rows but {args.b} has {B.shape[0]}")
    if approx is None:
        value = ukp(gram_matrix(kernel, A), gram_matrix(kernel, B), lam)
    else:
        value = ukp_lowrank(build_factor(kernel, A, approx), build_factor(kernel, B, approx), lam)
    _emit(io.fmt_float(value.value) + "\n", args.out)


def cmd_compare(args) -> None:
    metric = Metric(args.metric)
    if metric in (Metric.CKA, Metric.CCA) and args.lam is not None:
        raise UsageError(f"--lambda does not apply to --metric {metric.value}")
    if metric in (Metric.GULP, Metric.CCA) and (args.kernel not in (None, "linear") or args.bandwidth is not None):
        raise UsageError(f"--metric {metric.value} always uses the linear kernel")
    kernel = KernelSpec.linear() if metric in (Metric.GULP, Metric.CCA) else _kernel(args)
    lam = None if metric in (Metric.CKA, Metric.CCA) else _lam(args)
    config = _metric_config(metric.value, kernel, lam)
    approx = _approx(args)
    if len(args.inputs) < 2:
        raise UsageError("compare needs at least two input files")
    reps = [Representation(io.read_matrix(p, args.header), p.stem) for p in args.inputs]
    dm = pairwise_distances(reps, config, approx)
    doc = {"labels": dm.labels, "metric": config.to_dict(), "matrix": dm.values}
    if approx is not None:
        doc["approx"] = {"method": approx.method.value, "rank": approx.D, "seed": approx.seed}
    _emit(io.dumps(doc) + "\n", args.out)


def _load_distances(path: Path) -> DistanceMatrix:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        labels = [str(x) for x in doc["labels"]]
        values = np.asarray(doc["matrix"], dtype=np.float64)
        meta = doc.get("metric", {})
    except OSError as exc:
        raise io.DataFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise io.DataFileError(f"{path}: not a distance-matrix JSON document ({exc})") from None
    if values.shape != (len(labels), len(labels)):
        raise io.DataFileError(f"{path}: matrix shape {values.shape} does not match {len(labels)} labels")
    config = None
    try:
        kernel = KernelSpec(meta.get("kernel") or "linear", meta.get("bandwidth"))
        config = MetricConfig(meta.get("name", "ukp"), kernel, meta.get("lambda"))
    except (ConfigError, TypeError):
        pass
    return DistanceMatrix(labels, values, config)


def cmd_cluster(args) -> None:
    dm = _load_distances(args.dist)
    tree = agglomerate(dm, args.linkage)
    doc = {
        "labels": tree.labels,
        "linkage": tree.linkage.value,
        "merges": [m.to_dict() for m in tree.merges],
    }
    if args.clusters is not None:
        doc["clusters"] = tree.cut(args.clusters).tolist()
    _emit(io.dumps(doc) + "\n", args.out)


def cmd_probe(args) -> None:
    kernel = _kernel(args)
    lam = _lam(args)
    configs = []
    for token in args.metric or ["ukp", "cka:linear"]:
        name, _, kname = token.partition(":")
        if name not in {m.value for m in Metric}:
            raise UsageError(f"unknown metric {name!r}")
        mk = kernel
        if kname:
            if kname not in ("linear", "rbf", "laplace"):
                raise UsageError(f"unknown kernel {kname!r} in --metric {token}")
            mk = KernelSpec.linear() if kname == "linear" else KernelSpec(kname, kernel.bandwidth or DEFAULT_BANDWIDTH)
        configs.append(_metric_config(name, mk, lam))
    reps = [Representation(io.read_matrix(p, args.header), p.stem) for p in args.inputs]
    report = probe_generalization(reps, args.tasks, lam, kernel, configs, args.seed, args.n_train)
    _emit(io.dumps(report.to_dict()) + "\n", args.out)


def cmd_converge(args) -> None:
    kernel = _kernel(args)
    lam = 1.0 if args.lam is None else args.lam
    if args.pool:
        if len(args.pool) != 2:
            raise UsageError("converge takes either no files or exactly two pool files")
        A = io.read_matrix(args.pool[0], args.header)
        B = io.read_matrix(args.pool[1], args.header)
        if A.shape[0] != B.shape[0]:
            raise DimensionError("pool files must have the same number of rows")
        n_ref = A.shape[0]

        def generator(n, rng):
            return A, B
    else:
        from .synthetic import linear_map_pair

        if len(args.dims) != 2:
            raise UsageError("--dims takes two comma-separated integers k,l")
        n_ref = args.n_ref
        generator = linear_map_pair(args.dim, args.dims[0], args.dims[1], args.seed)
    report = convergence_experiment(generator, kernel, lam, args.n_grid, n_ref, args.repeats, args.seed)
    _emit(io.dumps(report.to_dict()) + "\n", args.out)


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


COMMANDS = {
    "gram": cmd_gram,
    "ukp": cmd_ukp,
    "compare": cmd_compare,
    "cluster": cmd_cluster,
    "probe": cmd_probe,
    "converge": cmd_converge,
    "selftest": cmd_selftest,
}


def run_cli(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        rc = COMMANDS[args.command](args)
        return EXIT_OK if rc is None else rc
    except (UsageError, ConfigError) as exc:
        print(f"repmetric: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionError, DegenerateInputError) as exc:
        print(f"repmetric: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"repmetric: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
