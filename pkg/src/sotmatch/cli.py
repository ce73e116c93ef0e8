"""Command-line entry point: ``sotmatch {match,ssot,bench}``.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 no candidate
survived the SSOT feature filter.
"""

import argparse
import sys
from pathlib import Path

from .bench import ErConfig, records_to_csv, run_benchmark, summary_to_csv
from .errors import (FeatureKindMismatch, DimensionMismatch, GraphError,
                     NoCandidates, ParseError, QueryTooLarge, SotMatchError)
from .graphio import load_graph, save_result
from .matcher import MatchConfig, sot_match, ssot_match

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_NO_CANDIDATES = 0, 2, 3, 4


class _InputError(Exception):
    pass


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _alpha(text):
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in [0, 1]")
    return x


def _positive_int(text):
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return x


def _nonneg_float(text):
    x = float(text)
    if x < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return x


def _add_solver_flags(p):
    p.add_argument("--source", required=True, type=Path)
    p.add_argument("--query", required=True, type=Path)
    p.add_argument("--alpha", type=_alpha, default=0.5)
    p.add_argument("--delta", type=_positive_float, default=1e-9)
    p.add_argument("--max-iter", type=_positive_int, default=1000)
    p.add_argument("--no-normalize", action="store_true",
                   help="use the raw objective instead of the normalized one")
    p.add_argument("--out", type=Path, help="write the result document here")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sotmatch",
        description="Subgraph matching with partial fused Gromov-Wasserstein transport.")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_solver_flags(sub.add_parser("match", help="global SOT matching"))

    ssot = sub.add_parser("ssot", help="sliding-window SSOT matching")
    _add_solver_flags(ssot)
    ssot.add_argument("--threshold", type=_positive_float, default=1.0,
                      help="feature filter threshold (default 1.0)")

    bench = sub.add_parser("bench", help="planted-query Erdos-Renyi benchmark")
    bench.add_argument("--n", type=_positive_int, required=True)
    bench.add_argument("--m", type=_positive_int, default=5)
    bench.add_argument("--trials", type=_positive_int, required=True)
    bench.add_argument("--noise", type=_nonneg_float, default=0.0)
    bench.add_argument("--method", choices=("sot", "ssot"), default="ssot")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--features", choices=("uniform", "levels20"),
                       default="uniform")
    bench.add_argument("--alpha", type=_alpha, default=0.5)
    bench.add_argument("--threshold", type=_positive_float, default=1.0)
    bench.add_argument("--csv", type=Path, required=True,
                       help="per-trial CSV output")
    bench.add_argument("--summary-csv", type=Path,
                       help="summary CSV output (default: <csv>_summary.csv)")
    bench.add_argument("--no-timing", action="store_true",
                       help="leave query_time_s empty so output is reproducible")
    return parser


def _load_pair(args):
    try:
        return load_graph(args.source), load_graph(args.query)
    except OSError as exc:
        raise _InputError(f"cannot read graph: {exc}") from exc
    except (ParseError, FeatureKindMismatch, GraphError) as exc:
        raise _InputError(f"invalid graph file: {exc}") from exc


def _report(res, out):
    print(f"objective={res.objective!r}")
    print("matched=" + ",".join(sorted(str(v) for v in res.matched_nodes)))
    print("mapping=" + ",".join(f"{q}:{s}" for q, s in res.mapping.items()))
    print(f"iterations={res.iterations}")
    print(f"elapsed_s={res.elapsed:.6f}")
    if res.candidate_stats is not None:
        print("candidates=" + ",".join(
            f"{k}:{v}" for k, v in res.candidate_stats.items()))
    if out is not None:
        save_result(res, out)


def _run_match(args, matcher):
    source, query = _load_pair(args)
    cfg = MatchConfig(alpha=args.alpha, delta=args.delta, max_iter=args.max_iter,
                      normalize=not args.no_normalize,
                      feature_threshold=getattr(args, "threshold", 1.0))
    if query.n_nodes > source.n_nodes or (
            matcher is sot_match and query.n_nodes == source.n_nodes):
        raise _InputError("query too large: it must have fewer nodes than the source")
    try:
        res = matcher(source, query, cfg)
    except (QueryTooLarge, FeatureKindMismatch, DimensionMismatch,
            GraphError) as exc:
        raise _InputError(str(exc)) from exc
    _report(res, args.out)


def _run_bench(args):
    if args.m >= args.n:
        raise _InputError("--m must be smaller than --n")
    cfg = ErConfig(n=args.n, m=args.m, feature_model=args.features,
                   noise_sigma=args.noise, trials=args.trials, seed=args.seed)
    mcfg = MatchConfig(alpha=args.alpha, feature_threshold=args.threshold)
    records, summary = run_benchmark(cfg, args.method, mcfg,
                                     timing=not args.no_timing)
    summary_path = args.summary_csv or args.csv.with_name(
        args.csv.stem + "_summary.csv")
    args.csv.write_text(records_to_csv(records), encoding="utf-8")
    summary_path.write_text(summary_to_csv([summary]), encoding="utf-8")
    print(f"method={summary['method']} trials={summary['trials']} "
          f"success_rate={summary['success_rate']!r} "
          f"mean_query_time_s={summary['mean_query_time_s']!r}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        if args.command == "match":
            _run_match(args, sot_match)
        elif args.command == "ssot":
            _run_match(args, ssot_match)
        else:
            _run_bench(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoCandidates as exc:
        print(f"error: {exc} (raise --threshold)", file=sys.stderr)
        return EXIT_NO_CANDIDATES
    except (SotMatchError, ArithmeticError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
