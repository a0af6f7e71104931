"""Command-line front end: generate, verify, bound, locate, bench.

Exit codes: 0 success, 1 verification failed, 2 no array within the
timeout, 3 interaction catalog over the memory budget, 64 usage error.
"""

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from .anneal import AnnealParams, STRATEGIES
from .cost import CapacityError
from .model import ModelParseError, load_array, parse_model, save_array, format_array
from .search import (
    SearchBudget,
    _construct_worker,
    construct,
    derive_seed,
    initial_bounds,
    parallel_construct,
)
from .verify import verify, locate_fault

EXIT_OK = 0
EXIT_NOT_LOCATING = 1
EXIT_NO_ARRAY = 2
EXIT_CAPACITY = 3
EXIT_USAGE = 64

_CLI_COLLISION_CAP = 1000  # keep reports bounded on degenerate inputs


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _add_anneal_flags(p):
    p.add_argument("--weight", type=float, default=4.0, help="uncovered-interaction penalty weight (default 4.0)")
    p.add_argument("--t-init", type=float, default=0.5, help="initial temperature (default 0.5)")
    p.add_argument("--k-max", type=int, default=2048, help="iterations per annealing run (default 2048)")
    p.add_argument("--cooling", type=float, default=0.999, help="geometric cooling rate (default 0.999)")
    p.add_argument("--strategy", choices=STRATEGIES, default="proposed", help="neighbor selection strategy")
    p.add_argument("--max-retries", type=int, default=3, help="consecutive failures ending the shrink phase (default 3)")
    p.add_argument("--timeout", type=float, default=3600.0, help="wall-clock budget in seconds per run (default 3600)")
    p.add_argument("--seed", type=int, default=0, help="root RNG seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="locaray", description="Construct and verify locating arrays for combinatorial interaction testing.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct a locating array")
    g.add_argument("--model", required=True, help="model spec, e.g. '2^13 4^5' or '2,2,2,3'")
    g.add_argument("--strength", type=int, required=True, help="interaction strength t")
    _add_anneal_flags(g)
    g.add_argument("--workers", type=int, default=1, help="independent parallel restarts (default 1)")
    g.add_argument("--out", help="array file to write (stdout when omitted)")

    v = sub.add_parser("verify", help="check the covering/locating properties of an array file")
    v.add_argument("--array", required=True, help="array file to check")
    v.add_argument("--strength", type=int, help="override the strength recorded in the file")

    b = sub.add_parser("bound", help="print the search bounds for a model")
    b.add_argument("--model", required=True)
    b.add_argument("--strength", type=int, required=True)

    l = sub.add_parser("locate", help="map a failing-test set to candidate faulty interactions")
    l.add_argument("--array", required=True)
    l.add_argument("--failing", required=True, help="comma-separated 1-based failing row indices (empty for none)")
    l.add_argument("--strength", type=int, help="override the strength recorded in the file")

    be = sub.add_parser("bench", help="run a benchmark suite and emit a CSV summary")
    be.add_argument("--suite", help="suite file of 'name,model' lines (bundled 35-instance suite when omitted)")
    be.add_argument("--runs", type=int, default=5, help="runs per instance (default 5)")
    be.add_argument("--strength", type=int, default=2)
    be.add_argument("--timeout", type=float, default=3600.0, help="per-run timeout in seconds (default 3600)")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--workers", type=int, default=1, help="parallel runs per instance (default 1)")
    be.add_argument("--out", help="CSV path (stdout when omitted)")
    be.add_argument("--log", help="per-run detail log (default: <out>.log, or bench.log)")
    return parser


def _params_from(args) -> AnnealParams:
    return AnnealParams(
        weight=args.weight,
        t_init=args.t_init,
        k_max=args.k_max,
        cooling=args.cooling,
        strategy=args.strategy,
    )


def _load(path):
    try:
        return load_array(path)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")
    except ValueError as exc:
        raise _UsageError(f"bad array file {path}: {exc}")


def cmd_generate(args) -> int:
    model = parse_model(args.model)
    if not 1 <= args.strength <= model.k:
        print(f"strength must lie in 1..{model.k}", file=sys.stderr)
        return EXIT_USAGE
    params = _params_from(args)
    budget = SearchBudget(max_retries=args.max_retries, timeout=args.timeout, seed=args.seed)
    if args.workers > 1:
        result = parallel_construct(model, args.strength, params, budget, workers=args.workers)
    else:
        result = construct(model, args.strength, params, budget)
    print(f"model={model.spec_text()}")
    print(f"strength={args.strength}")
    print(f"seed={args.seed}")
    print(f"strategy={params.strategy}")
    print(f"weight={params.weight}")
    print(f"t_init={params.t_init}")
    print(f"k_max={params.k_max}")
    print(f"cooling={params.cooling}")
    print(f"max_retries={budget.max_retries}")
    print(f"workers={args.workers}")
    print(f"elapsed_s={result.elapsed:.1f}")
    print(f"timed_out={'true' if result.timed_out else 'false'}")
    if result.array is None:
        print("rows=none")
        return EXIT_NO_ARRAY
    print(f"rows={result.rows}")
    if args.out:
        save_array(result.array, args.strength, args.out)
        print(f"out={args.out}")
    else:
        sys.stdout.write(format_array(result.array, args.strength))
    return EXIT_OK


def cmd_verify(args) -> int:
    array, file_t = _load(args.array)
    t = args.strength if args.strength is not None else file_t
    if not 1 <= t <= array.model.k:
        print(f"strength must lie in 1..{array.model.k}", file=sys.stderr)
        return EXIT_USAGE
    report = verify(array, t, max_collision_pairs=_CLI_COLLISION_CAP)
    print(f"model={array.model.spec_text()}")
    print(f"rows={array.m}")
    print(f"strength={t}")
    print(f"is_covering={'true' if report.is_covering else 'false'}")
    print(f"is_locating_exact1={'true' if report.is_locating_exact1 else 'false'}")
    print(f"is_locating_1bar={'true' if report.is_locating_1bar else 'false'}")
    print(f"uncovered_count={len(report.uncovered)}")
    print(f"collision_count={report.collision_count}")
    if report.is_locating_1bar:
        print(f"# OK: every strength-{t} interaction is covered and all covering row sets are distinct")
    else:
        if report.uncovered:
            print(f"# {len(report.uncovered)} uncovered interactions, first {min(20, len(report.uncovered))}:")
            for interaction in report.uncovered[:20]:
                print(f"#   uncovered {interaction}")
        if report.collision_count:
            shown = report.collisions[:20]
            print(f"# {report.collision_count} colliding pairs, first {len(shown)}:")
            for a, b, rows in shown:
                print(f"#   {a} ~ {b} rows={{{','.join(str(r) for r in sorted(rows))}}}")
    return EXIT_OK if report.is_locating_1bar else EXIT_NOT_LOCATING


def cmd_bound(args) -> int:
    model = parse_model(args.model)
    if not 1 <= args.strength <= model.k:
        print(f"strength must lie in 1..{model.k}", file=sys.stderr)
        return EXIT_USAGE
    low, high = initial_bounds(model, args.strength)
    print(f"low={low} high={high}")
    return EXIT_OK


def cmd_locate(args) -> int:
    array, file_t = _load(args.array)
    t = args.strength if args.strength is not None else file_t
    if not 1 <= t <= array.model.k:
        print(f"strength must lie in 1..{array.model.k}", file=sys.stderr)
        return EXIT_USAGE
    text = args.failing.strip()
    try:
        failing = frozenset(int(x) for x in text.split(",") if x.strip()) if text else frozenset()
        hits = locate_fault(array, failing, t)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(f"candidates={len(hits)}")
    for interaction in hits:
        print(str(interaction))
    return EXIT_OK


def _bundled_suite_text() -> str:
    return resources.files("locaray").joinpath("data/benchmark_suite.txt").read_text()


def load_suite(text: str) -> list[tuple[str, str]]:
    """Parse 'name,model' suite lines; '#' comments and blank lines are skipped."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, spec = line.partition(",")
        if not sep or not name.strip() or not spec.strip():
            raise ValueError(f"suite line {lineno}: expected 'name,model', got {raw!r}")
        parse_model(spec)  # validate early
        entries.append((name.strip(), spec.strip()))
    return entries


def cmd_bench(args) -> int:
    if args.suite:
        try:
            with open(args.suite) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"cannot read suite {args.suite}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        text = _bundled_suite_text()
    try:
        entries = load_suite(text)
    except (ValueError, ModelParseError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    log_path = args.log or (f"{args.out}.log" if args.out else "bench.log")
    out_fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out_fh, lineterminator="\n")
        writer.writerow(["name", "model", "x", "y", "runs", "mean_time_s", "mean_rows", "min_rows"])
        with open(log_path, "w") as log:
            for name, spec in entries:
                record = _bench_instance(name, spec, args, log)
                writer.writerow(record)
                out_fh.flush()
    finally:
        if out_fh is not sys.stdout:
            out_fh.close()
    return EXIT_OK


def _bench_instance(name, spec, args, log) -> list:
    model = parse_model(spec)
    params = AnnealParams()
    runs = []
    seeds = [derive_seed(args.seed, f"{name}:{r}") for r in range(args.runs)]
    if args.workers > 1:
        jobs = [
            (r, model.values, args.strength, params,
             SearchBudget(timeout=args.timeout, seed=seeds[r]))
            for r in range(args.runs)
        ]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            runs = [res for _, res in sorted(pool.map(_construct_worker, jobs), key=lambda p: p[0])]
    else:
        for r in range(args.runs):
            budget = SearchBudget(timeout=args.timeout, seed=seeds[r])
            runs.append(construct(model, args.strength, params, budget))

    finished = [res for res in runs if not res.timed_out]
    produced = [res for res in runs if res.array is not None]
    for r, res in enumerate(runs):
        log.write(
            f"{name} run={r} seed={seeds[r]} rows={res.rows} timed_out={res.timed_out} "
            f"elapsed={res.elapsed:.1f} time_to_best="
            f"{'-' if res.time_to_best is None else f'{res.time_to_best:.1f}'}\n"
        )
    x, y = len(finished), len(produced)
    if produced:
        mean_time = sum(res.time_to_best for res in produced) / y
        mean_rows = sum(res.rows for res in produced) / y
        min_rows = min(res.rows for res in produced)
        return [name, spec, x, y, args.runs, f"{mean_time:.1f}", f"{mean_rows:.1f}", min_rows]
    return [name, spec, x, y, args.runs, "-", "-", "-"]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bound":
            return cmd_bound(args)
        if args.command == "locate":
            return cmd_locate(args)
        if args.command == "bench":
            return cmd_bench(args)
    except ModelParseError as exc:
        print(f"bad model: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        print(f"interactions={exc.n_interactions}")
        return EXIT_CAPACITY
    raise AssertionError(f"unhandled command {args.command}")


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
