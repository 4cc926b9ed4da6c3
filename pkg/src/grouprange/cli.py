"""Command-line interface.

Commands
    optimal N      optimal allocation of N observations, with weights
    table A B      optimal allocation for every n in A..B
    simulate N     seeded Monte-Carlo run of an estimator plan
    verify         peak-ratio check plus solver-agreement sweep
    count N        number of admissible partitions of N

Every command accepts --format {text,json,csv}; the default comes from
the GROUPRANGE_FORMAT environment variable, falling back to text.
JSON output is an envelope {command, format, payload} that validates
against schema/output.schema.json; exact rationals appear as
{"exact": "p/q", "float": ...} so nothing is reduced to a lossy float.

Exit codes: 0 success, 2 usage error, 3 input or table parse error,
4 verification failure (solver disagreement or a failed check).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from .coefficients import (
    CoefficientTable,
    CoefficientTableError,
    exponential_table,
    load_table,
)
from .estimator import make_plan
from .lemma import verify_lemma
from .optimizer import (
    SolveResult,
    partition_objective,
    rule_of_fours,
    solve_dp,
    solve_group_relaxation,
)
from .partitions import Partition, asymptotic_admissible, count_admissible
from .simulation import monte_carlo

__all__ = ["main"]

FORMATS = ("text", "json", "csv")
FORMAT_ENV = "GROUPRANGE_FORMAT"


class UsageError(Exception):
    exit_code = 2


class InputError(Exception):
    exit_code = 3


# ---------------------------------------------------------------- rendering


def _rational(x: Fraction) -> dict[str, Any]:
    return {"exact": str(x), "float": float(x)}


def _partition_payload(p: Partition) -> dict[str, Any]:
    return {
        "n": p.n,
        "parts": list(p.parts),
        "frequencies": {str(j): m for j, m in p.frequencies},
    }


def _result_payload(result: SolveResult, table: CoefficientTable) -> dict[str, Any]:
    plan = make_plan(result.partition, table)
    by_part = dict(plan.weights)  # weights depend only on the part size
    return {
        "method": result.method,
        "partition": _partition_payload(result.partition),
        "objective": _rational(result.objective),
        "variance_factor": _rational(plan.variance_factor),
        "weights": [
            {"part": j, "weight": _rational(by_part[j])}
            for j in sorted(by_part, reverse=True)
        ],
    }


def _emit(command: str, fmt: str, payload: dict[str, Any], to_text, to_csv) -> None:
    if fmt == "json":
        envelope = {"command": command, "format": "json", "payload": payload}
        print(json.dumps(envelope, indent=2))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        to_csv(writer, payload)
    else:
        to_text(payload)


# ---------------------------------------------------------------- optimal


def _weights_cell(result_payload: dict[str, Any]) -> str:
    return " ".join(
        f"{w['part']}:{w['weight']['exact']}" for w in result_payload["weights"]
    )


def _optimal_text(payload: dict[str, Any]) -> None:
    print(f"n = {payload['n']}, table = {payload['table']}")
    for res in payload["results"]:
        parts = ",".join(str(p) for p in res["partition"]["parts"])
        print(f"method {res['method']}: partition {parts}")
        print(f"  objective        {res['objective']['exact']}"
              f" (~ {res['objective']['float']:.10g})")
        print(f"  variance factor  {res['variance_factor']['exact']}"
              f" (~ {res['variance_factor']['float']:.10g})")
        for w in res["weights"]:
            print(f"  weight, size {w['part']} blocks: {w['weight']['exact']}"
                  f" (~ {w['weight']['float']:.10g})")
    if "agreement" in payload:
        ok = payload["agreement"]["objectives_equal"]
        print(f"agreement ({'/'.join(payload['agreement']['methods'])}): "
              f"{'objectives equal' if ok else 'OBJECTIVES DIFFER'}")


def _optimal_csv(writer, payload: dict[str, Any]) -> None:
    writer.writerow([
        "method", "partition", "objective", "objective_float",
        "variance_factor", "variance_factor_float", "weights",
    ])
    for res in payload["results"]:
        writer.writerow([
            res["method"],
            ",".join(str(p) for p in res["partition"]["parts"]),
            res["objective"]["exact"],
            repr(res["objective"]["float"]),
            res["variance_factor"]["exact"],
            repr(res["variance_factor"]["float"]),
            _weights_cell(res),
        ])


def cmd_optimal(args: argparse.Namespace) -> int:
    n = args.n
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    custom = args.table is not None
    if args.method == "closed" and custom:
        raise UsageError("the closed-form method applies only to the built-in exponential table")
    table = _load_cli_table(args, n)

    results: list[SolveResult] = []
    agreement = None
    cross_checked = False
    if args.method == "dp":
        results = [solve_dp(n, table)]
    elif args.method == "closed":
        part = rule_of_fours(n)
        results = [SolveResult(part, partition_objective(part, table), "closed_form")]
    elif args.method == "gr":
        gr = solve_group_relaxation(n, table)
        results = [gr]
        cross_checked = True
        if solve_dp(n, table).objective != gr.objective:
            agreement = {"methods": ["group_relaxation", "dp"], "objectives_equal": False}
    else:  # all
        results = [solve_dp(n, table), solve_group_relaxation(n, table)]
        methods = ["dp", "group_relaxation"]
        if not custom:
            part = rule_of_fours(n)
            results.append(SolveResult(part, partition_objective(part, table), "closed_form"))
            methods.append("closed_form")
        objectives = {r.objective for r in results}
        agreement = {"methods": methods, "objectives_equal": len(objectives) == 1}

    payload: dict[str, Any] = {
        "n": n,
        "table": table.distribution_label,
        "results": [_result_payload(r, table) for r in results],
    }
    if cross_checked:
        payload["cross_checked"] = True
    if agreement is not None:
        payload["agreement"] = agreement

    _emit("optimal", args.format, payload, _optimal_text, _optimal_csv)
    if agreement is not None and not agreement["objectives_equal"]:
        print("error: solver objectives disagree", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------- table


def _table_text(payload: dict[str, Any]) -> None:
    print(f"optimal allocations, table = {payload['table']}")
    print(f"{'n':>5}  {'objective':>16}  {'variance_factor':>16}  partition")
    for row in payload["rows"]:
        parts = ",".join(str(p) for p in row["partition"]["parts"])
        print(f"{row['n']:>5}  {row['objective']['float']:>16.10g}"
              f"  {row['variance_factor']['float']:>16.10g}  {parts}")


def _table_csv(writer, payload: dict[str, Any]) -> None:
    writer.writerow([
        "n", "partition", "objective", "objective_float",
        "variance_factor", "variance_factor_float",
    ])
    for row in payload["rows"]:
        writer.writerow([
            row["n"],
            ",".join(str(p) for p in row["partition"]["parts"]),
            row["objective"]["exact"],
            repr(row["objective"]["float"]),
            row["variance_factor"]["exact"],
            repr(row["variance_factor"]["float"]),
        ])


def cmd_table(args: argparse.Namespace) -> int:
    if args.n_from < 2:
        raise UsageError(f"n_from must be >= 2, got {args.n_from}")
    if args.n_to < args.n_from:
        raise UsageError(f"n_to must be >= n_from, got {args.n_to} < {args.n_from}")
    table = exponential_table(args.n_to)
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        result = solve_group_relaxation(n, table)
        rows.append({
            "n": n,
            "partition": _partition_payload(result.partition),
            "objective": _rational(result.objective),
            "variance_factor": _rational(1 / result.objective),
        })
    payload = {
        "n_from": args.n_from,
        "n_to": args.n_to,
        "table": table.distribution_label,
        "rows": rows,
    }
    _emit("table", args.format, payload, _table_text, _table_csv)
    return 0


# ---------------------------------------------------------------- simulate


def _simulate_text(payload: dict[str, Any]) -> None:
    parts = ",".join(str(p) for p in payload["partition"]["parts"])
    print(f"n = {payload['n']}, partition {parts}, theta = {payload['theta']}")
    print(f"replicates = {payload['replicates']}, seed = {payload['seed']}")
    print(f"mean estimate        {payload['mean_estimate']:.10g}")
    print(f"mean std error       {payload['mean_std_error']:.10g}")
    print(f"empirical variance   {payload['variance_estimate']:.10g}")
    print(f"theoretical variance {payload['theoretical_variance']:.10g}"
          f"  (factor {payload['variance_factor']['exact']})")


def _simulate_csv(writer, payload: dict[str, Any]) -> None:
    writer.writerow([
        "n", "theta", "replicates", "seed", "partition", "variance_factor",
        "mean_estimate", "variance_estimate", "mean_std_error", "theoretical_variance",
    ])
    writer.writerow([
        payload["n"],
        repr(payload["theta"]),
        payload["replicates"],
        payload["seed"],
        ",".join(str(p) for p in payload["partition"]["parts"]),
        payload["variance_factor"]["exact"],
        repr(payload["mean_estimate"]),
        repr(payload["variance_estimate"]),
        repr(payload["mean_std_error"]),
        repr(payload["theoretical_variance"]),
    ])


def _parse_partition_spec(spec: str, n: int) -> Partition:
    try:
        parts = [int(piece) for piece in spec.split(",") if piece.strip()]
    except ValueError:
        raise UsageError(f"cannot parse --partition {spec!r}") from None
    if not parts:
        raise UsageError("--partition needs at least one part")
    for part in parts:
        if part < 2:
            raise UsageError(f"inadmissible part {part} in --partition (parts must be >= 2)")
    if sum(parts) != n:
        raise UsageError(f"--partition parts sum to {sum(parts)}, n is {n}")
    return Partition.from_parts(parts)


def cmd_simulate(args: argparse.Namespace) -> int:
    n = args.n
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    if args.theta <= 0:
        raise UsageError(f"--theta must be > 0, got {args.theta}")
    if args.reps < 1:
        raise UsageError(f"--reps must be >= 1, got {args.reps}")
    if not 0 <= args.seed < 2**64:
        raise UsageError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")

    table = exponential_table(n)
    if args.partition is not None:
        partition = _parse_partition_spec(args.partition, n)
    else:
        partition = solve_group_relaxation(n, table).partition
    plan = make_plan(partition, table)
    report = monte_carlo(plan, args.theta, args.reps, args.seed)

    payload = {
        "n": report.n,
        "theta": report.theta,
        "replicates": report.replicates,
        "seed": report.seed,
        "partition": _partition_payload(report.plan_partition),
        "variance_factor": _rational(plan.variance_factor),
        "mean_estimate": report.mean_estimate,
        "variance_estimate": report.variance_estimate,
        "mean_std_error": report.mean_std_error,
        "theoretical_variance": report.theoretical_variance,
    }
    _emit("simulate", args.format, payload, _simulate_text, _simulate_csv)
    return 0


# ---------------------------------------------------------------- verify


def _verify_text(payload: dict[str, Any]) -> None:
    lemma = payload["lemma"]
    status = "PASS" if lemma["holds"] else "FAIL"
    print(f"peak ratio: {status}  max C(n)/n at n = {lemma['max_ratio_at']}, "
          f"value {lemma['max_ratio']['exact']}, checked 2..{lemma['checked_upper']}")
    print(f"  envelope decreasing and dominating: "
          f"{'yes' if lemma['envelope_ok'] else 'NO'}; "
          f"crosses the peak at n = {lemma['tail_bound_start']}")
    agreement = payload["agreement"]
    status = "PASS" if agreement["objectives_equal"] else "FAIL"
    print(f"solver agreement: {status}  dp/group_relaxation/closed_form over "
          f"n = 2..{agreement['n_max']}, {len(agreement['mismatches'])} mismatches, "
          f"{len(agreement['ties'])} partition ties")
    print(f"overall: {'PASS' if payload['passed'] else 'FAIL'}")


def _verify_csv(writer, payload: dict[str, Any]) -> None:
    lemma = payload["lemma"]
    agreement = payload["agreement"]
    writer.writerow(["check", "status", "detail"])
    writer.writerow([
        "peak_ratio",
        "PASS" if lemma["holds"] else "FAIL",
        f"max at n={lemma['max_ratio_at']} value {lemma['max_ratio']['exact']} "
        f"checked 2..{lemma['checked_upper']} tail from {lemma['tail_bound_start']}",
    ])
    writer.writerow([
        "solver_agreement",
        "PASS" if agreement["objectives_equal"] else "FAIL",
        f"n=2..{agreement['n_max']} mismatches={len(agreement['mismatches'])} "
        f"ties={len(agreement['ties'])}",
    ])
    writer.writerow(["overall", "PASS" if payload["passed"] else "FAIL", ""])


def cmd_verify(args: argparse.Namespace) -> int:
    if args.lemma_max < 34:
        raise UsageError(f"--lemma-max must be >= 34, got {args.lemma_max}")
    if args.agree_max < 2:
        raise UsageError(f"--agree-max must be >= 2, got {args.agree_max}")

    table = exponential_table(max(args.lemma_max, args.agree_max))
    report = verify_lemma(args.lemma_max, table)

    mismatches: list[int] = []
    ties: list[int] = []
    for n in range(2, args.agree_max + 1):
        dp = solve_dp(n, table)
        gr = solve_group_relaxation(n, table)
        closed = rule_of_fours(n)
        closed_objective = partition_objective(closed, table)
        if not dp.objective == gr.objective == closed_objective:
            mismatches.append(n)
        elif not dp.partition == gr.partition == closed:
            ties.append(n)  # equal objectives, different maximizers

    passed = report.holds and not mismatches
    payload = {
        "lemma": {
            "checked_upper": report.checked_upper,
            "max_ratio_at": report.max_ratio_at,
            "max_ratio": _rational(report.max_ratio),
            "tail_bound_start": report.tail_bound_start,
            "envelope_ok": report.envelope_ok,
            "exact_ok": report.exact_ok,
            "holds": report.holds,
        },
        "agreement": {
            "n_max": args.agree_max,
            "objectives_equal": not mismatches,
            "mismatches": mismatches,
            "ties": ties,
        },
        "passed": passed,
    }
    _emit("verify", args.format, payload, _verify_text, _verify_csv)
    if not passed:
        print("error: verification failed", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------- count


def _count_text(payload: dict[str, Any]) -> None:
    print(f"admissible partitions of {payload['n']}: {payload['admissible']}")
    if "asymptotic" in payload:
        print(f"asymptotic estimate: {payload['asymptotic']:.10g}")
        print(f"exact / asymptotic:  {payload['ratio']:.10g}")


def _count_csv(writer, payload: dict[str, Any]) -> None:
    if "asymptotic" in payload:
        writer.writerow(["n", "admissible", "asymptotic", "ratio"])
        writer.writerow([
            payload["n"], payload["admissible"],
            repr(payload["asymptotic"]), repr(payload["ratio"]),
        ])
    else:
        writer.writerow(["n", "admissible"])
        writer.writerow([payload["n"], payload["admissible"]])


def cmd_count(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError(f"n must be >= 0, got {args.n}")
    payload: dict[str, Any] = {"n": args.n, "admissible": count_admissible(args.n)}
    if args.asymptotic:
        if args.n < 1:
            raise UsageError("--asymptotic needs n >= 1")
        try:
            approx = asymptotic_admissible(args.n)
        except OverflowError:
            raise UsageError(f"n = {args.n} is too large for float asymptotics") from None
        payload["asymptotic"] = approx
        # the ratio is O(1) even when the count overflows a float
        payload["ratio"] = float(Fraction(payload["admissible"]) / Fraction(approx))
    _emit("count", args.format, payload, _count_text, _count_csv)
    return 0


# ---------------------------------------------------------------- plumbing


def _load_cli_table(args: argparse.Namespace, n: int) -> CoefficientTable:
    if args.table is None:
        return exponential_table(n)
    try:
        with open(args.table, "rb") as handle:
            table = load_table(handle, label=os.path.basename(args.table))
    except OSError as exc:
        raise InputError(f"cannot read table file: {exc}") from None
    except CoefficientTableError as exc:
        raise InputError(f"bad coefficient table: {exc}") from None
    if table.max_part < n:
        raise InputError(
            f"table covers parts 2..{table.max_part}, but n = {n} needs 2..{n}"
        )
    return table


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=FORMATS, default=None,
        help=f"output format (default: ${FORMAT_ENV} or text)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grouprange",
        description="Minimum-variance unbiased weighted-range estimation "
                    "of an exponential scale parameter.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimal", help="optimal allocation for one n")
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=("dp", "gr", "closed", "all"), default="gr",
                   help="solver (default: group relaxation with dp cross-check)")
    p.add_argument("--table", metavar="FILE",
                   help="coefficient CSV for a non-exponential distribution")
    _add_format_flag(p)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("table", help="optimal allocations for a range of n")
    p.add_argument("n_from", type=int)
    p.add_argument("n_to", type=int)
    _add_format_flag(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="Monte-Carlo run of an estimator plan")
    p.add_argument("n", type=int)
    p.add_argument("--theta", type=float, default=1.0, help="true scale (default 1.0)")
    p.add_argument("--reps", type=int, default=100_000,
                   help="number of replicates (default 100000)")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    p.add_argument("--partition", metavar="SPEC",
                   help="comma-separated parts, e.g. 5,5,4,4,4 (default: optimal)")
    _add_format_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="peak-ratio and solver-agreement checks")
    p.add_argument("--lemma-max", type=int, default=1000,
                   help="upper end of the exact ratio scan (default 1000, min 34)")
    p.add_argument("--agree-max", type=int, default=400,
                   help="upper end of the solver-agreement sweep (default 400)")
    _add_format_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="count admissible partitions")
    p.add_argument("n", type=int)
    p.add_argument("--asymptotic", action="store_true",
                   help="include the asymptotic estimate and the exact/asymptotic ratio")
    _add_format_flag(p)
    p.set_defaults(func=cmd_count)

    return parser


def _resolve_format(args: argparse.Namespace) -> None:
    if args.format is None:
        env = os.environ.get(FORMAT_ENV)
        if env is None or env == "":
            args.format = "text"
        elif env in FORMATS:
            args.format = env
        else:
            raise UsageError(
                f"{FORMAT_ENV}={env!r} is not a valid format (expected one of {', '.join(FORMATS)})"
            )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    try:
        _resolve_format(args)
        return args.func(args)
    except (UsageError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
