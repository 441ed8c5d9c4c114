"""Command-line entry point.

Exit codes: 0 success, 1 bad input, 2 a guaranteed invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

import numpy as np

from .core import IdealLabels
from .datasets import BUNDLED, load_bundled
from .errors import EnsembleGeometryError
from .evaluation import (
    accuracy,
    average_rows,
    check_train_invariants,
    paired_t,
    pearson,
    shrink_trials,
)
from .fusion import centroid_fuse, theta_limit_curve, weighted_fuse
from .io import format_number, load_dataset_csv, load_scores_json, read_column, write_results
from .selection import exact_best_subset, greedy_forward_subset, local_search_subset
from .weights import solve_optimal_weights


class InvariantViolation(Exception):
    pass


def _fmt(x: float, args) -> str:
    return format_number(x, args.precision)


def cmd_fuse(args) -> int:
    group, ideal = load_scores_json(args.scores)
    payload = {"method": args.method, "m": group.m, "ids": group.ids}
    if args.method == "mv":
        res = centroid_fuse(group, ideal)
    else:
        sol = solve_optimal_weights(group, ideal, ridge=args.ridge)
        res = weighted_fuse(group, sol.weights, ideal)
        payload["weights"] = sol.weights.values.tolist()
        payload["ridge_applied"] = sol.ridge_applied
        payload["ridge_lambda"] = sol.ridge_lambda
    payload["distance"] = res.distance_to_ideal
    print(f"method: {args.method}")
    print(f"distance: {_fmt(res.distance_to_ideal, args)}")
    if isinstance(ideal, IdealLabels) and ideal.is_single_label:
        acc = accuracy(res.fused, ideal)
        payload["accuracy"] = acc
        print(f"accuracy: {_fmt(acc, args)}")
    if "weights" in payload:
        print("weights: " + " ".join(_fmt(w, args) for w in payload["weights"]))
        if payload["ridge_applied"]:
            print(f"ridge_applied: lambda={_fmt(payload['ridge_lambda'], args)}")
    payload["fused"] = res.fused.scores.tolist()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    return 0


def cmd_select(args) -> int:
    group, ideal = load_scores_json(args.scores)
    if args.method == "exact":
        res = exact_best_subset(group, ideal, args.m_prime, args.objective, cap=args.cap)
    elif args.method == "greedy":
        res = greedy_forward_subset(group, ideal, args.m_prime, args.objective)
    else:
        res = local_search_subset(
            group, ideal, args.m_prime, args.objective, iterations=args.iters, seed=args.seed
        )
    ids = group.ids
    print("chosen: " + ",".join(ids[i] for i in res.chosen))
    print(f"objective: {_fmt(res.objective, args)}")
    print(f"evaluations: {res.evaluations}")
    return 0


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise EnsembleGeometryError(f"cannot parse number list {text!r}") from None


def cmd_theta(args) -> int:
    thetas = _parse_floats(args.theta_list)
    if not thetas:
        raise EnsembleGeometryError("--theta-list is empty")
    if args.m_max < 2:
        raise EnsembleGeometryError("--m-max must be >= 2")
    rows = [[m] + [theta_limit_curve(t, m) for t in thetas] for m in range(2, args.m_max + 1)]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["m"] + [f"theta={t:g}" for t in thetas])
        for r in rows:
            w.writerow([r[0]] + [_fmt(v, args) for v in r[1:]])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_experiment(args) -> int:
    if args.data in BUNDLED and not os.path.exists(args.data):
        ds = load_bundled(args.data)
    else:
        ds = load_dataset_csv(args.data)
    per_trial = shrink_trials(
        ds, m_max=args.trees, seed=args.seed, trials=args.trials,
        train_fraction=args.split, threads=args.threads,
    )
    rows = average_rows(per_trial)
    checks = check_train_invariants(per_trial)
    os.makedirs(args.out, exist_ok=True)
    write_results(rows, os.path.join(args.out, "results.csv"), "csv", args.precision)
    summary = {
        "data": args.data,
        "trees": args.trees,
        "trials": args.trials,
        "split": args.split,
        "seed": args.seed,
        "rows": len(rows),
        "checks": [
            {"name": c.name, "passed": c.passed, "worst_violation": c.worst_violation}
            for c in checks
        ],
    }
    with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    print(f"rows: {len(rows)}")
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")
    if not all(c.passed for c in checks):
        raise InvariantViolation("a guaranteed train-side invariant failed")
    return 0


def cmd_stats(args) -> int:
    a = read_column(args.a, args.a_column)
    b = read_column(args.b, args.b_column)
    if a.size != b.size:
        raise EnsembleGeometryError(f"length mismatch: {a.size} vs {b.size}")
    t = paired_t(a, b)
    print(f"n: {a.size}")
    print(f"mean_diff: {_fmt(t.mean_diff, args)}")
    print(f"t: {'inf' if t.degenerate else _fmt(t.t, args)}")
    print(f"df: {t.df}")
    if t.degenerate:
        print("degenerate: zero variance in differences")
    r = pearson(a, b)
    print(f"pearson_r: {_fmt(r, args)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-geometry",
        description="Dataset-level geometry of majority and weighted majority voting.",
    )
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--precision", type=int, default=6, help="significant digits")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="fuse a score group by MV or optimal WMV")
    p.add_argument("--scores", required=True)
    p.add_argument("--method", choices=("mv", "wmv"), default="mv")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("select", help="choose a subset of members")
    p.add_argument("--scores", required=True)
    p.add_argument("--m-prime", type=int, required=True)
    p.add_argument("--method", choices=("exact", "greedy", "local"), default="exact")
    p.add_argument("--objective", choices=("mv", "wmv"), default="mv")
    p.add_argument("--cap", type=int, default=2_000_000)
    p.add_argument("--iters", type=int, default=1000)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("theta", help="emit the ensemble-size curve as CSV")
    p.add_argument("--theta-list", required=True)
    p.add_argument("--m-max", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("experiment", help="run the shrink experiment with random trees")
    p.add_argument("--data", required=True, help=f"CSV path, or one of {', '.join(BUNDLED)}")
    p.add_argument("--trees", type=int, default=30)
    p.add_argument("--split", type=float, default=0.8)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("stats", help="paired t and Pearson r of two columns")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--a-column")
    p.add_argument("--b-column")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnsembleGeometryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
