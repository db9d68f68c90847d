"""Command-line front end: ``ttp2 solve|validate|bounds|oracle|bench``."""
from __future__ import annotations

import argparse
import logging
import random
import sys
import time

from .generators import random_euclidean
from .instance import InstanceError, load_instance, stats
from .metric_graph import min_perfect_matching, min_spanning_tree
from .oracle import SizeTooLarge, brute_force_optimal
from .schedule import ScheduleFormatError, check_at_most, check_no_repeater, load_schedule, \
    team_distances, validate_drr
from .solver import (UnsupportedSize, analysis_upper_bound, lower_bound_independent,
                     lower_bound_tree, solve)

EXIT_OK, EXIT_FAIL, EXIT_UNSUPPORTED = 0, 1, 2


def _fmt(x) -> str:
    from fractions import Fraction
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{float(x):.6f}"
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    sol = solve(inst, jobs=args.jobs, allow_n6_oracle=args.allow_n6_oracle)
    if sol.schedule is None:
        print("no feasible TTP(2) schedule exists for this instance", file=sys.stderr)
        sys.stdout.write(sol.report.to_text(inst.names))
        return EXIT_FAIL
    text = sol.schedule.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text + "\n")
    sys.stdout.write(sol.report.to_text(inst.names))
    if not sol.report.certified:
        failed = [k for k, ok in sol.report.checks.items() if not ok]
        print("certification failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_validate(args) -> int:
    sched = load_schedule(args.schedule)
    inst = load_instance(args.instance)
    if sched.n != inst.n:
        print(f"schedule has {sched.n} teams, instance has {inst.n}", file=sys.stderr)
        return EXIT_FAIL
    reports = [validate_drr(sched), check_no_repeater(sched), check_at_most(sched, args.k)]
    for rep in reports:
        for line in rep.lines():
            print(line)
    if all(r.ok for r in reports):
        dists = team_distances(sched, inst)
        print(f"total: {_fmt(sum(dists))}")
        return EXIT_OK
    return EXIT_FAIL


def cmd_bounds(args) -> int:
    inst = load_instance(args.instance)
    tree, matching = min_spanning_tree(inst), min_perfect_matching(inst)
    print(f"n: {inst.n}")
    print(f"delta: {_fmt(stats(inst).delta)}")
    print(f"d(M): {_fmt(matching.weight)}")
    print(f"d(T): {_fmt(tree.weight)}")
    print(f"lb1: {_fmt(lower_bound_independent(inst, matching))}")
    print(f"lb2: {_fmt(lower_bound_tree(inst, tree, matching))}")
    print(f"analysis_bound: {_fmt(analysis_upper_bound(inst, None, tree, matching))}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    res = brute_force_optimal(inst, allow_n6=args.allow_n6_oracle)
    print(f"n: {inst.n}")
    print(f"lb2: {_fmt(lower_bound_tree(inst))}")
    print(f"nodes: {res.nodes}")
    if not res.feasible:
        print("optimum: infeasible")
        return EXIT_FAIL
    print(f"optimum: {_fmt(res.value)}")
    sys.stdout.write(res.schedule.to_text())
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    worst = 0.0
    failures = 0
    for k in range(args.count):
        inst = random_euclidean(args.n, rng)
        start = time.perf_counter()
        sol = solve(inst, jobs=args.jobs)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        ok = sol.report.certified
        failures += not ok
        print(f"{k:4d} n={args.n} total={_fmt(sol.report.total)} lb1={_fmt(sol.report.lb1)} "
              f"ratio={sol.report.ratio:.4f} offset={sol.report.offset} "
              f"time={elapsed:.2f}s {'ok' if ok else 'FAIL'}")
    print(f"instances: {args.count}  failures: {failures}  worst time: {worst:.2f}s")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ttp2", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="construct and certify a TTP(2) schedule")
    s.add_argument("instance")
    s.add_argument("--out", help="write the schedule here instead of stdout")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for the offset scan")
    s.add_argument("--allow-n6-oracle", action="store_true",
                   help="route n = 6 to exhaustive search (slow)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("validate", help="check a schedule against the TTP(2) rules")
    s.add_argument("schedule")
    s.add_argument("instance")
    s.add_argument("--k", type=int, default=2, help="at-most cap (default 2)")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("bounds", help="print lower bounds and the analysis bound")
    s.add_argument("instance")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("oracle", help="exhaustive optimum for n = 4")
    s.add_argument("instance")
    s.add_argument("--allow-n6-oracle", action="store_true")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="solve random Euclidean instances")
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UnsupportedSize as exc:
        print(f"unsupported size: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SizeTooLarge as exc:
        print(f"unsupported size: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (OSError, InstanceError, ScheduleFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
