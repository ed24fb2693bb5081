"""Command line entry point: ``allocate``, ``verify`` and ``gen``.

Exit status: 0 on success, 1 when a verification check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .bridge import verify_equivalences, to_multi_issue
from .claims import CEA, PROPORTIONAL
from .errors import StreamClaimsError
from .generate import generate_random_problem
from .io import FORMATS, emit_report, parse_streams_csv, parse_weights_csv, write_streams_csv
from .multi_issue import two_stage
from .streaming import (
    StreamingProblem,
    WeightSystem,
    pro_rata_rewards,
    shapley_rewards,
    user_centric_rewards,
    weighted_index_rewards,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

STAGE_RULES = {"prop": PROPORTIONAL, "cea": CEA}
SIMPLE_METHODS = {
    "pro-rata": pro_rata_rewards,
    "user-centric": user_centric_rewards,
    "shapley": shapley_rewards,
}


class UsageError(StreamClaimsError, ValueError):
    pass


@dataclass
class RunConfig:
    input: Optional[str] = None
    artists: int = 4
    users: int = 4
    max_streams: int = 20
    method: str = "pro-rata"
    price_per_user: float = 1.0
    format: str = "table"
    tolerance: float = 1e-9
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.seed < 0:
            raise UsageError("seed must be a nonnegative integer")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if self.tolerance < 0:
            raise UsageError("tolerance must be nonnegative")


def load_problem(config: RunConfig) -> StreamingProblem:
    if config.input is None:
        raise UsageError("--input is required")
    return parse_streams_csv(config.input, config.price_per_user)


def _scaled(level, price):
    return None if level is None else level * price


def allocate(problem: StreamingProblem, method: str) -> dict:
    """Run one allocation method and return a report dict."""
    breakdown = None
    if method in SIMPLE_METHODS:
        rewards = SIMPLE_METHODS[method](problem).amounts
    elif method.startswith("two-stage:"):
        parts = method.split(":", 1)[1].split(",")
        if len(parts) != 2 or any(p not in STAGE_RULES for p in parts):
            raise UsageError(f"two-stage method must be two-stage:<first>,<second> with each in "
                             f"{sorted(STAGE_RULES)}, got {method!r}")
        result = two_stage(to_multi_issue(problem), STAGE_RULES[parts[0]], STAGE_RULES[parts[1]])
        price = problem.price_per_user
        rewards = result.total * price
        breakdown = {
            "users": list(problem.users),
            "first_stage": (result.first_stage * price).tolist(),
            "first_stage_level": _scaled(result.first_stage_level, price),
            "second_stage": (result.second_stage * price).tolist(),
            "second_stage_levels": [_scaled(v, price) for v in result.second_stage_levels],
        }
    elif method.startswith("weighted:"):
        weights = parse_weights_csv(method.split(":", 1)[1], problem.users)
        rewards = weighted_index_rewards(problem, WeightSystem.from_table(weights)).amounts
    else:
        raise UsageError(f"unknown method {method!r}")
    report = {
        "method": method,
        "price_per_user": problem.price_per_user,
        "artists": list(problem.artists),
        "rewards": rewards.tolist(),
        "total": float(rewards.sum()),
    }
    if breakdown is not None:
        report["breakdown"] = breakdown
    return report


def cmd_allocate(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    out.write(emit_report(allocate(load_problem(config), config.method), config.format))
    return EXIT_OK


def verify_reports(config: RunConfig) -> list:
    if config.input is not None:
        problem = parse_streams_csv(config.input, config.price_per_user)
        return [verify_equivalences(problem, config.tolerance, config.seed, instance=config.input)]
    reports = []
    for k in range(config.trials):
        problem = generate_random_problem([config.seed, k], config.artists, config.users, config.max_streams)
        reports.append(verify_equivalences(problem, config.tolerance, config.seed,
                                           instance=f"seed={config.seed},trial={k}"))
    return reports


def format_verify(reports: list, fmt: str) -> str:
    if fmt == "json":
        body = {
            "passed": all(r.passed for r in reports),
            "instances": len(reports),
            "failed_instances": sum(not r.passed for r in reports),
            "reports": [r.as_dict() for r in reports],
        }
        return json.dumps(body, indent=2) + "\n"
    if fmt == "csv":
        lines = ["instance,check,deviation,passed"]
        lines += [f"{r.instance},{rec.name},{rec.deviation!r},{int(rec.passed)}"
                  for r in reports for rec in r.records]
        return "\n".join(lines) + "\n"
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.instance}  checks={len(r.records)} failed={r.n_failed} "
                     f"max_dev={r.max_deviation:.3e}")
        for rec in r.records:
            if not rec.passed:
                lines.append(f"    BAD {rec.name} dev={rec.deviation:.3e}"
                             + (f" ({rec.error})" if rec.error else ""))
    return "\n".join(lines) + "\n"


def cmd_verify(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    reports = verify_reports(config)
    out.write(format_verify(reports, config.format))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_gen(config: RunConfig, path: str) -> int:
    problem = generate_random_problem(config.seed, config.artists, config.users, config.max_streams)
    write_streams_csv(problem, path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamclaims",
                                     description="Streaming revenue allocation through claims rules.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("allocate", help="allocate revenue for a streams CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--method", default="pro-rata",
                   help="pro-rata | user-centric | shapley | two-stage:<prop|cea>,<prop|cea> | weighted:<file>")
    p.add_argument("--price", type=float, default=1.0)
    p.add_argument("--format", choices=FORMATS, default="table")

    p = sub.add_parser("verify", help="check the streaming/claims identities")
    p.add_argument("--input")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--artists", type=int, default=4)
    p.add_argument("--users", type=int, default=4)
    p.add_argument("--max-streams", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--price", type=float, default=1.0)
    p.add_argument("--format", choices=FORMATS, default="table")

    p = sub.add_parser("gen", help="write a seeded random streams CSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--artists", type=int, required=True)
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--max-streams", type=int, required=True)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "allocate":
            config = RunConfig(input=args.input, method=args.method, price_per_user=args.price,
                               format=args.format)
            return cmd_allocate(config)
        if args.command == "verify":
            config = RunConfig(input=args.input, trials=args.trials, seed=args.seed, artists=args.artists,
                               users=args.users, max_streams=args.max_streams, tolerance=args.tol,
                               price_per_user=args.price, format=args.format)
            return cmd_verify(config)
        config = RunConfig(seed=args.seed, artists=args.artists, users=args.users,
                           max_streams=args.max_streams)
        return cmd_gen(config, args.out)
    except (StreamClaimsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
