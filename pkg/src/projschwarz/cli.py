"""Command-line entry point: ``projschwarz eval ...`` and ``projschwarz check ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .checks import CHECK_NAMES, run_suite
from .connection import ell_cocycle, flat_connection, pullback_connection, t_difference
from .density import act_direct, act_explicit, sturm_liouville_act, symbol_map, symbol_map_field
from .errors import ProjSchwarzError, ScenarioError
from .scenario import load_scenario
from .schwarzian import classical_schwarzian, schwarzian

WHATS = (
    "ell",
    "schwarzian",
    "tdiff",
    "classical",
    "symbol",
    "act-direct",
    "act-explicit",
    "sturm-liouville",
)


def _point(text, n):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ScenarioError(f"cannot parse point {text!r}") from exc
    if len(values) != n:
        raise ScenarioError(f"point {text!r} has {len(values)} coordinates, expected {n}")
    return np.array(values)


def _need(value, what):
    if value is None:
        raise ScenarioError(f"this evaluation needs {what}")
    return value


def _lambda(sc):
    return _need(sc.lam, "a 'lambda' entry in the scenario")


def evaluate(sc, what, map_name, x):
    """JSON-ready value of ``what`` at ``x``."""
    if map_name is not None:
        f = sc.map(map_name)
    elif what in ("symbol", "tdiff"):
        f = None
    else:
        raise ScenarioError(f"--what {what} needs --map")
    P = sc.connection
    if what == "ell":
        return ell_cocycle(f, P, x).to_json()
    if what == "schwarzian":
        return schwarzian(f, P, x).to_json()
    if what == "tdiff":
        if f is None:
            return t_difference(P, flat_connection(sc.dimension), x).to_json()
        return t_difference(pullback_connection(f, P), P, x).to_json()
    if what == "classical":
        return classical_schwarzian(f, x)
    if what == "symbol":
        return symbol_map(_need(sc.operator, "an 'operator'"), _lambda(sc), x).to_json()
    if what == "act-direct":
        return act_direct(f, _lambda(sc), _need(sc.operator, "an 'operator'"), x).to_json()
    if what == "act-explicit":
        lam = _lambda(sc)
        sigma = symbol_map_field(_need(sc.operator, "an 'operator'"), lam)
        return act_explicit(f, lam, sigma, x).to_json()
    if what == "sturm-liouville":
        u = sc.potential
        if u is None:
            u = _need(sc.operator, "a 'potential' or an 'operator'").a0
        v, meta = sturm_liouville_act(f, u, x)
        return {"v": v, **meta}
    raise ScenarioError(f"unknown evaluation {what!r}")


def _cmd_eval(args):
    sc = load_scenario(args.scenario)
    if args.at is not None:
        out = evaluate(sc, args.what, args.map, _point(args.at, sc.dimension))
    else:
        if not sc.points:
            raise ScenarioError("no --at given and the scenario lists no points")
        out = [
            {"point": p.tolist(), "value": evaluate(sc, args.what, args.map, p)} for p in sc.points
        ]
    print(json.dumps(out))
    return 0


def _cmd_check(args):
    names = CHECK_NAMES if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    reports = run_suite(names, seed=args.seed, trials=args.trials, tol=args.tol)
    ok = len(reports) == len(set(names)) and all(r.passed for r in reports)
    if args.json:
        print(json.dumps({"passed": ok, "reports": [r.to_json() for r in reports]}, indent=2))
    else:
        for r in reports:
            print(r.line())
        print(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(r.passed for r in reports)}/{len(reports)}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="projschwarz",
        description="Projectively equivariant Schwarzian derivative: evaluation and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one object from a scenario file")
    ev.add_argument("--scenario", required=True, help="scenario JSON file")
    ev.add_argument("--what", required=True, choices=WHATS)
    ev.add_argument("--map", help="name of a map defined in the scenario")
    ev.add_argument("--at", help='point as "v1,v2,..." (default: all scenario points)')
    ev.set_defaults(func=_cmd_eval)

    ck = sub.add_parser("check", help="run registered property checks")
    ck.add_argument("--suite", default="all", help="'all', a check name, or a comma-separated list")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--trials", type=int, default=None, help="override each check's trial count")
    ck.add_argument("--tol", type=float, default=None, help="override each check's tolerance")
    ck.add_argument("--json", action="store_true", help="emit a JSON report")
    ck.set_defaults(func=_cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProjSchwarzError, OSError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
