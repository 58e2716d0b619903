"""``shrink-mwisr`` command line: generate, solve, kernelize, verify, plot.

Exit codes: 0 ok, 2 usage or input error, 3 internal verification failure,
4 resource limit, 5 an externally supplied solution is invalid.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .boxdp import eptas, fpt
from .errors import (ContractError, InputError, InvariantError, ParameterError,
                     ResourceError)
from .geom import check_delta, first_overlap, shrink_all, to_fraction, total_weight
from .instances import (Instance, clustered_unit_squares, geometric_squares, parse_solution,
                        random_instance, read_instance, render, render_solution)
from .oracle import opt_exact, opt_k_exact
from .sparsify import normalize_params
from .squareskernel import (gamma_int, kernel_arb_uniform, kernel_bounded,
                            kernel_unit_uniform, kernel_unit_weighted)
from .svg import render_svg

REPORT_SCHEMA = "shrink-mwisr-report"
REPORT_VERSION = 1
SEED_ENV = "SHRINK_MWISR_SEED"

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_RESOURCE, EXIT_INVALID = 0, 2, 3, 4, 5

VARIANT_KINDS = {
    "unit-uniform": ("unit-squares",),
    "unit-weighted": ("unit-squares",),
    "bounded": ("squares", "unit-squares"),
    "arb-uniform": ("squares", "unit-squares"),
}


def _fraction(text):
    try:
        return to_fraction(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _num(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _print_report(report, json_path):
    if json_path:
        _emit(json.dumps(report, indent=2) + "\n", json_path)
        if json_path == "-":
            return
    for key, val in report.items():
        if not isinstance(val, str):
            val = json.dumps(val)
        print(f"{key}: {val}")


# -- subcommands --------------------------------------------------------------

def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rng = random.Random(seed)
    if args.geometric_sizes is not None:
        if args.geometric_sizes < 0:
            raise InputError("--geometric-sizes needs k >= 0")
        d = check_delta(args.delta)
        inst = geometric_squares(gamma_int(d) * args.geometric_sizes, d)
    elif args.grid_clusters is not None:
        inst = clustered_unit_squares(rng, args.n, args.grid_clusters, side=args.side,
                                      coord=args.coord_range,
                                      weights=args.weight_range or (1, 1))
    else:
        inst = random_instance(rng, args.n, args.kind, args.coord_range,
                               args.size_range, args.weight_range or (1, 10))
    _emit(render(inst), args.out)
    return EXIT_OK


def _verified(inst, ids, delta):
    by_id = inst.by_id()
    chosen = [by_id[i] for i in ids]
    if first_overlap(shrink_all(chosen, delta)) is not None:
        raise InvariantError("reported solution has overlapping shrinkings")
    return chosen


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    fam = list(inst.rects)
    seed = args.seed if args.seed is not None else _default_seed()
    delta = check_delta(args.delta)
    start = time.perf_counter()
    if args.grid_cap_override is not None and args.mode != "exact":
        if args.mode == "eptas":
            eps = (args.epsilon or Fraction(1, 2)) / 40
        else:
            eps = Fraction(1, 20 * max(args.k or 1, 1))
        default = normalize_params(delta, eps, fam).grid_dim
        print(f"warning: grid dimension overridden to {args.grid_cap_override} "
              f"(default {default})", file=sys.stderr)
    report = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION,
              "command": ["shrink-mwisr", *args.argv], "mode": args.mode, "seed": seed}
    if args.mode == "exact":
        if args.k is None:
            value, chosen = opt_exact(fam)
        else:
            value, chosen = opt_k_exact(fam, args.k)
        ids = sorted(r.id for r in chosen)
        report.update(delta=_num(delta), epsilon=None, grid_dim=None,
                      grid_dim_overridden=False, trials=1, trial_values=[_num(value)],
                      best_value=_num(value), oracle_value=_num(value), solution=ids,
                      counters={})
        check_at = delta
    else:
        if args.mode == "eptas":
            if args.epsilon is None:
                raise InputError("--mode eptas needs --epsilon")
            res = eptas(fam, delta, args.epsilon, args.trials, seed, args.grid_cap_override)
        else:
            if args.k is None:
                raise InputError("--mode fpt needs --k")
            res = fpt(fam, delta, args.k, args.trials, seed, args.grid_cap_override)
        if res.value != max(res.trial_values):
            raise InvariantError("best value is not the maximum trial value")
        oracle = None
        if args.oracle:
            oracle = (opt_exact(fam) if args.mode == "eptas" else opt_k_exact(fam, args.k))[0]
        report.update(delta=_num(res.delta), epsilon=_num(res.epsilon), grid_dim=res.grid_cap,
                      grid_dim_overridden=res.grid_cap_overridden, trials=args.trials,
                      trial_values=[_num(v) for v in res.trial_values],
                      best_value=_num(res.value),
                      oracle_value=None if oracle is None else _num(oracle),
                      solution=[r.id for r in res.solution], counters=res.counters)
        ids = [r.id for r in res.solution]
        check_at = res.delta
    chosen = _verified(inst, ids, check_at)
    if total_weight(chosen) != Fraction(report["best_value"]):
        raise InvariantError("solution weight differs from the reported value")
    report["wall_time_s"] = round(time.perf_counter() - start, 6)
    if args.solution_out:
        _emit(render_solution(ids), args.solution_out)
    _print_report(report, args.json)
    return EXIT_OK


def cmd_kernelize(args) -> int:
    inst = read_instance(args.instance)
    allowed = VARIANT_KINDS[args.variant]
    if inst.kind not in allowed:
        raise InputError(f"variant {args.variant} needs kind {' or '.join(allowed)}, "
                         f"got {inst.kind}")
    d = check_delta(args.delta)
    if args.k < 0:
        raise InputError("--k must be non-negative")
    fam = list(inst.rects)
    if args.variant == "unit-uniform":
        res = kernel_unit_uniform(fam, args.k, d)
    elif args.variant == "unit-weighted":
        res = kernel_unit_weighted(fam, args.k, d)
    elif args.variant == "bounded":
        if args.m1 is None or args.m2 is None:
            raise InputError("variant bounded needs --m1 and --m2")
        res = kernel_bounded(fam, args.k, d, args.m1, args.m2)
    else:
        res = kernel_arb_uniform(fam, args.k, d)
    ids = [r.id for r in res.members]
    if res.found:
        _verified(inst, ids, d)
        text = render_solution(ids)
    else:
        text = render(Instance(inst.kind, res.members))
    if args.out:
        _emit(text, args.out)
    report = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION,
              "command": ["shrink-mwisr", *args.argv], "variant": args.variant,
              "k": args.k, "delta": _num(d), "input_size": len(fam),
              "result": "solution" if res.found else "kernel",
              "size": len(res.members),
              "size_bound": None if res.size_bound is None else _num(res.size_bound),
              "within_bound": None if res.size_bound is None else len(res) <= res.size_bound,
              "members": ids}
    _print_report(report, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    with open(args.solution, encoding="utf-8") as fh:
        ids = parse_solution(fh.read())
    d = check_delta(args.delta)
    by_id = inst.by_id()
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise InputError(f"unknown id {missing[0]!r}")
    if len(set(ids)) != len(ids):
        raise InputError("solution repeats an id")
    chosen = [by_id[i] for i in ids]
    clash = first_overlap(shrink_all(chosen, d))
    if clash is not None:
        a, b = clash
        print(f"invalid: shrinkings of {a.id} and {b.id} overlap", file=sys.stderr)
        return EXIT_INVALID
    print(f"valid: {len(chosen)} rectangles, weight {_num(total_weight(chosen))}")
    return EXIT_OK


def cmd_plot(args) -> int:
    inst = read_instance(args.instance)
    ids = []
    if args.solution:
        with open(args.solution, encoding="utf-8") as fh:
            ids = parse_solution(fh.read())
        unknown = set(ids) - set(inst.by_id())
        if unknown:
            raise InputError(f"unknown id {sorted(map(str, unknown))[0]!r}")
    d = check_delta(args.delta)
    _emit(render_svg(inst.rects, d, ids), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shrink-mwisr",
                                 description="Independent rectangles under shrinking.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded random instance")
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--kind", choices=("rectangles", "squares", "unit-squares"),
                   default="rectangles")
    g.add_argument("--coord-range", type=int, default=100, help="coordinates in [0, C]")
    g.add_argument("--size-range", type=_int_range, default=(1, 20), metavar="LO:HI")
    g.add_argument("--weight-range", type=_int_range, metavar="LO:HI",
                   help="default 1:10, or 1:1 with --grid-clusters")
    g.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    g.add_argument("--grid-clusters", type=int, metavar="C",
                   help="unit squares jittered around C centres")
    g.add_argument("--side", type=int, default=8, help="side for --grid-clusters")
    g.add_argument("--geometric-sizes", type=int, metavar="K",
                   help="one square per size class, enough classes for budget K")
    g.add_argument("--delta", type=_fraction, default=Fraction(1, 2))
    g.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="approximate or exact solve")
    s.add_argument("instance")
    s.add_argument("--mode", choices=("eptas", "fpt", "exact"), default="eptas")
    s.add_argument("--delta", type=_fraction, required=True)
    s.add_argument("--epsilon", type=_fraction)
    s.add_argument("--k", type=int)
    s.add_argument("--trials", type=int, default=7)
    s.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    s.add_argument("--grid-cap-override", type=int, metavar="D")
    s.add_argument("--oracle", action="store_true", help="also compute the exact optimum")
    s.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
    s.add_argument("--solution-out", metavar="PATH")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("kernelize", help="kernel or direct solution for squares")
    k.add_argument("instance")
    k.add_argument("--variant", choices=tuple(VARIANT_KINDS), required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--delta", type=_fraction, required=True)
    k.add_argument("--m1", type=_fraction)
    k.add_argument("--m2", type=_fraction)
    k.add_argument("-o", "--out", help="kernel instance or solution file")
    k.add_argument("--json", metavar="PATH")
    k.set_defaults(func=cmd_kernelize)

    v = sub.add_parser("verify", help="check a solution file")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--delta", type=_fraction, required=True)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG picture of an instance")
    p.add_argument("instance")
    p.add_argument("--solution")
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal verification failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, ContractError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
