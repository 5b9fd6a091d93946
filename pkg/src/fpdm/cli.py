"""Command-line front end: ``fpdm price|run|simulate|sweep|verify``.

Exit codes: 0 success, 1 invariant violation (or findings without
``--findings-ok``), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .formats import FormatError, TreeFile, format_record, parse_actions, parse_tree, parse_valuations
from .mechanisms import MechanismConfig, Outcome, as_distribution, run_baseline, run_fpdm, utilities
from .network import InfeasibleProfileError, branches, effective_tree, make_profile
from .pricing import (
    expected_revenue_base,
    expected_revenue_fpdm,
    optimal_price,
    revenue_curve,
    revenue_point,
)
from .verification import (
    ScopeError,
    ValuationGrid,
    ValuationSample,
    monte_carlo_revenue,
    verify_trees,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
DEFAULT_VERIFY_ALPHAS = (0.0, 0.1, 1.0)


class UsageError(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return "none"
    return f"{value:.6g}"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load(path: str, kind: str, parser, *args):
    try:
        return parser(_read(path), *args)
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _config(args, **overrides) -> MechanismConfig:
    return MechanismConfig(
        alpha=overrides.get("alpha", getattr(args, "alpha", 0.1)),
        reward_mode=args.mode,
        threshold=args.threshold,
        tie_mode=getattr(args, "tiebreak", "seeded"),
    )


def _load_instance(args) -> tuple[TreeFile, object]:
    tf = _load(args.tree, "tree", parse_tree)
    profile = None
    if getattr(args, "actions", None):
        reports = _load(args.actions, "actions", parse_actions, tf)
        try:
            profile = make_profile(tf.tree, reports)
        except InfeasibleProfileError as exc:
            raise UsageError(f"{args.actions}: {exc}") from None
    return tf, profile


# --------------------------------------------------------------------------
# commands


def cmd_price(args, out) -> int:
    x = args.x
    if x < 0:
        raise UsageError(f"x must be non-negative, got {x}")
    out.write(f"p_opt={optimal_price(x):.6f} E_base={expected_revenue_base(x):.6f}\n")
    if x == 0:
        out.write("note: x=0 is degenerate; p_opt is the limit 1/e and nobody can buy\n")
    return EXIT_OK


def _outcome_lines(o: Outcome, tf: TreeFile, values, prefix: str = "") -> tuple[list[str], list]:
    label = tf.label
    lines = [
        f"{prefix}winner: {'none' if o.winner is None else label(o.winner)}",
        f"{prefix}branch: {'none' if o.branch is None else label(o.branch)}",
        f"{prefix}price: {_fmt(o.price)}",
        f"{prefix}gross revenue: {_fmt(o.gross_revenue)}",
        f"{prefix}net revenue: {_fmt(o.net_revenue)}",
    ]
    u = utilities(o, values) if o.winner is None or o.winner in values else {}
    record = [
        (f"{prefix}winner", None if o.winner is None else label(o.winner)),
        (f"{prefix}branch", None if o.branch is None else label(o.branch)),
        (f"{prefix}price", o.price),
        (f"{prefix}p_base", o.p_base),
        (f"{prefix}gross_revenue", o.gross_revenue),
        (f"{prefix}net_revenue", o.net_revenue),
    ]
    for b in sorted(o.payments):
        lines.append(f"{prefix}buyer {label(b)}: payment={_fmt(o.payments[b])} utility={_fmt(u.get(b))}")
        record.append((f"{prefix}payment.{label(b)}", o.payments[b]))
    for b in sorted(u):
        record.append((f"{prefix}utility.{label(b)}", u[b]))
    lines.append(f"{prefix}trace:")
    lines.extend(f"{prefix}  {t}" for t in o.trace.lines())
    return lines, record


def cmd_run(args, out) -> int:
    tf, profile = _load_instance(args)
    tree = tf.tree
    config = _config(args)
    if args.valuations:
        values = _load(args.valuations, "valuations", parse_valuations, tf)
    else:
        rng = np.random.default_rng(args.seed)
        values = {b: float(v) for b, v in zip(tree.buyers, rng.random(tree.k))}

    try:
        if args.baseline:
            missing = [tf.label(b) for b in tree.seller_children if b not in values]
            if missing:
                raise UsageError(f"missing valuation for seller neighbour(s) {missing}")
            price = optimal_price(len(tree.seller_children)) if args.price is None else args.price
            result = run_baseline({b: values[b] for b in tree.seller_children}, price, config, args.seed)
        else:
            result = run_fpdm(tree, profile, values, config, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    mechanism = "baseline" if args.baseline else "fpdm"
    header = [
        ("mechanism", mechanism),
        ("alpha", config.alpha),
        ("reward_mode", config.reward_mode),
        ("threshold", config.threshold or ("strict" if args.baseline else "weak")),
        ("tie_mode", config.tie_mode),
        ("seed", args.seed),
    ]
    dist = as_distribution(result)
    lines = [f"mechanism: {mechanism}"]
    record = list(header)
    if len(dist) == 1 and config.tie_mode == "seeded":
        body, rec = _outcome_lines(dist.outcomes[0], tf, values)
        lines += body
        record += rec
    else:
        record.append(("outcomes", len(dist)))
        for i, (prob, o) in enumerate(dist, start=1):
            lines.append(f"outcome {i} (probability {_fmt(prob)}):")
            body, rec = _outcome_lines(o, tf, values, prefix=f"outcome{i}.")
            lines += ["  " + b[len(f"outcome{i}.") :] for b in body]
            record.append((f"outcome{i}.probability", prob))
            record += rec
    out.write("\n".join(lines) + "\n")
    if args.out:
        _write(args.out, format_record(record))
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    tf, profile = _load_instance(args)
    tree = tf.tree
    config = _config(args)
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    est = monte_carlo_revenue(
        tree, profile, config, args.reps, args.seed,
        baseline=args.baseline, price=args.price, n_jobs=args.jobs,
    )
    if args.baseline:
        x = len(tree.seller_children)
        p = optimal_price(x) if args.price is None else args.price
        target = (1 - p**x) * p
    else:
        target = expected_revenue_fpdm(branches(effective_tree(tree, profile)).sizes)
    lines = [
        f"mechanism: {'baseline' if args.baseline else 'fpdm'}",
        f"replications: {est.replications}",
        f"seed: {est.seed}",
        f"mean: {_fmt(est.mean)}",
        f"std_error: {_fmt(est.std_error)}",
        f"closed_form: {_fmt(target)}",
        f"z: {_fmt(est.z_score(target))}",
    ]
    out.write("\n".join(lines) + "\n")
    if args.out:
        _write(args.out, format_record([
            ("replications", est.replications), ("seed", est.seed), ("mean", est.mean),
            ("std_error", est.std_error), ("closed_form", target), ("z", est.z_score(target)),
        ]))
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise UsageError("--sizes needs positive integers")
    return sizes


def cmd_sweep(args, out) -> int:
    if args.sizes:
        points = [revenue_point(sorted(_parse_sizes(s), reverse=True)) for s in args.sizes]
    else:
        k_min = args.x if args.k_min is None else args.k_min
        if args.x < 1 or k_min < args.x or args.k_max < k_min:
            raise UsageError("need 1 <= x <= k-min <= k-max")
        points = revenue_curve(args.x, range(k_min, args.k_max + 1))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "x", "e_fpdm", "e_base", "e_opt", "ratio"])
    for p in points:
        writer.writerow([p.k, p.x, repr(p.e_fpdm), repr(p.e_base), repr(p.e_opt), repr(p.ratio)])
    if args.out:
        _write(args.out, buf.getvalue())
        worst = min(points, key=lambda p: p.ratio)
        beat = sum(p.e_fpdm > p.e_base for p in points)
        out.write(
            f"wrote {len(points)} rows to {args.out}\n"
            f"min ratio {_fmt(worst.ratio)} at k={worst.k}\n"
            f"e_fpdm > e_base in {beat}/{len(points)} rows\n"
        )
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def _auto_grid_step(max_nodes: int) -> float:
    per_axis = max(2, min(10, int(math.floor(10 ** (6 / max_nodes) + 1e-9))))
    return 1 / per_axis


def cmd_verify(args, out) -> int:
    alphas = args.alpha if args.alpha else list(DEFAULT_VERIFY_ALPHAS)
    try:
        configs = [MechanismConfig(alpha=a, reward_mode=args.mode, threshold=args.threshold) for a in alphas]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.samples:
        source = ValuationSample(args.samples, args.seed)
    else:
        source = ValuationGrid(args.grid_step or _auto_grid_step(args.max_nodes))
    if args.scope == "full" and args.prop == "ir":
        raise UsageError("--scope full applies to ic only")
    try:
        report = verify_trees(
            args.prop, args.max_nodes, source, configs,
            scope=args.scope, allow_opt_out=args.opt_out,
            max_records=args.max_records, n_jobs=args.jobs,
        )
    except (ScopeError, ValueError) as exc:
        raise UsageError(str(exc)) from None

    not_replayed = [v for v in report.violations if not v.replays()]
    lines = [
        f"# fpdm verify {args.prop}",
        f"max_nodes: {args.max_nodes}",
        f"valuations: {source.describe()}",
        f"mode: {args.mode}",
        f"alphas: {' '.join(repr(float(a)) for a in alphas)}",
        f"scope: {args.scope}",
        *report.summary_lines(),
        f"replay_failures: {len(not_replayed)}",
    ]
    body = lines + ["", "## violations"] + [v.describe() for v in report.violations]
    body += ["", "## invariant failures"] + list(report.invariant_failures)
    text = "\n".join(body) + "\n"
    if args.out:
        _write(args.out, text)
        out.write("\n".join(lines) + "\n")
    else:
        out.write(text)
    if report.invariant_failures or not_replayed:
        return EXIT_VIOLATION
    if report.violation_count and not args.findings_ok:
        return EXIT_VIOLATION
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _unit_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text}")
    return value


def _mechanism_flags(p: argparse.ArgumentParser, *, alpha=True, tiebreak=True) -> None:
    if alpha:
        p.add_argument("--alpha", type=_unit_float, default=0.1, help="reward scale in [0, 1]")
    p.add_argument("--mode", choices=("literal", "clamped"), default="clamped", help="path reward rule")
    p.add_argument("--threshold", choices=("strict", "weak"), default=None,
                   help="claim rule (default: strict for baseline, weak for fpdm)")
    if tiebreak:
        p.add_argument("--tiebreak", choices=("seeded", "expect"), default="seeded")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpdm", description="Fixed-price diffusion mechanism toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="optimal posted price and its expected revenue")
    p.add_argument("x", type=int, help="number of buyers")
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("run", help="run a mechanism on one instance")
    p.add_argument("--tree", required=True)
    p.add_argument("--valuations")
    p.add_argument("--actions")
    p.add_argument("--baseline", action="store_true", help="sell to the seller's neighbours only")
    p.add_argument("--price", type=_unit_float, help="baseline price (default: optimal)")
    p.add_argument("--out", help="write a key = value outcome record")
    _mechanism_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="Monte Carlo revenue against the closed form")
    p.add_argument("--tree", required=True)
    p.add_argument("--actions")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--baseline", action="store_true")
    p.add_argument("--price", type=_unit_float)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    _mechanism_flags(p, tiebreak=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="expected revenue curves as CSV")
    p.add_argument("--x", type=int, default=5, help="seller neighbours (chain scenario)")
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int, default=200)
    p.add_argument("--sizes", action="append", help="explicit branch sizes, e.g. 5,3,2 (repeatable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="exhaustive IR / IC checks over small trees")
    p.add_argument("prop", choices=("ir", "ic"))
    p.add_argument("--max-nodes", type=int, default=5, help="largest buyer count (1..9)")
    p.add_argument("--grid-step", type=float, help="offset valuation grid step (default: auto, 0.1 up to 6 buyers)")
    p.add_argument("--samples", type=int, help="use N sampled profiles instead of a grid")
    p.add_argument("--alpha", type=_unit_float, action="append", help="repeatable; default 0, 0.1, 1")
    p.add_argument("--scope", choices=("unilateral", "full"), default="unilateral")
    p.add_argument("--opt-out", action="store_true", help="also test opting out (nil)")
    p.add_argument("--max-records", type=int, default=20)
    p.add_argument("--findings-ok", action="store_true", help="violations do not fail the run")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    _mechanism_flags(p, alpha=False, tiebreak=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"fpdm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
