"""Command-line front end.

Exit codes: 0 holds/success, 2 violated (or embedding refused), 3
indeterminate, 64 bad configuration or hypothesis failure, 65 enumeration
budget exceeded, 74 I/O error.  With the exact engine, identical
invocations produce byte-identical JSON apart from the runtime_ms field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import acceptance, battery
from .algebra import (
    Exhaustive,
    Sampled,
    adjoin_identity,
    builtin_instances,
    check_invariance,
    get_instance,
)
from .errors import (
    BudgetExceeded,
    ConstraintViolation,
    HypothesisNotSatisfied,
    IdempotentPresent,
    LambdaNotLessThanOne,
    NotStronglyLeftInvariant,
    SglabError,
    UnknownInstance,
)
from .inequalities import (
    HJParams,
    hj_general,
    hj_hm,
    hj_lt,
    js_bound,
    kn_bounds,
    levy_ottaviani,
    mogulskii,
    moment_bound,
    ottaviani_skorohod,
)
from .probability import Exact, FiniteDistribution, MonteCarlo
from .seeding import spawn_rng

EXIT_HOLDS = 0
EXIT_VIOLATED = 2
EXIT_INDETERMINATE = 3
EXIT_BAD_CONFIG = 64
EXIT_BUDGET = 65
EXIT_IO = 74

VERIFY_NAMES = (
    "hj-general",
    "hj-lt",
    "hj-hm",
    "js",
    "kn",
    "os",
    "mogulskii",
    "levy-ottaviani",
    "moment",
)

CSV_COLUMNS = ("inequality", "instance", "lhs", "rhs", "slack", "verdict", "engine", "seed")


def _parse_dist_entries(inst, text):
    """Parse one variable's law: comma-separated ``codec:weight`` entries.

    Coordinates may themselves contain commas ("2.0,1.0:0.5"); a weight
    (the part after the colon) terminates each entry.
    """
    pairs = []
    pending = []
    for token in text.split(","):
        head, sep, tail = token.rpartition(":")
        if not sep:
            pending.append(token)
            continue
        pending.append(head)
        code = ",".join(pending)
        pending = []
        pairs.append((inst.decode(code), float(tail)))
    if pending:
        raise ConstraintViolation(f"dangling coordinates without a weight: {text!r}")
    if not pairs:
        raise ConstraintViolation(f"empty distribution spec: {text!r}")
    return FiniteDistribution.from_pairs(inst, pairs)


def parse_distributions(inst, spec, replicate=None):
    """';'-separated per-variable laws; ``replicate`` repeats a single law."""
    laws = [_parse_dist_entries(inst, part) for part in spec.split(";") if part.strip()]
    if replicate is not None:
        if len(laws) != 1:
            raise ConstraintViolation("--n replicates a single shared law")
        laws = laws * replicate
    return laws


def _base_point(inst, text):
    if text is not None:
        return inst.decode(text)
    if inst.identity is not None:
        return inst.identity
    raise ConstraintViolation(
        f"{inst.name} has no identity: pass --z0/--z1 explicitly"
    )


def _engine_from_args(args):
    if args.engine == "exact":
        return Exact(budget=args.budget)
    return MonteCarlo(seed=args.seed, samples=args.samples)


def _floats(text):
    return tuple(float(x) for x in text.split(","))


def _ints(text):
    return tuple(int(x) for x in text.split(","))


def _report_rows(report):
    eng = report["engine"]
    return {
        "inequality": report["inequality"],
        "instance": report["instance"],
        "lhs": report["lhs"]["value"],
        "rhs": report["rhs"]["value"],
        "slack": report["slack"],
        "verdict": report["verdict"],
        "engine": eng["type"],
        "seed": eng.get("seed", ""),
    }


def _emit(payload, out, fmt):
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    else:
        reports = payload if isinstance(payload, list) else [payload]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for rep in reports:
            writer.writerow(_report_rows(rep))
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _invariance_line(inst):
    marks = ", ".join(
        f"{kind}: {'yes' if inst.invariance.get(kind) else 'no'}"
        for kind in ("left", "right", "bi", "strong-left", "strong-right")
    )
    return f"{inst.name} {{{marks}}}"


def cmd_instances(args):
    cat = builtin_instances()
    if args.action == "list":
        for name in sorted(cat):
            print(_invariance_line(cat[name]))
        return 0
    inst = get_instance(args.name)
    print(_invariance_line(inst))
    print(f"  codec prefix: {inst.codec_prefix}")
    print(f"  identity: {inst.encode(inst.identity) if inst.identity is not None else 'none'}")
    print(f"  discrete: {inst.discrete}, complete (annotation): {inst.complete}")
    print(f"  {inst.description}")
    return 0


def cmd_invariance(args):
    inst = get_instance(args.instance)
    if args.exhaustive:
        mode = Exhaustive(bound=args.bound)
    else:
        mode = Sampled(count=args.samples, seed=args.seed)
    report = check_invariance(inst, args.kind, mode, tol=args.tol)
    expected = bool(inst.invariance.get(args.kind, False))
    print(f"{inst.name} {args.kind}: holds={report.holds} (expected {expected}), "
          f"checked={report.checked}, max discrepancy={report.max_discrepancy:.3g}")
    if report.witness is not None:
        w = report.witness
        print(f"  witness {w.relation}: elements={w.elements} gives {w.lhs!r} != {w.rhs!r}")
    return 0 if report.holds == expected else 1


def _run_verify(args):
    inst = get_instance(args.instance)
    dists = parse_distributions(inst, args.dist, args.n)
    engine = _engine_from_args(args)
    orientation = args.orientation

    if args.inequality in ("js", "kn"):
        if args.inequality == "js":
            reports = [js_bound(dists, args.k, args.t, engine)]
        else:
            reports = kn_bounds(dists, args.k, engine)
    else:
        z0 = _base_point(inst, args.z0)
        z1 = _base_point(inst, args.z1)
        if args.inequality == "hj-general":
            params = HJParams(
                _ints(args.counts), _floats(args.thresholds), args.s, z0, z1,
                orientation, args.strengthened,
            )
            reports = [hj_general(dists, params, engine)]
        elif args.inequality == "hj-lt":
            reports = [hj_lt(dists, args.t, args.s, z0, z1, engine, orientation)]
        elif args.inequality == "hj-hm":
            reports = [hj_hm(dists, args.bigk, args.t, args.s, z0, z1, engine, orientation)]
        elif args.inequality == "os":
            reports = [ottaviani_skorohod(dists, args.alpha, args.beta, z0, z1, orientation, engine)]
        elif args.inequality == "mogulskii":
            reports = [mogulskii(dists, args.m, args.a, args.b, args.variant, z0, z1, orientation, engine)]
        elif args.inequality == "levy-ottaviani":
            reports = [levy_ottaviani(dists, _floats(args.a_list), z0, z1, orientation, engine)]
        elif args.inequality == "moment":
            reports = [moment_bound(dists, args.p, z0, z1, orientation, engine)]
        else:
            raise ConstraintViolation(f"unknown inequality {args.inequality!r}")
    return reports


def cmd_verify(args):
    reports = _run_verify(args)
    dicts = [r.to_dict() for r in reports]
    _emit(dicts if len(dicts) > 1 else dicts[0], args.out, args.format)
    for r in reports:
        print(
            f"{r.name} on {r.instance}: lhs={r.lhs.value} rhs={r.rhs.value} "
            f"slack={r.slack} verdict={r.verdict}",
            file=sys.stderr,
        )
    worst = max(("holds", "indeterminate", "violated").index(r.verdict) for r in reports)
    return (EXIT_HOLDS, EXIT_INDETERMINATE, EXIT_VIOLATED)[worst]


def cmd_suite(args):
    # fail fast on an unwritable output path before hours of computation
    sink = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        scales = {}
        if args.quick:
            scales = dict(engine_pairs=10, engine_samples=20_000, levy_samples=2000,
                          stress_trials=20)
        results = acceptance.run_all(
            seed=args.seed, trials=args.trials, parallelism=args.parallelism, **scales
        )
        bat = acceptance._battery_result(args.seed, args.trials, args.parallelism)
        for res in results:
            print(res.line())
        payload = {
            "criteria": [
                {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "summary": bat["summary"],
            "reports": bat["reports"],
        }
        if sink is not None:
            json.dump(payload, sink, indent=2)
            sink.write("\n")
    finally:
        if sink is not None:
            sink.close()
    return 0 if all(r.passed for r in results) else 1


def cmd_embed(args):
    inst = get_instance(args.instance)
    try:
        monoid = adjoin_identity(inst)
    except IdempotentPresent as exc:
        print(f"cannot adjoin an identity to {inst.name}: idempotent present: {exc.witness!r}")
        return 2
    except NotStronglyLeftInvariant as exc:
        print(f"cannot adjoin an identity to {inst.name}: not strongly left-invariant: {exc.witness!r}")
        return 2
    rng = spawn_rng(args.seed)
    print(f"adjoined monoid {monoid.name} with identity 'e'; d(e, g) = d(g, g^2):")
    for _ in range(args.count):
        g = inst.sample_fn(rng)
        print(f"  d(e, {inst.encode(g)}) = {monoid.dist_fn(monoid.identity, g)!r}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sglab",
        description="Metric semigroup laboratory: instances, invariance checks, "
        "and exact/Monte Carlo verification of maximal inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("instances", help="list the instance catalog")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_instances)

    p = sub.add_parser("invariance", help="run one invariance check")
    p.add_argument("--instance", required=True)
    p.add_argument("--kind", required=True,
                   choices=("left", "right", "bi", "strong-left", "strong-right"))
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("verify", help="check one inequality")
    p.add_argument("--inequality", required=True, choices=VERIFY_NAMES)
    p.add_argument("--instance", required=True)
    p.add_argument("--dist", required=True,
                   help="per-variable laws 'codec:weight,...' separated by ';'")
    p.add_argument("--n", type=int, default=None, help="replicate a single shared law")
    p.add_argument("--z0", default=None)
    p.add_argument("--z1", default=None)
    p.add_argument("--orientation", choices=("left", "right"), default="left")
    p.add_argument("--engine", choices=("exact", "mc"), default="exact")
    p.add_argument("--budget", type=int, default=Exact().budget)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--bigk", type=int, default=None, help="K for hj-hm")
    p.add_argument("--counts", default=None, help="comma-separated n_i for hj-general")
    p.add_argument("--thresholds", default=None, help="comma-separated t_i for hj-general")
    p.add_argument("--strengthened", action="store_true")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--variant", choices=("min", "max"), default="min")
    p.add_argument("--a-list", dest="a_list", default=None, help="comma-separated a_i")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--quick", action="store_true",
                   help="smoke scales for the heavy criteria (not the stated acceptance scales)")
    p.add_argument("--out", default=None)
    p.add_argument(
        "--parallelism",
        type=int,
        default=int(os.environ.get("SGLAB_PARALLELISM", "1")),
    )
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("embed", help="adjoin an identity if legal")
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_embed)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        UnknownInstance,
        ConstraintViolation,
        LambdaNotLessThanOne,
        HypothesisNotSatisfied,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SglabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
