"""Command-line front door: run identity suites and dump symbolic quantities.

Exit status: 0 when every selected identity passes, 1 when any fails, 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import correlators, genus2
from .derivation import gstar_row, lam, omega, pairing, theta, v
from .errors import EngineError
from .expr import Context, Expression
from .identities import REGISTRY, IdentityReport, get_spec, identity_ids, verify


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigphase",
        description="Exact verification of the rotation-coefficient "
                    "calculus and the genus-2 Virasoro constraint at "
                    "concrete dimension N.")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run identity checks")
    pv.add_argument("--n", type=int, default=2,
                    help="dimension (number of idempotents), 1..4")
    pv.add_argument("--identity", action="append", default=[],
                    metavar="ID", help="identity id (repeatable); see --list")
    pv.add_argument("--all", action="store_true",
                    help="run every identity supported at this dimension")
    pv.add_argument("--max-tau", type=int, default=6, dest="max_tau",
                    help="t-symbol level cap (default 6)")
    pv.add_argument("--format", choices=("text", "json"), default="text")
    pv.add_argument("--threads", type=int, default=1,
                    help="worker threads for independent identities")
    pv.add_argument("--allow-heavy", action="store_true",
                    help="enable the heaviest dimension/identity "
                         "combinations (e.g. the split route at N=3)")
    pv.add_argument("--list", action="store_true",
                    help="list identity ids and exit")

    pd = sub.add_parser("dump", help="render a symbolic quantity")
    pd.add_argument("target", help="quantity name, e.g. f2-rotation, "
                    "l1f2, prediction-gstar, split-a1, b-diag:1, "
                    "theta:1,2, z:1,1,2,2, phi:1,2, pairing:S:2:1, "
                    "pairing:L:1:2:1, gstar:1")
    pd.add_argument("--n", type=int, default=2)
    pd.add_argument("--max-tau", type=int, default=6, dest="max_tau")
    pd.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _select_identities(args) -> list:
    if args.list:
        return []
    if args.all and args.identity:
        raise UsageError("--all and --identity are mutually exclusive")
    if not args.all and not args.identity:
        raise UsageError("select identities with --identity or --all")
    if not 1 <= args.n <= 4:
        raise UsageError(f"--n {args.n} out of range 1..4")
    if args.all:
        return [s for s in REGISTRY if s.supports(args.n, args.allow_heavy)]
    specs = []
    for ident in args.identity:
        spec = get_spec(ident)  # raises UnknownIdentity
        if not spec.supports(args.n, args.allow_heavy):
            hint = (" (pass --allow-heavy)" if spec.heavy_n_max
                    and args.n <= spec.heavy_n_max else "")
            raise UsageError(
                f"identity {ident!r} does not run at n={args.n}{hint}")
        specs.append(spec)
    return specs


def _format_text(report: IdentityReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return (f"{report.identity:24s} n={report.n}  {status}  "
            f"checks={report.checks:5d}  witness_terms="
            f"{report.witness_terms:4d}  elapsed_ms={report.elapsed_ms}")


def _cmd_verify(args) -> int:
    if args.list:
        for ident in identity_ids():
            print(ident)
        return 0
    specs = _select_identities(args)
    need_tau = max((s.min_tau for s in specs), default=2)
    if args.max_tau < need_tau:
        raise UsageError(
            f"--max-tau {args.max_tau} too small for the selection "
            f"(needs >= {need_tau})")
    ctx = Context(args.n, args.max_tau)

    def run(spec) -> IdentityReport:
        return verify(spec.id, args.n, ctx=ctx,
                      allow_heavy=args.allow_heavy)

    if args.threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(run, specs))
    else:
        reports = [run(spec) for spec in specs]

    all_passed = True
    for report in reports:
        if args.format == "json":
            print(json.dumps(report.to_json()))
        else:
            print(_format_text(report))
            if not report.passed and report.witness is not None:
                text = report.witness.render()
                if len(text) > 400:
                    text = text[:400] + " ..."
                print(f"    witness: {text}")
        all_passed = all_passed and report.passed
    return 0 if all_passed else 1


def _dump_quantity(ctx: Context, target: str) -> Expression:
    name, _, rest = target.partition(":")
    simple = {
        "f2-rotation": lambda: genus2.f2(ctx, "rotation"),
        "f2-assembled": lambda: genus2.f2(ctx, "assembled"),
        "l1f2": lambda: genus2.l1_f2_closed(ctx),
        "prediction-rotation": lambda: genus2.prediction(ctx, "rotation"),
        "prediction-gstar": lambda: genus2.prediction(ctx, "gstar"),
        "split-a1": lambda: genus2.l1_constraint_split(ctx)[0],
        "split-b": lambda: genus2.l1_constraint_split(ctx)[1],
    }
    if name in simple and not rest:
        return simple[name]()
    args = [int(p) for p in rest.replace(":", ",").split(",") if p] \
        if name != "pairing" else None
    if name in ("theta", "omega", "lambda", "v"):
        fn = {"theta": theta, "omega": omega, "lambda": lam, "v": v}[name]
        if len(args) != 2:
            raise UsageError(f"{name} needs two indices, e.g. {name}:1,2")
        return fn(ctx, *args)
    if name == "b-diag":
        if len(args) != 1:
            raise UsageError("b-diag needs one index, e.g. b-diag:1")
        return genus2.b_diag(ctx, args[0])
    if name == "gstar":
        if len(args) != 1:
            raise UsageError("gstar needs one index, e.g. gstar:1")
        row = gstar_row(ctx, args[0])
        return ctx.sum(row[j - 1] for j in range(1, ctx.n + 1))
    if name in ("z", "phi"):
        genus = 0 if name == "z" else 1
        return correlators.correlator(ctx, genus, tuple(args))
    if name == "pairing":
        parts = rest.split(":")
        if parts and parts[0] == "S" and len(parts) == 3:
            return pairing(ctx, "S", int(parts[1]), int(parts[2]))
        if parts and parts[0] == "L" and len(parts) == 4:
            return pairing(ctx, ("L", int(parts[1])), int(parts[2]),
                           int(parts[3]))
        if parts and parts[0] == "X" and len(parts) == 3:
            return pairing(ctx, ("X", int(parts[1])), 0, int(parts[2]))
        raise UsageError("pairing targets: pairing:S:LEVEL:I, "
                         "pairing:L:M:LEVEL:I, pairing:X:K:I")
    raise UsageError(f"unknown dump target {target!r}")


def _cmd_dump(args) -> int:
    if not 1 <= args.n <= 4:
        raise UsageError(f"--n {args.n} out of range 1..4")
    ctx = Context(args.n, args.max_tau)
    expr = _dump_quantity(ctx, args.target)
    if args.format == "json":
        print(json.dumps(expr.to_tree()))
    else:
        print(expr.render())
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_dump(args)
    except (UsageError, EngineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
