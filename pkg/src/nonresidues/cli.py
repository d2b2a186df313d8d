"""Command-line front end.

Subcommands:
  table        regenerate the frozen-constant table (text/csv/json)
  bound        evaluate a frozen constant and the bound it gives at (n, p)
  nonresidues  smallest prime nonresidues of an order-d character mod p
  verify       run the lemma oracles and emit a JSON report
  scan         scan a prime range against a frozen bound

Exit codes: 0 success / all checks passed, 1 verification failure,
2 usage error, 3 resource-cap exhaustion.  NONRES_WORKERS sets the default
worker count for scans.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import bounds as bd
from . import lemmas as lm
from . import scan as sc
from .characters import SearchCapExceededError, prime_nonresidues

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3

TABLE_DEFAULT_N0 = "1..8"
TABLE_DEFAULT_P0 = "1e7,1e8,1e9,1e10,1e15,1e20,1e25,1e30,1e35"


def schema_path(name: str) -> str:
    """Filesystem path of a shipped JSON schema (e.g. "scan_summary")."""
    return str(resources.files("nonresidues.schemas").joinpath(f"{name}.schema.json"))


class UsageError(Exception):
    pass


def _parse_int_spec(spec: str) -> list[int]:
    """Integer list: "3", "1,2,5" or "1..8"."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer spec: {spec!r}")
    return out


def _parse_float_list(spec: str) -> list[float]:
    """Float list, scientific notation welcome: "1e7,1e8" or "1e7,1e8,...,1e12"
    (the ellipsis continues the ratio of the two preceding entries)."""
    parts = [s.strip() for s in spec.split(",") if s.strip()]
    out: list[float] = []
    i = 0
    while i < len(parts):
        if parts[i] in ("...", ".."):
            if len(out) < 2 or i + 1 >= len(parts):
                raise UsageError("'...' needs two values before and one after")
            ratio = out[-1] / out[-2]
            stop = float(parts[i + 1])
            if ratio <= 1 or out[-1] >= stop:
                raise UsageError("'...' requires an increasing progression")
            v = out[-1] * ratio
            while v < stop * (1 - 1e-9):
                out.append(v)
                v *= ratio
            out.append(stop)
            i += 2
        else:
            out.append(float(parts[i]))
            i += 1
    if not out:
        raise UsageError(f"empty float list: {spec!r}")
    return out


def _write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_table(args: argparse.Namespace) -> int:
    n0s = _parse_int_spec(args.n0)
    p0s = _parse_float_list(args.p0)
    table = bd.make_table(n0s, p0s)
    if args.format == "text":
        _write_out(bd.render_table_text(table), args.out)
    elif args.format == "csv":
        _write_out(bd.render_table_csv(table), args.out)
    else:
        _write_out(json.dumps(bd.table_to_json_obj(table), indent=2), args.out)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    n, p = args.n, args.p
    n0 = args.n0 if args.n0 is not None else n
    p0 = args.p0 if args.p0 is not None else p
    ok, failed = bd.reference_validity(n0, p0)
    res = bd.compute_g(n0, p0)
    if not ok or res.g is None:
        msg = f"reference pair (n0={n0}, p0={p0}) is invalid: {', '.join(failed)}"
        if args.format == "json":
            _write_out(json.dumps({
                "n": n, "p": p, "n0": n0, "p0": p0, "c": None, "bound": None,
                "reference_valid": False, "failed_conditions": list(failed),
                "warnings": [],
            }, indent=2), args.out)
        else:
            print(msg, file=sys.stderr)
        return EXIT_USAGE

    warnings = []
    if p < p0:
        warnings.append(f"p={p} is below p0={p0}: the frozen bound does not cover it")
    if n > n0:
        warnings.append(f"n={n} exceeds n0={n0}: the frozen bound does not cover it")
    c = res.g
    bound = bd.compute_bound(n, p, c)
    if args.format == "json":
        _write_out(json.dumps({
            "n": n, "p": p, "n0": n0, "p0": p0, "c": c, "bound": bound,
            "reference_valid": True, "failed_conditions": [],
            "warnings": warnings,
        }, indent=2), args.out)
    else:
        lines = [
            f"C = g({n0}, {p0:g}) = {c:.6f} (publishable: {bd.ceil_3dp(c):.3f})",
            f"bound at (n={n}, p={p:g}): q_{n} <= {bound:.3f}",
        ]
        lines += [f"warning: {w}" for w in warnings]
        _write_out("\n".join(lines), args.out)
    return EXIT_OK


def cmd_nonresidues(args: argparse.Namespace) -> int:
    cap_hit = False
    try:
        q = prime_nonresidues(args.p, args.d, args.n, search_cap=args.cap)
    except SearchCapExceededError as e:
        q = e.found
        cap_hit = True
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        _write_out(json.dumps({
            "p": args.p, "d": args.d, "count": args.n, "q": q,
            "cap_exhausted": cap_hit, "search_cap": args.cap,
        }, indent=2), args.out)
    else:
        _write_out(" ".join(map(str, q)) if q else "", args.out)
        if cap_hit:
            print(
                f"search cap {args.cap} exhausted after {len(q)} of {args.n}",
                file=sys.stderr,
            )
    return EXIT_CAP if cap_hit else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.all:
        selected = list(lm.LEMMA_NAMES)
    elif args.lemma:
        selected = []
        for spec in args.lemma:
            selected.extend(s.strip() for s in spec.split(",") if s.strip())
    else:
        print("error: select lemmas with --all or --lemma NAME", file=sys.stderr)
        return EXIT_USAGE

    cfg = lm.VerifyConfig(seed=args.seed)
    if args.r_max is not None:
        cfg.stirling_r_max = args.r_max
        cfg.convexity_r_max = args.r_max
        cfg.s_upper_r_max = min(args.r_max, cfg.s_upper_r_max)
    if args.x_max is not None:
        cfg.totient_x_max = args.x_max
    if args.h_max is not None:
        cfg.convexity_h_max = args.h_max
        cfg.s_upper_h_max = min(args.h_max, cfg.s_upper_h_max)
    if args.p_max is not None:
        cfg.s_upper_p_max = min(args.p_max, cfg.s_upper_p_max)
        cfg.disjoint_p_max = args.p_max
        cfg.proposition_p_limit = args.p_max
        cfg.shifted_p_limit = min(args.p_max, cfg.shifted_p_limit)
    if args.trials is not None:
        cfg.disjoint_trials = args.trials
    if args.instances is not None:
        cfg.proposition_instances = args.instances

    try:
        report = lm.run_verification(selected, cfg)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    for name, rep in report["lemmas"].items():
        status = "PASS" if rep["failures"] == 0 else "FAIL"
        print(
            f"{status} {name}: {rep['instances_run']} instances, "
            f"{rep['failures']} failures, {rep['vacuous_skips']} vacuous, "
            f"{rep['elapsed_s']:.1f}s"
        )
    if args.report:
        _write_out(json.dumps(report, indent=2), args.report)
    else:
        _write_out(json.dumps(report, indent=2), None)
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


def _order_policy(spec: str) -> sc.OrderPolicy:
    if spec == "quadratic":
        return sc.OrderPolicy.quadratic()
    if spec.startswith("upto:"):
        return sc.OrderPolicy.divisors_up_to(int(spec[5:]))
    if spec.startswith("set:"):
        return sc.OrderPolicy.fixed_set([int(x) for x in spec[4:].split(",")])
    raise UsageError(
        f"bad order policy {spec!r}; use quadratic, upto:D or set:d1,d2,..."
    )


def cmd_scan(args: argparse.Namespace) -> int:
    policy = _order_policy(args.orders)
    task = sc.ScanTask.make(
        p_lo=int(args.p_lo),
        p_hi=int(args.p_hi),
        policy=policy,
        n_max=args.n_max,
        n0=args.n0,
        p0=args.p0,
        c=args.c,
        search_cap=args.cap,
        shard_width=args.shard_width,
        check_bound=not args.no_bound_check,
    )
    workers = args.workers
    try:
        summary = sc.run_scan(
            task,
            out_path=args.out,
            fmt=args.format,
            workers=workers,
            checkpoint_path=args.checkpoint,
            stop_after_shards=args.stop_after_shards,
            raise_on_violation=not args.keep_going,
        )
    except sc.ScanViolationError as e:
        print(f"BOUND VIOLATION (implementation bug): {e}", file=sys.stderr)
        return EXIT_FAIL
    except sc.TaskMismatchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _write_out(summary.to_json(), args.summary)
    if summary.aggregate.violations > 0:
        return EXIT_FAIL
    if summary.aggregate.cap_exhausted > 0:
        return EXIT_CAP
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nonres",
        description="Explicit bounds for small prime nonresidues: constants, "
        "characters, lemma verification and range scanning.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="regenerate the frozen-constant table")
    t.add_argument("--n0", default=TABLE_DEFAULT_N0, help="rows, e.g. 1..8 or 2,4")
    t.add_argument("--p0", default=TABLE_DEFAULT_P0,
                   help="columns, e.g. 1e7,1e8 (scientific notation ok)")
    t.add_argument("--format", choices=("text", "csv", "json"), default="text")
    t.add_argument("--out", default=None, help="output path (default stdout)")
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("bound", help="frozen constant and bound at (n, p)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--n0", type=int, default=None, help="reference n0 (default n)")
    b.add_argument("--p0", type=float, default=None, help="reference p0 (default p)")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bound)

    q = sub.add_parser("nonresidues", help="smallest prime nonresidues")
    q.add_argument("--p", type=int, required=True, help="odd prime modulus")
    q.add_argument("--d", type=int, required=True, help="character order, d | p-1")
    q.add_argument("--n", type=int, required=True, help="how many")
    q.add_argument("--cap", type=int, default=10**6, help="search cap on q")
    q.add_argument("--format", choices=("text", "json"), default="text")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_nonresidues)

    v = sub.add_parser("verify", help="run lemma oracles")
    v.add_argument("--all", action="store_true", help="run every lemma sweep")
    v.add_argument("--lemma", action="append", default=None,
                   help=f"one of {', '.join(lm.LEMMA_NAMES)} (repeatable)")
    v.add_argument("--small", action="store_true",
                   help="desk-scale grids (the defaults; kept for explicitness)")
    v.add_argument("--r-max", type=int, default=None)
    v.add_argument("--x-max", type=int, default=None)
    v.add_argument("--h-max", type=int, default=None)
    v.add_argument("--p-max", type=int, default=None)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--instances", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="scan a prime range against a frozen bound")
    s.add_argument("--p-lo", type=float, required=True)
    s.add_argument("--p-hi", type=float, required=True)
    s.add_argument("--orders", default="quadratic",
                   help="quadratic | upto:D | set:d1,d2,...")
    s.add_argument("--n-max", type=int, default=1)
    s.add_argument("--n0", type=int, default=None, help="reference n0 (default n-max)")
    s.add_argument("--p0", type=float, default=None, help="reference p0 (default p-lo)")
    s.add_argument("--c", type=float, default=None,
                   help="frozen constant (default: g(n0,p0) rounded up)")
    s.add_argument("--cap", type=int, default=10**6)
    s.add_argument("--shard-width", type=int, default=sc.DEFAULT_SHARD_WIDTH)
    s.add_argument("--workers", type=int,
                   default=int(os.environ.get("NONRES_WORKERS", "1")))
    s.add_argument("--out", default=None, help="record stream path")
    s.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    s.add_argument("--summary", default=None, help="summary path (default stdout)")
    s.add_argument("--checkpoint", default=None, help="checkpoint file; resumes if present")
    s.add_argument("--stop-after-shards", type=int, default=None,
                   help="stop early after N shards (for interruption testing)")
    s.add_argument("--keep-going", action="store_true",
                   help="record violations instead of halting")
    s.add_argument("--no-bound-check", action="store_true",
                   help="skip the reference constant entirely")
    s.set_defaults(func=cmd_scan)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
