"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 range/overflow error,
3 oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .analytic import (
    DEFAULT_CUTOFF,
    MODES,
    brun_partial_sum,
    compute_constants,
    predict,
)
from .base_primes import MAX_LIMIT, load_or_build
from .errors import PreconditionError, RangeError, ValidationError
from .oracle import bruteforce_survivors, compare_lists, legendre_pi, trial_is_prime
from .pattern_engine import contamination_stats, run_sieve
from .report import compare_series, delta_twin_series, log_grid, render_csv, render_json
from .variants import parse_kind, pattern_for, sieve_bound

EXIT_OK, EXIT_USAGE, EXIT_RANGE, EXIT_MISMATCH = 0, 1, 2, 3
ORACLE_MAX = 10**5


class UsageError(Exception):
    pass


class Mismatch(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _natural(text):
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _real(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def _kind(text):
    try:
        return parse_kind(text)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cache-dir", help="prime table cache directory (default: $CNSIEVE_CACHE)")
    common.add_argument("--threads", type=_natural, default=1, help="worker threads, 0 = auto")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--verify-oracle", action="store_true", help="cross-check against brute force")
    common.add_argument("--meta", action="store_true", help="prefix output with version/timestamp")

    p = _Parser(prog="cnsieve", description="central-number sieves for prime constellations")
    p.add_argument("--version", action="version", version=f"cnsieve {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("primes", parents=[common], help="prime table and pi(x)")
    s.add_argument("--limit", type=_natural, required=True)
    s.add_argument("--list", action="store_true")

    s = sub.add_parser("sieve", parents=[common], help="run a central-number sieve")
    s.add_argument("--pattern", type=_kind, required=True)
    s.add_argument("--limit", type=_natural, required=True, help="exact-regime bound on survivors")
    s.add_argument("--list", action="store_true")
    s.add_argument("--stop-prime", type=_natural, help="sieve only with primes up to this value")

    s = sub.add_parser("constants", parents=[common], help="Hardy-Littlewood and Mertens constants")
    s.add_argument("--cutoff", type=_natural, default=DEFAULT_CUTOFF)

    s = sub.add_parser("predict", parents=[common], help="predicted constellation count")
    s.add_argument("--pattern", type=_kind, required=True)
    s.add_argument("--x", type=_real, required=True)
    s.add_argument("--mode", choices=MODES, default="paper")
    s.add_argument("--cutoff", type=_natural, default=DEFAULT_CUTOFF)

    s = sub.add_parser("compare", parents=[common], help="empirical vs predicted series")
    s.add_argument("--pattern", type=_kind, required=True)
    s.add_argument("--x", type=_natural, nargs="+")
    s.add_argument("--max", type=_natural, help="grid end when --x is not given")
    s.add_argument("--points", type=_natural, default=10)
    s.add_argument("--mode", choices=MODES, default="paper")
    s.add_argument("--cutoff", type=_natural, default=DEFAULT_CUTOFF)

    s = sub.add_parser("delta-twin", parents=[common], help="twin counts between consecutive squares")
    s.add_argument("--n-min", type=_natural, default=50)
    s.add_argument("--n-max", type=_natural, default=1000)
    s.add_argument("--cutoff", type=_natural, default=DEFAULT_CUTOFF)

    s = sub.add_parser("brun", parents=[common], help="partial Brun sum")
    s.add_argument("--limit", type=_natural, required=True)
    return p


def _workers(args) -> int:
    return args.threads or os.cpu_count() or 1


def _table(args, limit):
    if limit > MAX_LIMIT:
        raise RangeError(f"{limit} exceeds the 64-bit range")
    return load_or_build(max(int(limit), 100), args.cache_dir, workers=_workers(args))


def _reach(pats, bound):
    """Table limit needed to sieve every pattern up to bound."""
    return bound + max((abs(w) for p in pats for w in p.offsets), default=0)


def _verify_pattern(pattern, sset, upto):
    upto = min(upto, ORACLE_MAX)
    if upto < pattern.start:
        return
    got = sset.survivors[sset.survivors <= upto].tolist()
    verdict = compare_lists(got, bruteforce_survivors(pattern, upto))
    if not verdict.matched:
        raise Mismatch(f"{pattern.name}: first mismatch at {verdict.first_mismatch}")


def _constants(args):
    return compute_constants(args.cutoff, _table(args, args.cutoff))


def cmd_primes(args):
    table = _table(args, max(args.limit, 2))
    if args.verify_oracle:
        upto = min(args.limit, ORACLE_MAX)
        expect = [n for n in range(2, upto + 1) if trial_is_prime(n)]
        verdict = compare_lists(table.primes_up_to(upto).tolist() if upto >= 2 else [], expect)
        if not verdict.matched:
            raise Mismatch(f"primes: first mismatch at {verdict.first_mismatch}")
        if legendre_pi(args.limit, table) != table.prime_count(args.limit):
            raise Mismatch("primes: Legendre count disagrees")
    if args.list:
        return " ".join(map(str, table.primes_up_to(args.limit).tolist())) + "\n"
    n = table.prime_count(args.limit) if args.limit >= 2 else 0
    if args.format == "json":
        return json.dumps({"limit": args.limit, "pi": n}) + "\n"
    return f"limit,pi\n{args.limit},{n}\n"


def cmd_sieve(args):
    kind = args.pattern
    pats = pattern_for(kind)
    table = _table(args, _reach(pats, args.limit))
    out, stats = [], []
    for pat in pats:
        if args.limit < pat.start:
            raise RangeError(f"limit {args.limit} is below the progression start {pat.start}")
        sset = run_sieve(pat, args.limit, table, max_sieving_prime=args.stop_prime, workers=_workers(args))
        if args.verify_oracle:
            _verify_pattern(pat, sset, sset.exact_bound)
        total, primes = contamination_stats(sset, table)
        stats.append(
            {
                "pattern": pat.name,
                "bound": sset.bound,
                "effective_limit": sset.effective_limit,
                "sieving_prime_max": sset.sieving_prime_max,
                "survivors": total,
                "prime_survivors": primes,
                "provisional": int(len(sset.provisional)),
            }
        )
        vals = " ".join(map(str, sset.survivors.tolist()))
        out.append(vals if len(pats) == 1 else f"{pat.name}: {vals}")
    if args.list:
        return "\n".join(out) + "\n"
    if args.format == "json":
        return json.dumps({"kind": kind.name, "patterns": stats}) + "\n"
    keys = list(stats[0])
    lines = [",".join(keys)] + [",".join(str(s[k]) for k in keys) for s in stats]
    return "\n".join(lines) + "\n"


def cmd_constants(args):
    if args.cutoff < 10**5:
        raise RangeError("--cutoff must be >= 100000")
    c = _constants(args)
    rows = [
        ("euler_gamma", c.euler_gamma, 0.0),
        ("meissel_mertens", c.meissel_mertens, 1.0 / (2 * c.cutoff_P)),
        ("twin_2C2", c.twin_product, c.tail_bound),
        ("twin_C2", c.twin_constant, c.tail_bound / 2),
        ("triplet", c.triplet, c.triplet_tail),
        ("quadruplet", c.quadruplet, c.quadruplet_tail),
    ]
    if args.format == "json":
        doc = {"cutoff": c.cutoff_P, "constants": {n: {"value": v, "tail_bound": t} for n, v, t in rows}}
        return json.dumps(doc) + "\n"
    lines = ["name,value,tail_bound"] + [f"{n},{v:.10g},{t:.3g}" for n, v, t in rows]
    return "\n".join(lines) + "\n"


def cmd_predict(args):
    if args.x < 4:
        raise RangeError("--x must be >= 4")
    c = _constants(args)
    v = predict(args.pattern, args.x, args.mode, c)
    if args.format == "json":
        return json.dumps({"kind": args.pattern.name, "mode": args.mode, "x": args.x, "predicted": v}) + "\n"
    return f"kind,mode,x,predicted\n{args.pattern.name},{args.mode},{args.x:.10g},{v:.10g}\n"


def cmd_compare(args):
    kind = args.pattern
    if args.x:
        xs = sorted(set(args.x))
    elif args.max:
        xs = log_grid(args.max, args.points)
    else:
        raise UsageError("compare needs --x values or --max")
    table = _table(args, max(_reach(pattern_for(kind), sieve_bound(kind, xs[-1])), args.cutoff))
    if args.verify_oracle:
        for pat in pattern_for(kind):
            bound = max(pat.start, min(sieve_bound(kind, xs[-1]), ORACLE_MAX))
            _verify_pattern(pat, run_sieve(pat, bound, table), bound)
    c = compute_constants(args.cutoff, table)
    rows = compare_series(kind, xs, args.mode, table, c, _workers(args))
    return render_json(rows, kind, args.mode) + "\n" if args.format == "json" else render_csv(rows)


def cmd_delta_twin(args):
    table = _table(args, max((args.n_max + 1) ** 2 + 2, args.cutoff))
    c = compute_constants(args.cutoff, table)
    rows = delta_twin_series(args.n_min, args.n_max, table, c)
    mean = sum(r.ratio for r in rows) / len(rows)
    zeros = [r.n for r in rows if r.empirical == 0]
    if args.verify_oracle:
        for r in rows[:50]:
            lo, hi = r.n * r.n, (r.n + 1) ** 2
            brute = sum(1 for m in range(lo + 1, hi + 1) if trial_is_prime(m - 1) and trial_is_prime(m + 1))
            if brute != r.empirical:
                raise Mismatch(f"delta-twin: mismatch at n={r.n}")
    if args.format == "json":
        doc = {
            "n_min": args.n_min,
            "n_max": args.n_max,
            "mean_ratio": mean,
            "zero_intervals": zeros,
            "rows": [{"n": r.n, "empirical": r.empirical, "estimate": r.estimate, "ratio": r.ratio} for r in rows],
        }
        return json.dumps(doc) + "\n"
    lines = ["n,empirical,estimate,ratio"]
    lines += [f"{r.n},{r.empirical},{r.estimate:.10g},{r.ratio:.10g}" for r in rows]
    lines.append(f"# mean_ratio={mean:.10g} zero_intervals={' '.join(map(str, zeros)) or 'none'}")
    return "\n".join(lines) + "\n"


def cmd_brun(args):
    table = _table(args, args.limit + 2)
    v = brun_partial_sum(args.limit, table)
    if args.verify_oracle:
        lim = min(args.limit, ORACLE_MAX)
        brute = sum(1 / p + 1 / (p + 2) for p in range(3, lim - 1) if trial_is_prime(p) and trial_is_prime(p + 2))
        if not math.isclose(brute, brun_partial_sum(lim, table), rel_tol=1e-12, abs_tol=1e-15):
            raise Mismatch("brun: partial sum disagrees with brute force")
    if args.format == "json":
        return json.dumps({"limit": args.limit, "brun_partial_sum": v}) + "\n"
    return f"limit,brun_partial_sum\n{args.limit},{v:.10g}\n"


COMMANDS = {
    "primes": cmd_primes,
    "sieve": cmd_sieve,
    "constants": cmd_constants,
    "predict": cmd_predict,
    "compare": cmd_compare,
    "delta-twin": cmd_delta_twin,
    "brun": cmd_brun,
}


def _meta_line(args) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return f"# cnsieve {__version__} {args.command} {stamp}\n"


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help / --version
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        text = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RangeError, PreconditionError, OverflowError, MemoryError) as e:
        print(f"range error: {e}", file=sys.stderr)
        return EXIT_RANGE
    except Mismatch as e:
        print(f"oracle mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.meta:
        text = _meta_line(args) + text
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
