"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain error (degenerate pair, exponent level out of range).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import gaussian
from .dist import FiniteDistribution, TiltedFamily, kl_divergence
from .errors import DegenerateFamily, DeltaOutOfRange, DomainError, NPBoundsError, SupportMismatch, TooLarge
from .report import (
    REFERENCE_EPSILONS,
    REFERENCE_N,
    REFERENCE_P,
    REFERENCE_Q,
    RowContext,
    compute_row,
    render_json,
    render_tsv,
)
from .verify import run_all

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_distribution(text: str) -> FiniteDistribution:
    """Parse ``bernoulli:<p>`` or ``probs:<c0,c1,...>``."""
    kind, sep, body = text.partition(":")
    if not sep:
        raise UsageError(f"bad distribution spec {text!r}: expected bernoulli:<p> or probs:<c0,c1,...>")
    try:
        if kind == "bernoulli":
            return FiniteDistribution.bernoulli(float(body))
        if kind == "probs":
            return FiniteDistribution(np.array([float(x) for x in body.split(",")]))
    except ValueError as exc:
        raise UsageError(f"bad distribution spec {text!r}: {exc}") from exc
    raise UsageError(f"unknown distribution kind {kind!r}")


def _family(args) -> TiltedFamily:
    p, q = parse_distribution(args.p), parse_distribution(args.q)
    if p.k != q.k:
        raise UsageError(f"alphabet sizes differ: {p.k} vs {q.k}")
    try:
        return TiltedFamily(p, q)
    except SupportMismatch as exc:
        raise DegenerateFamily(str(exc)) from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _emit(rows, args, single: bool = False) -> None:
    if args.json:
        sys.stdout.write(render_json(rows, digits=args.digits, single=single))
    else:
        sys.stdout.write(render_tsv(rows, digits=args.digits, published=getattr(args, "round_like_paper", False)))


def cmd_analyze(args) -> int:
    f = _family(args)
    ctx = RowContext(f)
    if args.delta is not None:
        _check_delta(f, args.delta)
    row = compute_row(ctx, args.n, epsilon=args.epsilon, delta=args.delta, Delta=args.delta_slack)
    _emit([row], args, single=True)
    return EXIT_OK


def _check_delta(f: TiltedFamily, delta: float) -> None:
    upper = kl_divergence(f.q, f.p)
    if not 0.0 < delta < upper:
        raise DeltaOutOfRange(f"delta={delta} outside (0, D(Q||P)={upper:.12g})")


def cmd_table(args) -> int:
    f = _family(args)
    ctx = RowContext(f)
    if args.deltas:
        rows = [compute_row(ctx, args.n, delta=d, Delta=args.delta_slack) for d in _float_list(args.deltas)]
    else:
        rows = [compute_row(ctx, args.n, epsilon=e, Delta=args.delta_slack) for e in _float_list(args.epsilons)]
    _emit(rows, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    f = _family(args)
    ctx = RowContext(f)
    _ = ctx.ext  # computed once before the workers share the context
    if args.delta_grid:
        if args.n is None:
            raise UsageError("--delta-grid requires --n")
        deltas = _float_list(args.delta_grid)
        for d in deltas:
            _check_delta(f, d)
        points = [(args.n, d) for d in deltas]
    else:
        if args.delta is None or args.n_from is None or args.n_to is None:
            raise UsageError("give --n-from/--n-to with --delta, or --delta-grid with --n")
        _check_delta(f, args.delta)
        points = [(n, args.delta) for n in range(args.n_from, args.n_to + 1, args.n_step)]
    exact = not args.no_exact

    def work(pt):
        n, d = pt
        return compute_row(ctx, n, delta=d, Delta=args.delta_slack, exact=exact)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(work, points))
    _emit(rows, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.fault_inject == "phi-inv":
        gaussian._FAULT_OFFSET = 1e-3
    try:
        def report(res):
            status = "PASS" if res.passed else "FAIL"
            line = f"{status}\t{res.name}\tchecked={res.checked}"
            if res.detail:
                line += f"\t{res.detail}"
            print(line, flush=True)

        results = run_all(seed=args.seed, report=report)
    finally:
        gaussian._FAULT_OFFSET = 0.0
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _add_pair_args(sp, defaults: bool) -> None:
    sp.add_argument("--p", default=f"bernoulli:{REFERENCE_P}" if defaults else None, required=not defaults,
                    help="distribution P, e.g. bernoulli:0.6 or probs:0.2,0.3,0.5")
    sp.add_argument("--q", default=f"bernoulli:{REFERENCE_Q}" if defaults else None, required=not defaults,
                    help="distribution Q")


def _add_output_args(sp) -> None:
    sp.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
    sp.add_argument("--digits", type=int, default=12, help="significant digits (default 12)")
    sp.add_argument("--delta-slack", type=float, default=1.0,
                    help="slack Delta of the fixed-epsilon converse (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="npbounds", description="Optimal error probabilities for asymmetric binary hypothesis testing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("analyze", help="one (n, epsilon|delta) query")
    _add_pair_args(sp, defaults=False)
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--delta", type=float)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("table", help="one row per epsilon (defaults reproduce the reference table)")
    _add_pair_args(sp, defaults=True)
    sp.add_argument("--n", type=int, default=REFERENCE_N)
    sp.add_argument("--epsilons", default=",".join(str(e) for e in REFERENCE_EPSILONS))
    sp.add_argument("--deltas", default=None, help="use exponent levels instead of epsilons")
    sp.add_argument("--round-like-paper", action="store_true",
                    help="render with the reference table's displayed precision")
    _add_output_args(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sweep", help="grid over n or delta")
    _add_pair_args(sp, defaults=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-from", type=int)
    sp.add_argument("--n-to", type=int)
    sp.add_argument("--n-step", type=int, default=1)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--delta-grid", help="comma-separated exponent levels")
    sp.add_argument("--no-exact", action="store_true", help="skip the exact oracle column")
    sp.add_argument("--workers", type=int, default=4)
    _add_output_args(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the numerical self-checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fault-inject", choices=["phi-inv"], help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "n", None) is not None and args.n < 1:
            raise UsageError("--n must be a positive integer")
        if getattr(args, "n_step", 1) < 1:
            raise UsageError("--n-step must be positive")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateFamily, DeltaOutOfRange) as exc:
        print(f"npbounds: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DomainError, TooLarge) as exc:
        print(f"npbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NPBoundsError as exc:
        print(f"npbounds: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
