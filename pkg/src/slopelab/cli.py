"""Command line entry point.

Exit codes: 0 success, 1 domain error (JSON on stderr naming the error
variant), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import adic_disk as ad
from . import division_algebras as dl
from . import hn_kottwitz as hk
from . import isocrystals as iso
from . import legendre as lg
from . import np_calculus as npc
from . import selftest
from .errors import SlopelabError
from .finite_field import is_prime
from .padic import default_precision

MIN_PREC = 8


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _precision(text: str) -> int:
    n = int(text)
    if n < MIN_PREC:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PREC}")
    return n


def _multiset(text: str) -> npc.SlopeMultiset:
    try:
        return npc.SlopeMultiset.parse(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad multiset {text!r}: {exc}") from None


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _emit(obj) -> None:
    print(json.dumps(obj))


def _prec(args) -> int:
    prec = args.prec if getattr(args, "prec", None) is not None else default_precision()
    if prec < MIN_PREC:
        raise UsageError(f"precision must be at least {MIN_PREC}")
    return prec


# -- subcommands ---------------------------------------------------------

def cmd_slopes(args) -> int:
    M = iso.Isocrystal.from_json(_read_json(args.file), prec=_prec(args))
    slopes = iso.generic_newton_polygon(M) if args.generic else iso.newton_slopes(M)
    _emit(slopes.to_json())
    return 0


def cmd_np(args) -> int:
    if args.np_command == "dominance":
        print(npc.dominance(args.a, args.b))
    elif args.np_command == "polygon":
        _emit(npc.np_from_multiset(args.m).to_json())
    elif args.np_command == "scale":
        _emit(npc.scale(Fraction(args.by), args.m).to_json())
    elif args.np_command == "negate":
        _emit(npc.negate(args.m).to_json())
    elif args.np_command == "preceq":
        _emit(npc.conv_preceq(npc.np_from_multiset(args.f), npc.np_from_multiset(args.g)))
    return 0


def cmd_kottwitz(args) -> int:
    _emit([m.to_json() for m in hk.kottwitz_set(args.rank, args.mu)])
    return 0


def cmd_hn_check(args) -> int:
    M = iso.Isocrystal.from_json(_read_json(args.file), prec=_prec(args))
    count, ok = hk.hn_dominance_sweep(M)
    _emit({"filtrations": count, "all_dominate": ok})
    return 0


def cmd_dlambda(args) -> int:
    results = dl.property_suite(args.p, args.d, args.h, prec=_prec(args), samples=args.samples, seed=args.seed)
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if all(results.values()) else 1


def cmd_tube(args) -> int:
    closed = ad.parse_polynomial(args.closed) if args.closed else None
    Z = ad.LocallyClosed.of(closed, [ad.parse_polynomial(g) for g in args.open])
    x = ad.AdicDiskPoint.parse(args.p, args.point)
    res = ad.tube_membership(x, Z)
    sp = ad.specialize(x)
    out = {"point": str(x), "sp": sp, **res.to_json(),
           "spmax_membership": "In" if ad.spmax_preimage_membership(x, Z) else "Out"}
    if closed:
        out["norm"] = str(ad.eval_norm(x, closed))
    _emit(out)
    return 0


def _classify(job):
    p, text = job
    x = lg.LegendrePoint.parse(p, text)
    return lg.PartitionRow(text.strip(), x, lg.classify_point(p, x), lg.is_rank2_boundary(x))


def cmd_legendre(args) -> int:
    grid = lg.resolve_grid(args.p, args.grid)
    if args.jobs > 1:
        lg.supersingular_lambdas(args.p)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_classify, [(args.p, g) for g in grid]))
    else:
        rows = lg.emit_partition(args.p, grid)
    text = lg.partition_csv(rows)
    if args.svg:
        Path(args.svg).write_text(lg.partition_svg(args.p, rows))
    if args.csv:
        Path(args.csv).write_text(text)
        ss = lg.supersingular_disks(rows)
        _emit({"rows": len(rows), "supersingular_disks": [r.descriptor for r in ss]})
    else:
        sys.stdout.write(text)
    return 0


def cmd_selftest(args) -> int:
    results = selftest.run(jobs=args.jobs)
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if all(results.values()) else 1


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slopelab", description="Exact slope computations.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slopes", help="Newton slopes of an isocrystal JSON file")
    p.add_argument("file")
    p.add_argument("--prec", type=_precision)
    p.add_argument("--generic", action="store_true", help="report the negated (generic fibre) polygon")
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("np", help="slope multiset and polygon operations")
    nsub = p.add_subparsers(dest="np_command", required=True)
    q = nsub.add_parser("dominance")
    q.add_argument("--a", type=_multiset, required=True)
    q.add_argument("--b", type=_multiset, required=True)
    q = nsub.add_parser("polygon")
    q.add_argument("--m", type=_multiset, required=True)
    q = nsub.add_parser("scale")
    q.add_argument("--by", required=True)
    q.add_argument("--m", type=_multiset, required=True)
    q = nsub.add_parser("negate")
    q.add_argument("--m", type=_multiset, required=True)
    q = nsub.add_parser("preceq", help="is NP(f) on or below NP(g)")
    q.add_argument("--f", type=_multiset, required=True)
    q.add_argument("--g", type=_multiset, required=True)
    p.set_defaults(func=cmd_np)

    p = sub.add_parser("kottwitz", help="B(GL_r, mu) as Newton multisets")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mu", type=_multiset, required=True)
    p.set_defaults(func=cmd_kottwitz)

    p = sub.add_parser("hn-check", help="dominance sweep over coordinate filtrations")
    p.add_argument("file")
    p.add_argument("--prec", type=_precision)
    p.set_defaults(func=cmd_hn_check)

    p = sub.add_parser("dlambda", help="division algebra D_{d/h} property suite")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--prec", type=_precision)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("action", choices=["check"])
    p.set_defaults(func=cmd_dlambda)

    p = sub.add_parser("tube", help="tube membership of a disk point")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--closed", help="polynomial f for V(f), e.g. 'T^2 - 2'")
    p.add_argument("--open", action="append", default=[], help="polynomial g for D(g); repeatable")
    p.add_argument("--point", required=True, help="classical:a | disk:a:s | rank2:a:s:minus|plus")
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("legendre", help="Newton partition of the Legendre family")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.add_argument("--grid", default="default", help="default, dense, or comma-separated points")
    p.set_defaults(func=cmd_legendre)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.set_defaults(func=cmd_selftest)
    return parser


_NEGATIVE = re.compile(r"^-\d")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--a -1/2,0`` as ``--a=-1/2,0``; argparse would read the value as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("slopelab: error: --jobs must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SlopelabError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return 1
    except (UsageError, ValueError, OSError) as exc:
        print(f"slopelab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
