#!/usr/bin/env python3
"""Render the Legendre Newton partition for a few primes into ./out."""

import argparse
from pathlib import Path

from slopelab import legendre as lg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", default="3,5,7,11,13")
    ap.add_argument("--grid", default="default")
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for p in map(int, args.primes.split(",")):
        rows = lg.emit_partition(p, args.grid)
        (out / f"legendre_p{p}.csv").write_text(lg.partition_csv(rows))
        (out / f"legendre_p{p}.svg").write_text(lg.partition_svg(p, rows))
        ss = lg.supersingular_disks(rows)
        print(f"p={p:3d}  rows={len(rows):4d}  supersingular unit disks over F_p: "
              f"{[r.descriptor for r in ss]}  (all supersingular params: {len(lg.supersingular_lambdas(p))})")


if __name__ == "__main__":
    main()
