#!/usr/bin/env python3
"""Property suite of D_{d/h} over a range of (p, d, h), with timings."""

import argparse
import time
from math import gcd

from slopelab.division_algebras import property_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--max-h", type=int, default=4)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bad = 0
    for p in map(int, args.primes.split(",")):
        for h in range(1, args.max_h + 1):
            for d in range(-h, h + 1):
                if gcd(d, h) != 1:
                    continue
                t0 = time.perf_counter()
                res = property_suite(p, d, h, samples=args.samples, seed=args.seed)
                failed = [k for k, v in res.items() if not v]
                bad += bool(failed)
                status = "ok" if not failed else "FAILED " + ",".join(failed)
                print(f"p={p} lambda={d}/{h}: {status}  ({time.perf_counter() - t0:.2f}s)")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
