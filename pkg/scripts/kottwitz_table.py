#!/usr/bin/env python3
"""Sizes of B(GL_r, mu) for small minuscule and non-minuscule mu."""

import argparse
from itertools import combinations_with_replacement

from slopelab.hn_kottwitz import kottwitz_set


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-rank", type=int, default=5)
    ap.add_argument("--max-weight", type=int, default=2)
    args = ap.parse_args()
    print("rank  mu                size  members")
    for r in range(1, args.max_rank + 1):
        for mu in combinations_with_replacement(range(args.max_weight + 1), r):
            if mu[0] != 0:
                continue
            got = kottwitz_set(r, list(mu))
            shown = " ".join("{" + ",".join(m.to_json()) + "}" for m in got[:4])
            more = " ..." if len(got) > 4 else ""
            print(f"{r:4d}  {str(list(mu)):16s}  {len(got):4d}  {shown}{more}")


if __name__ == "__main__":
    main()
