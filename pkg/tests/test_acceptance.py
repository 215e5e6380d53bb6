"""Acceptance criteria, one check per criterion.

Runs under pytest, or directly with ``python tests/test_acceptance.py`` to get
one ``criterion N: PASS|FAIL`` line each.
"""

from __future__ import annotations

import io
import random
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest

from slopelab import adic_disk as ad
from slopelab import division_algebras as dl
from slopelab import hn_kottwitz as hk
from slopelab import isocrystals as iso
from slopelab import legendre as lg
from slopelab.cli import main
from slopelab.finite_field import GF, is_prime
from slopelab.np_calculus import SlopeMultiset, np_from_multiset

F = Fraction


def c1_legendre_p7() -> bool:
    K = GF(7, 2)
    expected = frozenset(K(c) for c in (2, 4, 6))
    if lg.supersingular_lambdas(7) != expected or lg.supersingular_by_count(7) != expected:
        return False
    # every root of the Deuring polynomial, checked by hand evaluation
    H = lg.deuring_polynomial(7)
    if any(sum(c * pow(x, i, 7) for i, c in enumerate(H)) % 7 for x in (2, 4, 6)):
        return False
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["legendre", "--p", "7"])
    rows = [line.split(",") for line in buf.getvalue().splitlines()[1:]]
    ss = [r for r in rows if r[1] == "GoodSupersingular" and r[0].startswith("disk:") and r[0].endswith(":1")]
    gauss = [r for r in rows if r[0] == "disk:2:0"]
    return code == 0 and len(ss) == 3 and [r[1] for r in gauss] == ["GoodOrdinary"]


def c2_cross_prime() -> bool:
    return all(lg.supersingular_lambdas(p) == lg.supersingular_by_count(p)
               for p in range(3, 51) if is_prime(p))


def lattice_paths(r, total, lo, hi):
    """Convex lattice paths (0,0) -> (r, total): integral vertices, strictly increasing slopes."""
    out = []

    def walk(x, y, last, segs):
        if x == r:
            if y == total:
                out.append(segs)
            return
        for dx in range(1, r - x + 1):
            for dy in range(lo * dx, hi * dx + 1):
                s = F(dy, dx)
                if last is not None and s <= last:
                    continue
                walk(x + dx, y + dy, s, segs + [(dx, dy)])

    walk(0, 0, None, [])
    return out


def path_oracle(r, mu):
    mu = sorted(mu)
    lower = [sum(mu[:k]) for k in range(r + 1)]
    found = set()
    for segs in lattice_paths(r, sum(mu), min(mu), max(mu)):
        heights, slopes = [0], []
        for dx, dy in segs:
            for _ in range(dx):
                heights.append(heights[-1] + F(dy, dx))
                slopes.append(F(dy, dx))
        if all(h >= l for h, l in zip(heights, lower)):
            found.add(SlopeMultiset(slopes))
    return found


def c3_kottwitz() -> bool:
    two = hk.kottwitz_set(2, [0, 1])
    three = hk.kottwitz_set(3, [0, 0, 1])
    if len(two) != 2 or len(three) != 3:
        return False
    if set(two) != path_oracle(2, [0, 1]) or set(three) != path_oracle(3, [0, 0, 1]):
        return False
    end = np_from_multiset(SlopeMultiset([0, 1])).endpoint
    return all(np_from_multiset(m).endpoint == end for m in two)


def c4_isoclinic(primes=(2, 3)) -> bool:
    for p in primes:
        for h in range(1, 7):
            for d in range(-6, 7):
                if gcd(d, h) != 1:
                    continue
                lam = F(d, h)
                if iso.newton_slopes(iso.simple_isocrystal(p, lam, prec=32)) != SlopeMultiset([lam] * h):
                    return False
                M = iso.b_lambda_matrix(p, lam, prec=32)
                if iso.newton_slopes(M) != SlopeMultiset([-lam] * h):
                    return False
                if iso.generic_newton_polygon(M) != SlopeMultiset([lam] * h):
                    return False
    return True


def c5_hn_sweep() -> bool:
    p = 3
    vals = range(-2, 3)
    for n in range(1, 6):
        for slopes in combinations(vals, n):
            M = iso.Isocrystal.diagonal(p, [F(p) ** s for s in slopes])
            _, ok = hk.hn_dominance_sweep(M)
            if not ok:
                return False
    return True


def c6_dlambda() -> bool:
    for p, d, h in ((5, 1, 2), (7, 2, 3), (3, -1, 4)):
        if not all(dl.property_suite(p, d, h, prec=16, samples=100).values()):
            return False
    return True


def c7_tubes() -> bool:
    p = 7
    Z = ad.LocallyClosed.of([0, 1])
    gauss = ad.AdicDiskPoint.gauss(p)
    half = ad.AdicDiskPoint.disk(p, 0, F(1, 2))
    edge = ad.AdicDiskPoint.rank2(p, 0, 0, "minus")
    if ad.tube_membership(gauss, Z).inside:
        return False
    if ad.tube_membership(half, Z) != ad.TubeResult(True, 2):
        return False
    res = ad.tube_membership(edge, Z)
    if not res.inside or res.witness is not ad.NO_WITNESS or ad.spmax_preimage_membership(edge, Z):
        return False
    pts = ad.sample_points(p, 200, random.Random(0))
    polys = [(0, 1), (-2, 0, 1), (-1, 0, 0, 1), (3, 1), (0, -1, 0, 0, 0, 0, 0, 1)]
    for f in polys:
        V, D = ad.LocallyClosed.of(f), ad.LocallyClosed.of(None, [f])
        for x in pts:
            if ad.spmax_preimage_membership(x, V) != ad.rational_union_membership(x, f, 12):
                return False
            if ad.spmax_preimage_membership(x, D) != ad.unit_membership(x, f):
                return False
    return True


def c8_generalization() -> bool:
    for p in (3, 5, 7, 11):
        rng = random.Random(p)
        for x in ad.sample_points(p, 300, rng):
            inf = rng.random() < 0.25
            if x.kind == "classical" and (x.center == 0 or (not inf and x.center == 1)):
                continue
            y = lg.LegendrePoint(x, inf)
            if lg.classify_point(p, y) is not lg.classify_point(p, y.max_generalization()):
                return False
    return True


CRITERIA = {
    1: (c1_legendre_p7, 1.0),
    2: (c2_cross_prime, 30.0),
    3: (c3_kottwitz, 1.0),
    4: (c4_isoclinic, 5.0),
    5: (c5_hn_sweep, 10.0),
    6: (c6_dlambda, 20.0),
    7: (c7_tubes, 5.0),
    8: (c8_generalization, 5.0),
}


def evaluate(n: int) -> tuple[bool, float]:
    check, limit = CRITERIA[n]
    t0 = time.perf_counter()
    ok = check()
    elapsed = time.perf_counter() - t0
    return ok and elapsed < limit, elapsed


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, elapsed = evaluate(n)
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, limit {CRITERIA[n][1]:g}s)")
    assert ok


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        ok, elapsed = evaluate(n)
        failed += not ok
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")
    sys.exit(1 if failed else 0)
