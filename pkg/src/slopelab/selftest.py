"""Quick invariant suite behind ``slopelab selftest``."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd

from . import adic_disk as ad
from . import division_algebras as dl
from . import hn_kottwitz as hk
from . import isocrystals as iso
from . import legendre as lg
from .finite_field import is_prime
from .np_calculus import OrderResult, SlopeMultiset, dominance, np_from_multiset


def check_dominance() -> bool:
    a = SlopeMultiset([Fraction(-1, 2), Fraction(-1, 2)])
    b = SlopeMultiset([-1, 0])
    return (dominance(a, b) is OrderResult.DOMINATES
            and dominance(b, a) is OrderResult.DOMINATED
            and dominance(a, SlopeMultiset([0])) is OrderResult.DIFFERENT_FRAME)


def check_polygon_roundtrip() -> bool:
    rng = random.Random(0)
    for _ in range(50):
        m = SlopeMultiset(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(rng.randint(1, 6)))
        if np_from_multiset(m).slopes() != m:
            return False
    return True


def check_kottwitz() -> bool:
    two = hk.kottwitz_set(2, [0, 1])
    three = hk.kottwitz_set(3, [0, 0, 1])
    return len(two) == 2 and len(three) == 3 and all(m.total == 1 for m in two + three)


def check_isoclinic(p: int = 3) -> bool:
    for h in range(1, 4):
        for d in range(-3, 4):
            if gcd(d, h) != 1:
                continue
            lam = Fraction(d, h)
            if iso.newton_slopes(iso.simple_isocrystal(p, lam)) != SlopeMultiset([lam] * h):
                return False
            if iso.newton_slopes(iso.b_lambda_matrix(p, lam)) != SlopeMultiset([-lam] * h):
                return False
    return True


def check_hn_sweep() -> bool:
    M = iso.Isocrystal.diagonal(5, [1, 5, 25, 125])
    return hk.hn_dominance_sweep(M)[1]


def check_dlambda() -> bool:
    return all(dl.property_suite(5, 1, 2, samples=10).values())


def check_tube_example() -> bool:
    p = 7
    Z = ad.LocallyClosed.of([0, 1])
    gauss = ad.AdicDiskPoint.gauss(p)
    half = ad.AdicDiskPoint.disk(p, 0, Fraction(1, 2))
    edge = ad.AdicDiskPoint.rank2(p, 0, 0, "minus")
    return (not ad.tube_membership(gauss, Z).inside
            and ad.tube_membership(half, Z) == ad.TubeResult(True, 2)
            and ad.tube_membership(edge, Z) == ad.TubeResult(True, ad.NO_WITNESS)
            and not ad.spmax_preimage_membership(edge, Z))


def check_legendre() -> bool:
    p = 7
    F = lg.GF(p, 2)
    if lg.supersingular_lambdas(p) != frozenset(F(c) for c in (2, 4, 6)):
        return False
    rows = lg.emit_partition(p)
    return len(lg.supersingular_disks(rows)) == 3


def check_oracles(bound: int = 30) -> bool:
    return all(lg.supersingular_lambdas(p) == lg.supersingular_by_count(p)
               for p in range(3, bound + 1) if is_prime(p))


def check_generalization(seed: int = 0) -> bool:
    p = 7
    rng = random.Random(seed)
    for x in ad.sample_points(p, 200, rng):
        if x.kind == "classical" and x.center in (0, 1):
            continue
        y = lg.LegendrePoint(x)
        if lg.classify_point(p, y) != lg.classify_point(p, y.max_generalization()):
            return False
    return True


CHECKS = {
    "np_dominance": check_dominance,
    "np_polygon_roundtrip": check_polygon_roundtrip,
    "kottwitz_sets": check_kottwitz,
    "isoclinic_slopes": check_isoclinic,
    "hn_dominance_sweep": check_hn_sweep,
    "dlambda_suite": check_dlambda,
    "tube_example": check_tube_example,
    "legendre_p7": check_legendre,
    "deuring_vs_point_count": check_oracles,
    "generalization_invariance": check_generalization,
}


def _run(name: str) -> tuple[str, bool]:
    return name, bool(CHECKS[name]())


def run(jobs: int = 1) -> dict[str, bool]:
    names = list(CHECKS)
    if jobs <= 1:
        return dict(map(_run, names))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return dict(pool.map(_run, names))
