"""Newton partition of the Legendre family y^2 = x(x - 1)(x - lambda) at odd p.

Labels carry the slope multiset of the Newton polygon on the analytic
lambda-line.  The sign convention is NP = -(Frobenius slopes of the
reduction), so ordinary reduction gives {-1, 0} and supersingular reduction
{-1/2, -1/2}; potentially multiplicative points also get {-1, 0}.

Points with |lambda| > 1 are described in the chart mu = 1/lambda, written
``inf:<point>``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import adic_disk as ad
from .errors import EvenPrime, ExcludedPoint, SingularCurve
from .finite_field import GF, FFElement, FiniteField, is_prime
from .np_calculus import SlopeMultiset


class LegendreRegionLabel(enum.Enum):
    GOOD_ORDINARY = "GoodOrdinary"
    GOOD_SUPERSINGULAR = "GoodSupersingular"
    POTENTIALLY_MULTIPLICATIVE = "PotentiallyMultiplicative"

    @property
    def slopes(self) -> SlopeMultiset:
        if self is LegendreRegionLabel.GOOD_SUPERSINGULAR:
            return SlopeMultiset([Fraction(-1, 2), Fraction(-1, 2)])
        return SlopeMultiset([-1, 0])

    def __str__(self) -> str:
        return self.value


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise EvenPrime("the Legendre model needs p odd")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# -- supersingular parameters ----------------------------------------------

def deuring_polynomial(p: int) -> list[int]:
    """Coefficients (constant first) of sum_i binom(m, i)^2 t^i mod p, m = (p - 1)/2."""
    _check_odd_prime(p)
    m = (p - 1) // 2
    return [math.comb(m, i) ** 2 % p for i in range(m + 1)]


def _sqrt(F: FiniteField, a: FFElement) -> FFElement:
    exp, log = F.tables
    k = log[F.index(a)]
    if k % 2:
        raise ValueError("not a square")
    return F.from_index(exp[k // 2])


@lru_cache(maxsize=None)
def supersingular_lambdas(p: int) -> frozenset[FFElement]:
    """Roots of the Deuring polynomial, as elements of F_{p^2}."""
    H = deuring_polynomial(p)
    F = GF(p, 2)
    t = sympy.Symbol("t")
    P = sympy.Poly(list(reversed(H)), t, modulus=p)
    roots: set[FFElement] = set()
    for factor, _ in P.factor_list()[1]:
        c = [int(x) % p for x in reversed(factor.all_coeffs())]
        inv = pow(c[-1], -1, p)
        c = [x * inv % p for x in c]
        if len(c) == 2:
            roots.add(F(-c[0]))
        elif len(c) == 3:
            b, a0 = F(c[1]), F(c[0])
            r = _sqrt(F, b * b - 4 * a0)
            half = F(pow(2, -1, p))
            roots.update({(-b + r) * half, (-b - r) * half})
        else:
            raise ArithmeticError(f"Deuring factor of degree {len(c) - 1} does not split over F_{p}^2")
    return frozenset(roots)


# -- point counting ------------------------------------------------------

@lru_cache(maxsize=None)
def _field_arrays(p: int, k: int):
    F = GF(p, k)
    q = F.order
    idx = np.arange(q)
    digits = np.stack([(idx // p**j) % p for j in range(k)], axis=1)
    powers = p ** np.arange(k)
    _, log = F.tables
    return F, digits, powers, np.asarray(log)


def _trace(p: int, k: int, lam_digits: np.ndarray) -> int:
    """a_q = q + 1 - #E(F_q) via the quadratic character on log parities."""
    F, digits, powers, log = _field_arrays(p, k)
    minus_one = digits.copy()
    minus_one[:, 0] = (minus_one[:, 0] - 1) % p
    minus_lam = (digits - lam_digits) % p
    logs = np.stack([log, log[minus_one @ powers], log[minus_lam @ powers]])
    zero = (logs < 0).any(axis=0)
    chi = np.where(zero, 0, 1 - 2 * (logs.sum(axis=0) % 2))
    return -int(chi.sum())


def count_points(p: int, lam, k: int = 1) -> int:
    """#E_lambda(F_{p^k}) including the point at infinity."""
    _check_odd_prime(p)
    F = GF(p, k)
    lam = F(lam) if not isinstance(lam, FFElement) else lam
    if lam.field.p != p:
        raise ValueError("parameter lives over a different prime")
    if lam.field.h != k:
        if k % lam.field.h or lam.field.h != 1:
            raise ValueError("parameter is not in the requested field")
        lam = F(int(lam))
    if lam.is_zero() or (lam - F.one()).is_zero():
        raise SingularCurve(f"lambda = {lam} gives a singular curve")
    q = F.order
    return q + 1 - _trace(p, k, np.asarray(lam.coeffs))


def is_supersingular_by_count(p: int, lam, k: int = 2) -> bool:
    return (GF(p, k).order + 1 - count_points(p, lam, k)) % p == 0


def supersingular_by_count(p: int) -> frozenset[FFElement]:
    """Supersingular parameters found by counting points over F_{p^2}."""
    _check_odd_prime(p)
    F = GF(p, 2)
    out = set()
    for i in range(F.order):
        lam = F.from_index(i)
        if lam.is_zero() or (lam - F.one()).is_zero():
            continue
        if (F.order + 1 - count_points(p, lam, 2)) % p == 0:
            out.add(lam)
    return frozenset(out)


# -- points of the lambda-line --------------------------------------------

@dataclass(frozen=True)
class LegendrePoint:
    """A disk point in the lambda chart, or in the mu = 1/lambda chart when ``at_infinity``."""

    point: ad.AdicDiskPoint
    at_infinity: bool = False

    def __post_init__(self):
        x = self.point
        if x.kind == "classical":
            if not self.at_infinity and x.center in (0, 1):
                raise ExcludedPoint(f"lambda = {x.center} is not on the Legendre base")
            if self.at_infinity and x.center == 0:
                raise ExcludedPoint("lambda = infinity is not on the Legendre base")

    @property
    def p(self) -> int:
        return self.point.p

    @classmethod
    def parse(cls, p: int, text: str) -> "LegendrePoint":
        text = text.strip()
        if text.startswith("inf:"):
            return cls(ad.AdicDiskPoint.parse(p, text[4:]), True)
        return cls(ad.AdicDiskPoint.parse(p, text))

    def max_generalization(self) -> "LegendrePoint":
        return LegendrePoint(ad.max_generalization(self.point), self.at_infinity)

    def __str__(self) -> str:
        return ("inf:" if self.at_infinity else "") + str(self.point)


T = (Fraction(0), Fraction(1))
T_MINUS_1 = (Fraction(-1), Fraction(1))
ONE_MINUS_T = (Fraction(1), Fraction(-1))


def _reduction_norms(x: LegendrePoint) -> tuple[ad.ExtValue, ad.ExtValue, bool]:
    """(|lambda|, |lambda - 1|, |lambda| > 1) at x, using the chart of x."""
    if not x.at_infinity:
        return ad.eval_norm(x.point, T), ad.eval_norm(x.point, T_MINUS_1), False
    mu = ad.eval_norm(x.point, T)
    if mu < ad.ExtValue.one():
        return ad.ExtValue.one(), ad.ExtValue.one(), True
    # |mu| = 1 here, so |lambda| = 1 and |lambda - 1| = |1 - mu|
    return ad.ExtValue.one(), ad.eval_norm(x.point, ONE_MINUS_T), False


def reduction_parameter(x: LegendrePoint) -> FFElement | str:
    """sp of x as a lambda-bar in F_{p^2}, or ``generic``."""
    s = ad.specialize(x.point)
    if s == ad.GENERIC:
        return s
    F = GF(x.p, 2)
    v = F(s)
    return v.inverse() if x.at_infinity else v


def classify_point(p: int, x: LegendrePoint) -> LegendreRegionLabel:
    _check_odd_prime(p)
    if x.p != p:
        raise ValueError("point belongs to a different prime")
    xm = x.max_generalization()
    n_lam, n_lam1, outside = _reduction_norms(xm)
    one = ad.ExtValue.one()
    if outside or n_lam < one or n_lam1 < one:
        return LegendreRegionLabel.POTENTIALLY_MULTIPLICATIVE
    lam_bar = reduction_parameter(xm)
    if lam_bar != ad.GENERIC and lam_bar in supersingular_lambdas(p):
        return LegendreRegionLabel.GOOD_SUPERSINGULAR
    return LegendreRegionLabel.GOOD_ORDINARY


def is_rank2_boundary(x: LegendrePoint) -> bool:
    """Rank-2 points whose own specialization differs from that of x_max."""
    return x.point.rank == 2 and ad.specialize(x.point) != ad.specialize(ad.max_generalization(x.point))


# -- partition output ----------------------------------------------------

def default_grid(p: int) -> list[str]:
    """Residue disks, the Gauss point, the disk at infinity and rank-2 boundary points."""
    grid = [f"disk:{c}:1" for c in range(p)]
    grid.append("disk:2:0")
    grid.append("inf:disk:0:1")
    grid += [f"rank2:{c}:0:minus" for c in range(p)]
    return grid


def dense_grid(p: int) -> list[str]:
    grid = default_grid(p)
    for c in range(p * p):
        grid += [f"disk:{c}:2", f"classical:{c + p * p}"]
    grid += [f"inf:disk:{c}:1" for c in range(1, p)] + ["inf:disk:0:2", "inf:classical:" + str(p)]
    return grid


def resolve_grid(p: int, grid: str | Sequence[str] | None) -> list[str]:
    if grid is None or grid == "default":
        return default_grid(p)
    if grid == "dense":
        return dense_grid(p)
    if isinstance(grid, str):
        return [s for s in (t.strip() for t in grid.split(",")) if s]
    return list(grid)


@dataclass(frozen=True)
class PartitionRow:
    descriptor: str
    point: LegendrePoint
    label: LegendreRegionLabel
    rank2_boundary: bool

    def as_csv(self) -> list[str]:
        return [self.descriptor, str(self.label), str(self.label.slopes), str(self.rank2_boundary).lower()]


CSV_HEADER = ["point", "label", "slopes", "rank2_boundary"]


def emit_partition(p: int, grid: str | Sequence[str] | None = "default") -> list[PartitionRow]:
    _check_odd_prime(p)
    rows = []
    for text in resolve_grid(p, grid):
        x = LegendrePoint.parse(p, text)
        rows.append(PartitionRow(text.strip(), x, classify_point(p, x), is_rank2_boundary(x)))
    return rows


def partition_csv(rows: Iterable[PartitionRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def supersingular_disks(rows: Iterable[PartitionRow]) -> list[PartitionRow]:
    """Rank-1 open residue disks (radius exponent 1) labelled supersingular."""
    return [r for r in rows if r.label is LegendreRegionLabel.GOOD_SUPERSINGULAR
            and r.point.point.kind == "disk" and r.point.point.s == 1 and not r.point.at_infinity]


_COLOURS = {
    LegendreRegionLabel.GOOD_SUPERSINGULAR: "url(#blue)",
    LegendreRegionLabel.GOOD_ORDINARY: "url(#red)",
    LegendreRegionLabel.POTENTIALLY_MULTIPLICATIVE: "url(#red)",
}


def partition_svg(p: int, rows: Sequence[PartitionRow]) -> str:
    """Schematic picture: hatched base, good-reduction ellipse, one disk per residue-disk row."""
    width, height = 600, 350
    cx, cy, rx, ry = 300, 175, 270, 145
    disks = [r for r in rows if r.point.point.kind == "disk" and r.point.point.s > 0 and not r.point.at_infinity]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<defs>",
        '<pattern id="red" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">'
        '<line x1="0" y1="0" x2="0" y2="8" stroke="red" stroke-width="1"/></pattern>',
        '<pattern id="blue" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(-45)">'
        '<line x1="0" y1="0" x2="0" y2="8" stroke="blue" stroke-width="1.5"/></pattern>',
        "</defs>",
        f'<rect x="1" y="1" width="{width - 2}" height="{height - 2}" fill="url(#red)" stroke="black"/>',
        f'<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}" fill="none" stroke="orange" stroke-width="3"/>',
    ]
    n = max(len(disks), 1)
    rad = min(30.0, 0.8 * math.pi * min(rx, ry) * 0.6 / n)
    for k, r in enumerate(disks):
        ang = 2 * math.pi * k / n
        x = cx + 0.6 * rx * math.cos(ang)
        y = cy - 0.6 * ry * math.sin(ang)
        fill = _COLOURS[r.label]
        stroke = "orange" if r.label is not LegendreRegionLabel.POTENTIALLY_MULTIPLICATIVE else "black"
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{rad:.1f}" fill="white"/>')
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{rad:.1f}" fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')
        out.append(f'<text x="{x:.1f}" y="{y + 5:.1f}" text-anchor="middle" font-size="16" '
                   f'style="paint-order:stroke" stroke="white" stroke-width="4">{r.point.point.center % p}</text>')
        if r.label is LegendreRegionLabel.POTENTIALLY_MULTIPLICATIVE and r.point.point.center in (0, 1):
            out.append(f'<circle cx="{x - rad / 2:.1f}" cy="{y:.1f}" r="3" fill="white" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
