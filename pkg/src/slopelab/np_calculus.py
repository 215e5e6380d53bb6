"""Slope multisets, Newton polygons and the dominance order.

Everything here is exact: slopes are :class:`fractions.Fraction` and no
floating point is ever involved.  Conventions:

* ``NP(m)`` is the convex piecewise-linear function on ``[0, r]`` through the
  origin with slope ``m[i-1]`` on ``[i-1, i]`` (slopes sorted ascending).
* ``a ⪰ b`` (``dominance(a, b)`` is ``DOMINATES`` or ``EQUAL``) means equal
  size and total and ascending partial sums of ``a`` at least those of ``b``;
  geometrically ``NP(a)`` lies on or above ``NP(b)``.
* ``conv_preceq(f, g)`` is ``f ⪯ g`` on ``Conv([0, h])``: same endpoints and
  ``f <= g`` pointwise.  Hence ``conv_preceq(NP(b), NP(a))`` iff ``a ⪰ b``.
  Some references use the opposite geometric convention ("below"); we do not.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Sequence, Union

from .errors import EmptyMultiset, IntervalMismatch

RationalLike = Union[int, Fraction, str]


def to_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string such as '1/3'")
    return Fraction(x)


@dataclass(frozen=True)
class SlopeMultiset:
    """Sorted multiset of rational slopes."""

    slopes: tuple[Fraction, ...]

    def __init__(self, slopes: Iterable[RationalLike] = ()):
        object.__setattr__(self, "slopes", tuple(sorted(to_fraction(s) for s in slopes)))

    def __len__(self) -> int:
        return len(self.slopes)

    def __iter__(self):
        return iter(self.slopes)

    def __getitem__(self, i):
        return self.slopes[i]

    @property
    def total(self) -> Fraction:
        return sum(self.slopes, Fraction(0))

    def partial_sums(self) -> list[Fraction]:
        return list(accumulate(self.slopes))

    def grouped(self) -> list[tuple[Fraction, int]]:
        """``[(slope, multiplicity), ...]`` in ascending slope order."""
        out: list[tuple[Fraction, int]] = []
        for s in self.slopes:
            if out and out[-1][0] == s:
                out[-1] = (s, out[-1][1] + 1)
            else:
                out.append((s, 1))
        return out

    def to_json(self) -> list[str]:
        return [str(s) for s in self.slopes]

    @classmethod
    def from_json(cls, data: Sequence[RationalLike]) -> "SlopeMultiset":
        return cls(data)

    @classmethod
    def parse(cls, text: str) -> "SlopeMultiset":
        """Parse ``"-1/2,-1/2"`` or a JSON array."""
        text = text.strip()
        if text.startswith("["):
            return cls(json.loads(text))
        if not text:
            return cls()
        return cls(part.strip() for part in text.split(","))

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in self.slopes) + "}"


@dataclass(frozen=True)
class NewtonPolygon:
    """Convex polygon stored by its minimal list of breakpoints."""

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = self.breakpoints
        if len(pts) < 2 or pts[0] != (0, 0):
            raise ValueError("a Newton polygon starts at (0, 0) and has positive length")
        slopes = [(v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(pts, pts[1:])]
        if any(t1 <= t0 for (t0, _), (t1, _) in zip(pts, pts[1:])):
            raise ValueError("abscissae must increase")
        if any(b <= a for a, b in zip(slopes, slopes[1:])):
            raise ValueError("breakpoints are not minimal or polygon is not convex")

    @property
    def length(self) -> int:
        return int(self.breakpoints[-1][0])

    @property
    def endpoint(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[-1]

    def segments(self) -> list[tuple[Fraction, Fraction]]:
        """``[(slope, horizontal length), ...]``."""
        pts = self.breakpoints
        return [((v1 - v0) / (t1 - t0), t1 - t0) for (t0, v0), (t1, v1) in zip(pts, pts[1:])]

    def slopes(self) -> SlopeMultiset:
        out: list[Fraction] = []
        for s, w in self.segments():
            if w.denominator != 1:
                raise ValueError("segment with non-integral width has no slope multiset")
            out.extend([s] * int(w))
        return SlopeMultiset(out)

    def __call__(self, t: RationalLike) -> Fraction:
        t = to_fraction(t)
        pts = self.breakpoints
        if not 0 <= t <= pts[-1][0]:
            raise ValueError(f"{t} outside [0, {pts[-1][0]}]")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        raise AssertionError("unreachable")

    def is_integral(self) -> bool:
        """All breakpoints at lattice points."""
        return all(t.denominator == 1 and v.denominator == 1 for t, v in self.breakpoints)

    def to_json(self) -> list[list[str]]:
        return [[str(t), str(v)] for t, v in self.breakpoints]

    @classmethod
    def from_json(cls, data) -> "NewtonPolygon":
        return cls(tuple((Fraction(t), Fraction(v)) for t, v in data))


class OrderResult(enum.Enum):
    DOMINATES = "DominatesOrEqual"
    DOMINATED = "DominatedOrEqual"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"
    DIFFERENT_FRAME = "DifferentFrame"

    def __str__(self) -> str:
        return self.value


def _as_multiset(m) -> SlopeMultiset:
    return m if isinstance(m, SlopeMultiset) else SlopeMultiset(m)


def np_from_multiset(m) -> NewtonPolygon:
    m = _as_multiset(m)
    if not len(m):
        raise EmptyMultiset("cannot build a Newton polygon from an empty multiset")
    pts = [(Fraction(0), Fraction(0))]
    t, v = Fraction(0), Fraction(0)
    for slope, mult in m.grouped():
        t += mult
        v += slope * mult
        pts.append((t, v))
    return NewtonPolygon(tuple(pts))


def dominance(a, b) -> OrderResult:
    """Compare two multisets in the partial order ⪰."""
    a, b = _as_multiset(a), _as_multiset(b)
    if len(a) != len(b) or a.total != b.total:
        return OrderResult.DIFFERENT_FRAME
    diffs = [x - y for x, y in zip(a.partial_sums()[:-1], b.partial_sums()[:-1])]
    ge = all(d >= 0 for d in diffs)
    le = all(d <= 0 for d in diffs)
    if ge and le:
        return OrderResult.EQUAL
    if ge:
        return OrderResult.DOMINATES
    if le:
        return OrderResult.DOMINATED
    return OrderResult.INCOMPARABLE


def dominates_or_equal(a, b) -> bool:
    return dominance(a, b) in (OrderResult.DOMINATES, OrderResult.EQUAL)


def scale(a: RationalLike, m) -> SlopeMultiset:
    a = to_fraction(a)
    return SlopeMultiset(a * x for x in _as_multiset(m))


def negate(m) -> SlopeMultiset:
    return scale(-1, m)


def conv_preceq(f: NewtonPolygon, g: NewtonPolygon) -> bool:
    """``f ⪯ g`` on Conv([0, h]): shared endpoints and f <= g everywhere.

    Both are piecewise linear, so checking the union of breakpoints suffices.
    """
    if f.length != g.length:
        raise IntervalMismatch(f"polygons live on [0,{f.length}] and [0,{g.length}]")
    if f.endpoint != g.endpoint:
        return False
    ts = sorted({t for t, _ in f.breakpoints} | {t for t, _ in g.breakpoints})
    return all(f(t) <= g(t) for t in ts)
