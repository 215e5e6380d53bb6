"""Points of the adic closed unit disk over Q_p, specialization and tubes.

Three kinds of points are modelled:

* ``classical``: T = a for a p-integral rational a;
* ``disk``: the Gauss norm on the closed disk |T - a| <= p^{-s};
* ``rank2``: a disk point with the radius moved infinitesimally down
  (``minus``, towards the centre) or up (``plus``).

Norm values live in the ordered group of pairs (p^{-q}, e); the second
coordinate is the infinitesimal exponent and only breaks ties.  All
exponents are exact rationals.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

import sympy

from .errors import OutsideUnitDisk, ZeroPolynomial
from .padic import valuation

KINDS = ("classical", "disk", "rank2")
SIGNS = ("minus", "plus")
GENERIC = "generic"


class _NoWitness:
    def __repr__(self) -> str:
        return "NoWitness"

    def __bool__(self) -> bool:
        return False


NO_WITNESS = _NoWitness()


# -- value group -----------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class ExtValue:
    """p^{-q} * eps^e with eps an infinitesimal above 1; q None means 0."""

    q: Fraction | None
    e: int = 0

    def __post_init__(self):
        if self.q is not None:
            object.__setattr__(self, "q", Fraction(self.q))
        else:
            object.__setattr__(self, "e", 0)

    @classmethod
    def zero(cls) -> "ExtValue":
        return cls(None)

    @classmethod
    def one(cls) -> "ExtValue":
        return cls(Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.q is None

    def _key(self):
        if self.q is None:
            return (0, 0, 0)
        return (1, -self.q, self.e)

    def __lt__(self, other: "ExtValue") -> bool:
        return self._key() < other._key()

    def __mul__(self, other: "ExtValue") -> "ExtValue":
        if self.q is None or other.q is None:
            return ExtValue.zero()
        return ExtValue(self.q + other.q, self.e + other.e)

    def __pow__(self, n: int) -> "ExtValue":
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return ExtValue.one()
        if self.q is None:
            return self
        return ExtValue(self.q * n, self.e * n)

    def __str__(self) -> str:
        if self.q is None:
            return "0"
        base = "1" if self.q == 0 else f"p^{-self.q}"
        return base if self.e == 0 else f"({base}, {self.e})"

    def to_json(self):
        return None if self.q is None else {"q": str(self.q), "e": self.e}


def p_value() -> ExtValue:
    return ExtValue(Fraction(1))


# -- points ------------------------------------------------------------------

def _normalize_center(a: Fraction, p: int, k: int) -> Fraction:
    """Representative in [0, p^k) of a p-integral rational modulo p^k."""
    if k <= 0:
        return Fraction(0)
    m = p**k
    return Fraction(a.numerator * pow(a.denominator, -1, m) % m)


@dataclass(frozen=True)
class AdicDiskPoint:
    p: int
    kind: str
    center: Fraction
    s: Fraction | None = None
    sign: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown point kind {self.kind!r}")
        center = Fraction(self.center)
        v = valuation(center, self.p)
        if v is not None and v < 0:
            raise OutsideUnitDisk(f"center {center} is not {self.p}-integral")
        if self.kind == "classical":
            if self.s is not None or self.sign is not None:
                raise ValueError("classical points carry no radius")
            object.__setattr__(self, "center", center)
            return
        if self.s is None:
            raise ValueError("radius exponent required")
        s = Fraction(self.s)
        if s < 0:
            raise OutsideUnitDisk(f"radius p^{-s} exceeds 1")
        object.__setattr__(self, "s", s)
        if self.kind == "disk":
            if self.sign is not None:
                raise ValueError("disk points carry no sign")
            k = math.ceil(s)
        else:
            if self.sign not in SIGNS:
                raise ValueError("rank2 sign must be 'minus' or 'plus'")
            if self.sign == "plus" and s == 0:
                raise OutsideUnitDisk("radius 1 plus perturbation leaves the disk")
            # the open disk |T - a| < p^{-s} determines a minus point
            k = math.floor(s) + 1 if self.sign == "minus" else math.ceil(s)
        object.__setattr__(self, "center", _normalize_center(center, self.p, k))

    # constructors
    @classmethod
    def classical(cls, p: int, a) -> "AdicDiskPoint":
        return cls(p, "classical", Fraction(a))

    @classmethod
    def disk(cls, p: int, a, s) -> "AdicDiskPoint":
        return cls(p, "disk", Fraction(a), Fraction(s))

    @classmethod
    def gauss(cls, p: int, a=0) -> "AdicDiskPoint":
        return cls(p, "disk", Fraction(a), Fraction(0))

    @classmethod
    def rank2(cls, p: int, a, s, sign: str) -> "AdicDiskPoint":
        return cls(p, "rank2", Fraction(a), Fraction(s), sign)

    @classmethod
    def parse(cls, p: int, text: str) -> "AdicDiskPoint":
        """``classical:a``, ``disk:a:s`` or ``rank2:a:s:minus|plus``."""
        parts = text.strip().split(":")
        kind, args = parts[0], parts[1:]
        arity = {"classical": 1, "disk": 2, "rank2": 3}
        if kind not in arity or len(args) != arity[kind]:
            raise ValueError(f"bad point descriptor {text!r}")
        if kind == "classical":
            return cls.classical(p, Fraction(args[0]))
        if kind == "disk":
            return cls.disk(p, Fraction(args[0]), Fraction(args[1]))
        return cls.rank2(p, Fraction(args[0]), Fraction(args[1]), args[2])

    @property
    def rank(self) -> int:
        return 2 if self.kind == "rank2" else 1

    def radius(self) -> ExtValue:
        """|T - center|_x."""
        if self.kind == "classical":
            return ExtValue.zero()
        e = 0 if self.kind == "disk" else (-1 if self.sign == "minus" else 1)
        return ExtValue(self.s, e)

    def __str__(self) -> str:
        if self.kind == "classical":
            return f"classical:{self.center}"
        if self.kind == "disk":
            return f"disk:{self.center}:{self.s}"
        return f"rank2:{self.center}:{self.s}:{self.sign}"


def max_generalization(x: AdicDiskPoint) -> AdicDiskPoint:
    if x.kind != "rank2":
        return x
    return AdicDiskPoint.disk(x.p, x.center, x.s)


def translate(x: AdicDiskPoint, c) -> AdicDiskPoint:
    """Image of x under T -> T + c."""
    return AdicDiskPoint(x.p, x.kind, x.center + Fraction(c), x.s, x.sign)


# -- polynomials ---------------------------------------------------------

Poly = Sequence[Fraction]


def poly(coeffs: Iterable) -> tuple[Fraction, ...]:
    """Coefficients, constant term first, trailing zeros stripped."""
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def parse_polynomial(text: str) -> tuple[Fraction, ...]:
    """Parse a polynomial in T with rational coefficients, e.g. ``"T^2 - 2*T + 1/3"``."""
    T = sympy.Symbol("T")
    expr = sympy.sympify(text.replace("^", "**"), locals={"T": T})
    P = sympy.Poly(expr, T, domain="QQ")
    return poly(Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs()))


def taylor_shift(f: Poly, a) -> tuple[Fraction, ...]:
    """Coefficients of f(T + a)."""
    a = Fraction(a)
    out = [Fraction(c) for c in f]
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += a * out[j + 1]
    return tuple(out)


def evaluate(f: Poly, a) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * a + c
    return acc


def _abs(c: Fraction, p: int) -> ExtValue:
    v = valuation(c, p)
    return ExtValue.zero() if v is None else ExtValue(Fraction(v))


def eval_norm(x: AdicDiskPoint, f: Poly) -> ExtValue:
    """|f|_x as max_i |c_i| |T - a|_x^i with f = sum c_i (T - a)^i."""
    f = poly(f)
    if not f:
        raise ZeroPolynomial("the zero polynomial has no norm to compare")
    p = x.p
    if x.kind == "classical":
        return _abs(evaluate(f, x.center), p)
    r = x.radius()
    return max(_abs(c, p) * r**i for i, c in enumerate(taylor_shift(f, x.center)))


def specialize(x: AdicDiskPoint) -> int | str:
    """Closed point of the special fibre (an element of F_p) or ``GENERIC``."""
    if valuation(x.center, x.p) is not None and valuation(x.center, x.p) < 0:
        raise OutsideUnitDisk(str(x))
    if x.radius() < ExtValue.one():
        return int(x.center.numerator * pow(x.center.denominator, -1, x.p) % x.p)
    return GENERIC


# -- locally closed subsets and tubes ------------------------------------

def _reduce(f: Poly, p: int) -> list[int]:
    out = []
    for c in f:
        if valuation(c, p) is not None and valuation(c, p) < 0:
            raise ValueError("polynomial lifts must have p-integral coefficients")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    while out and out[-1] == 0:
        out.pop()
    return out


@dataclass(frozen=True)
class LocallyClosed:
    """V(f) ∩ (D(g_1) ∪ ... ∪ D(g_k)) in the affine line over F_p.

    ``closed=None`` stands for the whole line; ``opens=()`` means no open
    condition.  Polynomials are p-integral lifts.
    """

    closed: tuple[Fraction, ...] | None = None
    opens: tuple[tuple[Fraction, ...], ...] = ()

    @classmethod
    def of(cls, closed=None, opens=()) -> "LocallyClosed":
        return cls(None if closed is None else poly(closed), tuple(poly(g) for g in opens))

    def contains(self, p: int, point: int | str) -> bool:
        def vanishes(f):
            fb = _reduce(f, p)
            if point == GENERIC:
                return not fb
            return sum(c * pow(point, i, p) for i, c in enumerate(fb)) % p == 0

        if self.closed is not None and not vanishes(self.closed):
            return False
        return not self.opens or any(not vanishes(g) for g in self.opens)


@dataclass(frozen=True)
class TubeResult:
    inside: bool
    witness: int | _NoWitness | None = None

    def to_json(self) -> dict:
        w = self.witness
        return {"membership": "In" if self.inside else "Out",
                "witness": "NoWitness" if w is NO_WITNESS else w}


def openness_witness(value: ExtValue) -> int | _NoWitness:
    """Smallest N >= 1 with value^N <= |p|, or NO_WITNESS."""
    if value.is_zero:
        return 1
    if value.q <= 0:
        return NO_WITNESS
    n = math.ceil(1 / value.q)
    if value ** n > p_value():
        n += 1
    return n


def tube_membership(x: AdicDiskPoint, Z: LocallyClosed) -> TubeResult:
    if not Z.contains(x.p, specialize(x)):
        return TubeResult(False)
    if Z.closed is None or not poly(Z.closed):
        return TubeResult(True)
    return TubeResult(True, openness_witness(eval_norm(x, Z.closed)))


def spmax_preimage_membership(x: AdicDiskPoint, Z: LocallyClosed) -> bool:
    return tube_membership(max_generalization(x), Z).inside


def rational_union_membership(x: AdicDiskPoint, f: Poly, n_max: int) -> bool:
    """x_max in the union over N <= n_max of {|f|^N <= |p|}."""
    v = eval_norm(max_generalization(x), f)
    return any(v**n <= p_value() for n in range(1, n_max + 1))


def unit_membership(x: AdicDiskPoint, g: Poly) -> bool:
    """|g(x_max)| = 1."""
    return eval_norm(max_generalization(x), g) == ExtValue.one()


# -- sampling ------------------------------------------------------------

RADII = tuple(Fraction(n, d) for n, d in ((0, 1), (1, 3), (1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1)))


def sample_points(p: int, n: int, rng: random.Random, max_center: int | None = None) -> list[AdicDiskPoint]:
    """A seeded mix of classical, disk and rank-2 points."""
    max_center = p**3 if max_center is None else max_center
    out = []
    for _ in range(n):
        a = Fraction(rng.randrange(max_center))
        kind = rng.choice(KINDS)
        if kind == "classical":
            out.append(AdicDiskPoint.classical(p, a))
            continue
        s = rng.choice(RADII)
        if kind == "disk":
            out.append(AdicDiskPoint.disk(p, a, s))
        else:
            sign = "minus" if s == 0 else rng.choice(SIGNS)
            out.append(AdicDiskPoint.rank2(p, a, s, sign))
    return out


def neighbourhood(x: AdicDiskPoint, s: Fraction, k: int, rng: random.Random) -> list[AdicDiskPoint]:
    """k sample points inside the closed disk of radius p^{-s} around x's centre."""
    p = x.p
    step = p ** math.ceil(s)
    out = []
    for _ in range(k):
        a = x.center + step * rng.randrange(p * p)
        t = s + rng.choice(RADII)
        kind = rng.choice(KINDS)
        if kind == "classical":
            out.append(AdicDiskPoint.classical(p, a))
        elif kind == "disk":
            out.append(AdicDiskPoint.disk(p, a, t))
        else:
            sign = "minus" if t == 0 else rng.choice(SIGNS)
            out.append(AdicDiskPoint.rank2(p, a, t, sign))
    return out
