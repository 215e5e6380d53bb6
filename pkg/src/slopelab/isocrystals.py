"""Isocrystals over finite fields and their Newton slopes.

An isocrystal over F_q (q = p^a) is stored by the matrix A of its
sigma-semilinear Frobenius in a fixed basis: columns of A are phi(e_j), so
``phi(x) = A sigma(x)``.  Slopes are read off the characteristic polynomial
of the linearization ``F = phi^a = A sigma(A) ... sigma^{a-1}(A)``:
lower convex hull of the coefficient valuations, divided by a.  No
eigenvalues are ever extracted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import NotLowestTerms, PrecisionExhausted, SingularFrobenius
from .np_calculus import SlopeMultiset
from .padic import PadicNumber, UnramifiedElement, UnramifiedExtension, unramified_extension, default_precision


def lowest_terms(lam) -> tuple[int, int]:
    """(d, h) with h > 0, gcd(d, h) = 1; 0 = 0/1."""
    lam = Fraction(lam)
    return lam.numerator, lam.denominator


def check_lowest_terms(d: int, h: int) -> None:
    if h <= 0 or gcd(d, h) != 1:
        raise NotLowestTerms(f"{d}/{h} is not in lowest terms with positive denominator")


@dataclass
class Isocrystal:
    p: int
    a: int
    matrix: list[list[UnramifiedElement]]
    ext: UnramifiedExtension = field(repr=False)

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("Frobenius matrix must be square")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_entries(cls, p: int, entries, a: int = 1, prec: int | None = None) -> "Isocrystal":
        """Build from rationals, PadicNumbers, coefficient lists or UnramifiedElements."""
        ext = unramified_extension(p, a, prec)
        return cls(p, a, [[ext(x) for x in row] for row in entries], ext)

    @classmethod
    def diagonal(cls, p: int, entries, a: int = 1, prec: int | None = None) -> "Isocrystal":
        n = len(entries)
        return cls.from_entries(p, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], a, prec)

    def linearization(self, steps: int | None = None) -> list[list[UnramifiedElement]]:
        """Matrix of phi^steps (default a), a linear map when steps = a."""
        steps = self.a if steps is None else steps
        ext = self.ext
        result = linalg.identity(self.rank, ext.one(), ext.zero())
        for k in range(steps):
            twisted = linalg.map_matrix(self.matrix, lambda x, k=k: x.frobenius(k))
            result = linalg.matmul(result, twisted, ext.zero())
        return result

    def base_change(self, m: int) -> "Isocrystal":
        """The same isocrystal viewed over F_{q^m}."""
        target = unramified_extension(self.p, self.a * m, self.ext.prec)
        emb = self.ext.embed_into(target)
        return Isocrystal(self.p, self.a * m, [[emb(x) for x in row] for row in self.matrix], target)

    def direct_sum(self, other: "Isocrystal") -> "Isocrystal":
        if (self.p, self.a) != (other.p, other.a):
            raise ValueError("direct sum needs a common base field")
        z = self.ext.zero()
        n, m = self.rank, other.rank
        rows = [row + [z] * m for row in self.matrix] + [[z] * n + row for row in other.matrix]
        return Isocrystal(self.p, self.a, rows, self.ext)

    def is_diagonal(self) -> bool:
        return linalg.is_diagonal(self.matrix)

    def to_json(self) -> dict:
        enc = (lambda x: x.coefficients()[0].to_json()) if self.a == 1 else (lambda x: x.to_json())
        return {"p": self.p, "a": self.a, "rank": self.rank, "matrix": [[enc(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, data, prec: int | None = None) -> "Isocrystal":
        if isinstance(data, str):
            data = json.loads(data)
        p, a = int(data["p"]), int(data.get("a", 1))
        ext = unramified_extension(p, a, prec)
        rows = [[_decode_scalar(ext, x) for x in row] for row in data["matrix"]]
        if "rank" in data and int(data["rank"]) != len(rows):
            raise ValueError("rank does not match matrix size")
        return cls(p, a, rows, ext)


def _decode_scalar(ext: UnramifiedExtension, x) -> UnramifiedElement:
    if isinstance(x, dict):
        return ext(PadicNumber.from_json(x))
    if isinstance(x, list):
        return UnramifiedElement.from_json(ext, x)
    return ext(Fraction(x))


def required_precision(M: Isocrystal) -> int:
    """N >= a * n * (1 + max |entry valuation|) + 8."""
    vals = [abs(x.val) for row in M.matrix for x in row if x.valuation() is not None]
    return M.a * M.rank * (1 + max(vals, default=0)) + 8


def lower_hull(points: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    """Lower convex hull (monotone chain) of points sorted by abscissa."""
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_value(hull, x) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + Fraction(y2 - y1) * (x - x1) / (x2 - x1)
    raise ValueError("abscissa outside hull")


def slopes_from_charpoly(coeffs: Sequence) -> SlopeMultiset:
    """Valuations of the roots of sum c_k t^(n-k) (c_0 = 1, c_n != 0).

    A coefficient that is zero to precision is only known to have valuation
    >= its absolute precision; if that bound lies strictly below the hull of
    the known points the hull is ambiguous and we refuse to guess.
    """
    n = len(coeffs) - 1
    last = coeffs[n]
    if last.is_exact_zero():
        raise SingularFrobenius("Frobenius is not injective")
    if last.is_zero():
        raise PrecisionExhausted("determinant of Frobenius is zero to working precision")
    known = [(k, Fraction(c.valuation())) for k, c in enumerate(coeffs) if not c.is_zero()]
    hull = lower_hull(known)
    for k, c in enumerate(coeffs):
        if c.is_zero() and not c.is_exact_zero() and c.absprec < _hull_value(hull, k):
            raise PrecisionExhausted(
                f"coefficient {k} is O(p^{c.absprec}); the Newton polygon is ambiguous at this precision"
            )
    slopes: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return SlopeMultiset(slopes)


def newton_slopes(M: Isocrystal) -> SlopeMultiset:
    """Frobenius slopes (valuations of eigenvalues of phi^a, divided by a)."""
    F = M.linearization()
    coeffs = linalg.charpoly(F, M.ext.one(), M.ext.zero())
    raw = slopes_from_charpoly(coeffs)
    return SlopeMultiset(s / M.a for s in raw)


def simple_isocrystal(p: int, lam, prec: int | None = None) -> Isocrystal:
    """Q_p(lambda) = Q_p<phi>/(phi^h - p^d) on the basis 1, phi, ..., phi^{h-1}."""
    d, h = _checked(lam)
    return _cyclic(p, h, d, prec)


def b_lambda_matrix(p: int, lam, prec: int | None = None) -> Isocrystal:
    """phi(e_i) = p^{-d floor(i/h)} e_{i+1} with e_{h+1} = e_1."""
    d, h = _checked(lam)
    return _cyclic(p, h, -d, prec)


def _checked(lam) -> tuple[int, int]:
    if isinstance(lam, tuple):
        d, h = lam
        check_lowest_terms(d, h)
        return d, h
    return lowest_terms(lam)


def _cyclic(p: int, h: int, e: int, prec) -> Isocrystal:
    """phi(e_i) = e_{i+1} (i < h), phi(e_h) = p^e e_1."""
    rows = [[Fraction(0)] * h for _ in range(h)]
    for i in range(h - 1):
        rows[i + 1][i] = Fraction(1)
    rows[0][h - 1] = Fraction(p) ** e
    return Isocrystal.from_entries(p, rows, 1, prec)


def generic_newton_polygon(M: Isocrystal) -> SlopeMultiset:
    """Newton polygon in the generic-fibre sign convention: minus the Frobenius slopes."""
    return SlopeMultiset(-s for s in newton_slopes(M))


@dataclass
class PhiNModule:
    iso: Isocrystal
    N: list[list[UnramifiedElement]] | None = None

    def __post_init__(self):
        if self.N is None:
            zero = self.iso.ext.zero()
            self.N = [[zero] * self.iso.rank for _ in range(self.iso.rank)]


def validate_phi_n(M: PhiNModule) -> bool:
    """N nilpotent and N A = p A sigma(N) to working precision."""
    iso = M.iso
    ext = iso.ext
    n = iso.rank
    N = [[ext(x) for x in row] for row in M.N]
    if len(N) != n or any(len(r) != n for r in N):
        return False
    zero = ext.zero()
    power = N
    for _ in range(n - 1):
        power = linalg.matmul(power, N, zero)
    if not all(x.is_zero() for row in power for x in row):
        return False
    lhs = linalg.matmul(N, iso.matrix, zero)
    rhs = linalg.scalar_mul(ext(iso.p), linalg.matmul(iso.matrix, linalg.map_matrix(N, lambda x: x.frobenius()), zero))
    return all(x.is_zero() for row in linalg.matsub(lhs, rhs) for x in row)


@dataclass
class FilteredModule:
    """A (phi, N)-module with a decreasing filtration on the base-changed space.

    ``filtration`` is a list ``[(w_1, V_1), ..., (w_m, V_m)]`` with
    ``w_1 < ... < w_m`` and each ``V_k`` a list of rational spanning vectors:
    Fil^i = V_k for w_{k-1} < i <= w_k, Fil^i = 0 for i > w_m.  Exhaustive
    means V_1 is the whole space.
    """

    module: PhiNModule
    filtration: list[tuple[int, list[list[Fraction]]]]

    def __post_init__(self):
        weights = [w for w, _ in self.filtration]
        if any(b <= a for a, b in zip(weights, weights[1:])):
            raise ValueError("filtration weights must be strictly increasing")
        n = self.module.iso.rank
        self.filtration = [(int(w), [[Fraction(c) for c in v] for v in vs]) for w, vs in self.filtration]
        if self.filtration and linalg.rank(self.filtration[0][1], Fraction(0)) != n:
            raise ValueError("filtration is not exhaustive: the lowest step must be the whole space")
        spans = [linalg.rank(vs, Fraction(0)) if vs else 0 for _, vs in self.filtration]
        for (_, big), (_, small) in zip(self.filtration, self.filtration[1:]):
            if small and linalg.rank(big + small, Fraction(0)) != linalg.rank(big, Fraction(0)):
                raise ValueError("filtration is not decreasing")
        if any(b >= a for a, b in zip(spans, spans[1:])):
            raise ValueError("filtration steps must be strictly decreasing")


def dm_class(M: Isocrystal) -> list[tuple[Fraction, int]]:
    """Dieudonné–Manin labels [(lambda_i, m_i)]: M ~ sum m_i Q_p(lambda_i) over F_p-bar."""
    out = []
    for lam, mult in newton_slopes(M).grouped():
        h = lam.denominator
        if mult % h:
            raise AssertionError(f"slope {lam} has multiplicity {mult} not divisible by {h}")
        out.append((lam, mult // h))
    return out


def tensor_diagonal(M: Isocrystal, Mp: Isocrystal) -> Isocrystal:
    """Tensor product of two diagonal isocrystals (Kronecker product of the diagonals)."""
    if not (M.is_diagonal() and Mp.is_diagonal()):
        raise ValueError("tensor_diagonal expects diagonal inputs")
    if (M.p, M.a) != (Mp.p, Mp.a):
        raise ValueError("tensor product needs a common base field")
    diag = [M.matrix[i][i] * Mp.matrix[j][j] for i in range(M.rank) for j in range(Mp.rank)]
    n = len(diag)
    z = M.ext.zero()
    return Isocrystal(M.p, M.a, [[diag[i] if i == j else z for j in range(n)] for i in range(n)], M.ext)
