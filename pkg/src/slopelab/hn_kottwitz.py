"""Harder–Narasimhan polygons, Kottwitz sets for GL_r, split weak admissibility.

Kottwitz-set convention: ``kottwitz_set(r, mu)`` returns the multisets nu of
size r with the same total as mu, ``nu ⪰ mu`` (ascending partial sums of nu
at least those of mu, i.e. NP(nu) on or above NP(mu)) and NP(nu) having all
breakpoints at lattice points.  Against the Hodge polygon {0, 1} this gives
exactly the ordinary and supersingular polygons.  Sign conventions for B(G, mu)
differ between references; this is the one used throughout the package.

Weak admissibility is only decided when phi is diagonal with pairwise
distinct slopes, where the phi-stable subobjects are the coordinate
subspaces.  The induced filtration on a subspace assigns to each vector its
largest jump (Fil^i ∩ D').
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from . import linalg
from .errors import NotDiagonal, SingularFrobenius, NotSplit, NotStrictlyDecreasing, SizeMismatch
from .isocrystals import FilteredModule, Isocrystal, newton_slopes
from .np_calculus import NewtonPolygon, SlopeMultiset, dominates_or_equal, np_from_multiset


@dataclass(frozen=True)
class GradedPieces:
    """[(rank_i, slope_i)] of a filtration's graded pieces, top piece first."""

    pieces: tuple[tuple[int, Fraction], ...]

    def __init__(self, pieces: Iterable[tuple[int, Fraction]]):
        pieces = tuple((int(r), Fraction(s)) for r, s in pieces)
        if any(r <= 0 for r, _ in pieces):
            raise ValueError("ranks must be positive")
        object.__setattr__(self, "pieces", pieces)

    def is_hn(self) -> bool:
        slopes = [s for _, s in self.pieces]
        return all(a > b for a, b in zip(slopes, slopes[1:]))

    def multiset(self) -> SlopeMultiset:
        return SlopeMultiset(s for r, s in self.pieces for _ in range(r))


def hn_polygon(g: GradedPieces | Sequence, hn: bool = False) -> NewtonPolygon:
    if not isinstance(g, GradedPieces):
        g = GradedPieces(g)
    if hn and not g.is_hn():
        raise NotStrictlyDecreasing(f"HN slopes must strictly decrease, got {[str(s) for _, s in g.pieces]}")
    return np_from_multiset(g.multiset())


# -- dominance of semistable filtrations ------------------------------------

def diagonal_slopes(M: Isocrystal) -> list[Fraction]:
    """Slope of each basis line of a diagonal isocrystal (phi^a eigenvalue valuation / a)."""
    if not M.is_diagonal():
        raise NotDiagonal("Frobenius matrix is not diagonal")
    F = M.linearization()
    if any(F[i][i].is_zero() for i in range(M.rank)):
        raise SingularFrobenius("zero on the diagonal")
    return [Fraction(F[i][i].valuation(), M.a) for i in range(M.rank)]


def ordered_set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """All ordered partitions of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    n = len(items)
    for k in range(1, n + 1):
        for block in combinations(items, k):
            rest = [x for x in items if x not in block]
            for tail in ordered_set_partitions(rest):
                yield [block] + tail


def coordinate_filtrations(n: int) -> Iterator[list[frozenset[int]]]:
    """Increasing chains 0 ⊊ F_1 ⊊ ... ⊊ F_k = whole of coordinate subsets."""
    for blocks in ordered_set_partitions(range(n)):
        acc: set[int] = set()
        chain = []
        for b in blocks:
            acc |= set(b)
            chain.append(frozenset(acc))
        yield chain


def filtration_pieces(slopes: Sequence[Fraction], filtration: Sequence[Iterable[int]]) -> GradedPieces:
    """Graded pieces of a coordinate filtration, each with its average slope (deg/rank)."""
    prev: frozenset[int] = frozenset()
    pieces = []
    for step in filtration:
        step = frozenset(step)
        if not prev < step:
            raise ValueError("filtration must be strictly increasing")
        piece = step - prev
        pieces.append((len(piece), sum((slopes[i] for i in piece), Fraction(0)) / len(piece)))
        prev = step
    if prev != frozenset(range(len(slopes))):
        raise ValueError("filtration must end with the whole space")
    return GradedPieces(pieces)


def filtration_dominance_check(M: Isocrystal, filtration: Sequence[Iterable[int]], slopes=None) -> bool:
    """NP of the filtration's graded pieces ⪰ NP(M)."""
    slopes = diagonal_slopes(M) if slopes is None else slopes
    pieces = filtration_pieces(slopes, filtration)
    return dominates_or_equal(pieces.multiset(), SlopeMultiset(slopes))


def hn_dominance_sweep(M: Isocrystal) -> tuple[int, bool]:
    """(number of coordinate filtrations checked, whether all dominate NP(M))."""
    slopes = diagonal_slopes(M)
    count, ok = 0, True
    for chain in coordinate_filtrations(M.rank):
        count += 1
        ok = ok and filtration_dominance_check(M, chain, slopes)
    return count, ok


# -- Kottwitz sets ------------------------------------------------------------

def kottwitz_set(r: int, mu: Sequence[int] | SlopeMultiset) -> list[SlopeMultiset]:
    """B(GL_r, mu) as Newton multisets, sorted compatibly with dominance."""
    mu = SlopeMultiset(mu)
    if len(mu) != r:
        raise SizeMismatch(f"cocharacter has {len(mu)} entries, expected {r}")
    if any(x.denominator != 1 for x in mu):
        raise ValueError("cocharacter entries must be integers")
    if r <= 0:
        raise SizeMismatch("rank must be positive")
    hodge = [int(v) for v in [0] + mu.partial_sums()]
    found = [SlopeMultiset(s) for s in _lattice_paths(tuple(hodge), int(min(mu)), int(max(mu)))]
    return sorted(found, key=_dominance_key)


def _dominance_key(m: SlopeMultiset):
    ps = m.partial_sums()
    return (sum(ps), tuple(ps))


def _lattice_paths(hodge: tuple[int, ...], lo: int, hi: int) -> list[tuple[Fraction, ...]]:
    """Convex lattice paths (0,0) -> (r, hodge[r]) staying on or above ``hodge``.

    Dynamic programming over the last vertex: from vertex (t, v) with previous
    slope s, a segment to (t', v') is admissible when its slope exceeds s and
    the segment stays above the Hodge polygon at every integer abscissa.
    """
    r = len(hodge) - 1
    end = hodge[r]

    @lru_cache(maxsize=None)
    def extend(t: int, v: int, last: Fraction | None) -> tuple[tuple[Fraction, ...], ...]:
        if t == r:
            return ((),) if v == end else ()
        out = []
        for t2 in range(t + 1, r + 1):
            dt = t2 - t
            for v2 in range(v + lo * dt, v + hi * dt + 1):
                s = Fraction(v2 - v, dt)
                if last is not None and s <= last:
                    continue
                if any(v + s * (k - t) < hodge[k] for k in range(t + 1, t2 + 1)):
                    continue
                for tail in extend(t2, v2, s):
                    out.append((s,) * dt + tail)
        return tuple(out)

    return list(extend(0, 0, None))


# -- weak admissibility (split case) -----------------------------------------

def _intersection_dim(span: list[list[Fraction]], coords: frozenset[int], n: int) -> int:
    """dim(span ∩ <e_j : j in coords>)."""
    if not span:
        return 0
    dim_v = linalg.rank(span, Fraction(0))
    outside = [j for j in range(n) if j not in coords]
    proj = [[v[j] for j in outside] for v in span] if outside else []
    dim_proj = linalg.rank(proj, Fraction(0)) if outside else 0
    # dim(V ∩ W) = dim V - dim(image of V in D/W)
    return dim_v - dim_proj


def t_hodge(F: FilteredModule, coords: frozenset[int] | None = None) -> int:
    """Sum of filtration jumps (with multiplicity) on the coordinate subobject."""
    n = F.module.iso.rank
    coords = frozenset(range(n)) if coords is None else coords
    dims = [_intersection_dim(vs, coords, n) for _, vs in F.filtration] + [0]
    return sum(w * (dims[k] - dims[k + 1]) for k, (w, _) in enumerate(F.filtration))


def weakly_admissible_split(F: FilteredModule) -> bool:
    """t_N(D) = t_H(D) and t_N(D') >= t_H(D') for every coordinate subobject D'."""
    iso = F.module.iso
    if not iso.is_diagonal():
        raise NotSplit("weak admissibility is only decided for diagonal Frobenius")
    slopes = diagonal_slopes(iso)
    n = iso.rank
    total_n = sum(slopes, Fraction(0))
    # the endpoint condition is decisive even when subobjects are not enumerable
    if total_n != t_hodge(F):
        return False
    if len(set(slopes)) != len(slopes):
        if len(F.filtration) == 1 and len(set(slopes)) == 1:
            # one weight on an isoclinic module: every subobject has t_N = t_H
            return True
        raise NotSplit("slopes must be pairwise distinct so that subobjects are coordinate subspaces")
    for k in range(1, n):
        for sub in combinations(range(n), k):
            sub = frozenset(sub)
            if sum((slopes[i] for i in sub), Fraction(0)) < t_hodge(F, sub):
                return False
    return True
