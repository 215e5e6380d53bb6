"""The cyclic division algebra D_lambda = ⊕_{i<h} Q_{p^h} Pi^i.

Relations: ``Pi a = sigma(a) Pi`` and ``Pi^h = p^d`` for lambda = d/h in
lowest terms.  Elements are kept in the canonical form ``sum a_i Pi^i`` with
coefficients on the left and Pi-degree < h.

Being a division algebra is checked numerically (random elements invert to
precision), never proved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .errors import ContextMismatch, NotInvertibleAtPrecision, PrecisionExhausted
from .isocrystals import check_lowest_terms, lowest_terms
from .padic import PadicNumber, UnramifiedElement, UnramifiedExtension, unramified_extension


@dataclass(frozen=True)
class DLambdaContext:
    p: int
    d: int
    h: int
    prec: int = 16

    def __post_init__(self):
        check_lowest_terms(self.d, self.h)

    @classmethod
    def of(cls, p: int, lam, prec: int = 16) -> "DLambdaContext":
        d, h = lowest_terms(lam)
        return cls(p, d, h, prec)

    @property
    def lam(self) -> Fraction:
        return Fraction(self.d, self.h)

    @cached_property
    def ext(self) -> UnramifiedExtension:
        return unramified_extension(self.p, self.h, self.prec)

    # constructors
    def element(self, coeffs: Sequence) -> "DLambdaElement":
        if len(coeffs) != self.h:
            raise ValueError(f"expected {self.h} coefficients")
        return DLambdaElement(self, tuple(self.ext(c) for c in coeffs))

    def scalar(self, a) -> "DLambdaElement":
        z = self.ext.zero()
        return DLambdaElement(self, (self.ext(a),) + (z,) * (self.h - 1))

    def zero(self) -> "DLambdaElement":
        return DLambdaElement(self, (self.ext.zero(),) * self.h)

    def one(self) -> "DLambdaElement":
        return self.scalar(1)

    def pi(self, k: int = 1) -> "DLambdaElement":
        """Pi^k for any integer k, reduced with Pi^h = p^d."""
        q, r = divmod(k, self.h)
        coeffs = [self.ext.zero()] * self.h
        coeffs[r] = self.ext(Fraction(self.p) ** (self.d * q))
        return DLambdaElement(self, tuple(coeffs))

    def monomial(self, k: int, i: int) -> "DLambdaElement":
        """x^k Pi^i with x the generator of Q_{p^h}."""
        coeffs = [self.ext.zero()] * self.h
        coeffs[i] = self.ext.gen() ** k
        return DLambdaElement(self, tuple(coeffs))

    def basis(self) -> list["DLambdaElement"]:
        """The h^2 monomials x^k Pi^i, a Q_p-basis."""
        return [self.monomial(k, i) for i in range(self.h) for k in range(self.h)]

    def random_element(self, rng: random.Random) -> "DLambdaElement":
        return DLambdaElement(self, tuple(self.ext.random_element(rng, (0, 1)) for _ in range(self.h)))


class DLambdaElement:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: DLambdaContext, coeffs: tuple[UnramifiedElement, ...]):
        self.ctx, self.coeffs = ctx, coeffs

    def _check(self, other: "DLambdaElement") -> None:
        if not isinstance(other, DLambdaElement) or other.ctx != self.ctx:
            raise ContextMismatch("elements of different D_lambda contexts")

    def __add__(self, other):
        self._check(other)
        return DLambdaElement(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DLambdaElement(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DLambdaElement(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, DLambdaElement):
            other = self.ctx.scalar(other)
        self._check(other)
        return dl_mul(self, other)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DLambdaElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def inverse(self) -> "DLambdaElement":
        return dl_inverse(self)

    def qp_coordinates(self) -> list[PadicNumber]:
        """Coordinates in the basis x^k Pi^i (i major)."""
        return [c for a in self.coeffs for c in a.coefficients()]

    def __repr__(self) -> str:
        return " + ".join(f"({a})Pi^{i}" for i, a in enumerate(self.coeffs) if not a.is_exact_zero()) or "0"


def dl_mul(x: DLambdaElement, y: DLambdaElement) -> DLambdaElement:
    """(a Pi^i)(b Pi^j) = a sigma^i(b) Pi^{i+j}, then Pi^h = p^d."""
    x._check(y)
    ctx = x.ctx
    h = ctx.h
    ext = ctx.ext
    out = [ext.zero()] * h
    pd = ext(Fraction(ctx.p) ** ctx.d)
    for i, a in enumerate(x.coeffs):
        if a.is_exact_zero():
            continue
        for j, b in enumerate(y.coeffs):
            if b.is_exact_zero():
                continue
            term = a * b.frobenius(i)
            k = i + j
            if k >= h:
                term = term * pd
                k -= h
            out[k] = out[k] + term
    return DLambdaElement(ctx, tuple(out))


def left_multiplication_matrix(x: DLambdaElement) -> list[list[PadicNumber]]:
    """Matrix over Q_p of y -> x y in the basis x^k Pi^i (columns are images)."""
    cols = [(x * b).qp_coordinates() for b in x.ctx.basis()]
    n = len(cols)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def right_multiplication_matrix(x: DLambdaElement) -> list[list[PadicNumber]]:
    cols = [(b * x).qp_coordinates() for b in x.ctx.basis()]
    n = len(cols)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def dl_inverse(x: DLambdaElement) -> DLambdaElement:
    """Solve x y = 1 as an h^2 x h^2 linear system over Q_p."""
    ctx = x.ctx
    if x.is_zero():
        raise NotInvertibleAtPrecision("element is zero to working precision")
    L = left_multiplication_matrix(x)
    zero = PadicNumber(ctx.p, 0)
    rhs = ctx.one().qp_coordinates()
    try:
        sol = linalg.solve(L, rhs, zero)
    except (ArithmeticError, PrecisionExhausted) as exc:
        raise NotInvertibleAtPrecision(str(exc)) from exc
    h = ctx.h
    coeffs = tuple(ctx.ext.from_coefficients(sol[i * h:(i + 1) * h]) for i in range(h))
    return DLambdaElement(ctx, coeffs)


def centralizer_dimension(ctx: DLambdaContext) -> int:
    """dim over Q_p of {y : y Pi = Pi y, y x = x y} (x generating Q_{p^h})."""
    zero = PadicNumber(ctx.p, 0)
    rows = []
    for g in (ctx.pi(), ctx.monomial(1, 0)):
        L, R = left_multiplication_matrix(g), right_multiplication_matrix(g)
        rows.extend(linalg.matsub(L, R))
    return ctx.h**2 - linalg.rank(rows, zero)


# -- the F -> Pi identification ------------------------------------------------

def skew_mul(ctx_ext: UnramifiedExtension, f: Sequence[UnramifiedElement], g: Sequence[UnramifiedElement],
             h: int, relation: UnramifiedElement) -> list[UnramifiedElement]:
    """Product in Q_{p^h}<F>/(F^h - relation) with F a = sigma(a) F.

    Independent of :func:`dl_mul`: multiplies as skew polynomials of degree
    up to 2h-2 first, then rewrites F^{h+k} = F^k * relation.
    """
    full = [ctx_ext.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            full[i + j] = full[i + j] + a * b.frobenius(i)
    # F^h = relation, and relation is sigma-invariant, so F^{h+k} = relation F^k
    for k in range(len(full) - 1, h - 1, -1):
        c = full[k]
        full[k] = ctx_ext.zero()
        full[k - h] = full[k - h] + c * relation
    return full[:h]


def f_to_pi_check(p: int, lam, prec: int = 16) -> bool:
    """A_lambda = Q_{p^h}<F>/(F^h - p^{-d}) is isomorphic to D_{-lambda} via F -> Pi.

    Checks all products of basis monomials x^k F^i against dl_mul in D_{-lambda}.
    """
    d, h = lowest_terms(lam)
    target = DLambdaContext(p, -d, h, prec)
    ext = target.ext
    relation = ext(Fraction(p) ** (-d))
    mons = [(k, i) for i in range(h) for k in range(h)]

    def skew_monomial(k, i):
        c = [ext.zero()] * h
        c[i] = ext.gen() ** k
        return c

    for k1, i1 in mons:
        for k2, i2 in mons:
            lhs = skew_mul(ext, skew_monomial(k1, i1), skew_monomial(k2, i2), h, relation)
            rhs = dl_mul(target.monomial(k1, i1), target.monomial(k2, i2))
            if not all((a - b).is_zero() for a, b in zip(lhs, rhs.coeffs)):
                return False
    return True


def shift_by_one_check(p: int, lam, prec: int = 16) -> bool:
    """D_lambda ≅ D_{lambda+1} via Pi' -> p Pi, checked on products of basis monomials."""
    src = DLambdaContext.of(p, Fraction(lam) + 1, prec)
    dst = DLambdaContext.of(p, lam, prec)
    if src.h != dst.h:
        return False
    h = src.h

    def image(k: int, i: int) -> DLambdaElement:
        # x^k Pi'^i -> x^k p^i Pi^i
        return dst.monomial(k, i) * dst.scalar(Fraction(p) ** i)

    def transport(e: DLambdaElement) -> DLambdaElement:
        acc = dst.zero()
        for i, a in enumerate(e.coeffs):
            for k, c in enumerate(a.coefficients()):
                if not c.is_exact_zero():
                    acc = acc + image(k, i) * dst.scalar(c)
        return acc

    for k1 in range(h):
        for i1 in range(h):
            for k2 in range(h):
                for i2 in range(h):
                    prod = src.monomial(k1, i1) * src.monomial(k2, i2)
                    if not transport(prod) == image(k1, i1) * image(k2, i2):
                        return False
    return True


# -- splitting --------------------------------------------------------------

def splitting_matrix(x: DLambdaElement) -> list[list[UnramifiedElement]]:
    """h x h matrix over Q_{p^h} of right multiplication by x on D_lambda.

    D_lambda is a left Q_{p^h}-space with basis Pi^0..Pi^{h-1}; row i holds the
    coefficients of Pi^i x.  With row vectors this is multiplicative:
    rep(x y) = rep(x) rep(y).  rep(a) = diag(a, sigma(a), ..., sigma^{h-1}(a)).
    """
    ctx = x.ctx
    return [list((ctx.pi(i) * x).coeffs) for i in range(ctx.h)]


@dataclass
class SplittingReport:
    generator_images: dict
    multiplicative: bool
    span_dimension: int

    @property
    def ok(self) -> bool:
        return self.multiplicative and self.span_dimension == len(next(iter(self.generator_images.values()))) ** 2


def splitting_rep(ctx: DLambdaContext, pairs: int = 50, seed: int = 0) -> SplittingReport:
    """Generator images, multiplicativity on random pairs, rank of monomial images."""
    rng = random.Random(seed)
    gens = {"Pi": splitting_matrix(ctx.pi()), "x": splitting_matrix(ctx.monomial(1, 0))}
    zero = ctx.ext.zero()
    mult = True
    for _ in range(pairs):
        a, b = ctx.random_element(rng), ctx.random_element(rng)
        lhs = splitting_matrix(a * b)
        rhs = linalg.matmul(splitting_matrix(a), splitting_matrix(b), zero)
        if not all((u - v).is_zero() for ru, rv in zip(lhs, rhs) for u, v in zip(ru, rv)):
            mult = False
            break
    flat = [[e for row in splitting_matrix(m) for e in row] for m in ctx.basis()]
    return SplittingReport(gens, mult, linalg.rank(flat, zero))


def property_suite(p: int, d: int, h: int, prec: int = 16, samples: int = 100, seed: int = 0) -> dict[str, bool]:
    """Named pass/fail results of the D_lambda checks."""
    ctx = DLambdaContext(p, d, h, prec)
    rng = random.Random(seed)
    results: dict[str, bool] = {}
    a = ctx.ext.random_element(rng)
    lhs = ctx.pi() * ctx.scalar(a)
    rhs = ctx.scalar(a.frobenius()) * ctx.pi()
    results["pi_a_equals_sigma_a_pi"] = (lhs - rhs).is_zero()
    pih = ctx.one()
    for _ in range(h):
        pih = pih * ctx.pi()
    results["pi_h_equals_p_d"] = pih == ctx.scalar(Fraction(p) ** d)
    inv_ok = True
    for _ in range(samples):
        x = ctx.random_element(rng)
        try:
            y = dl_inverse(x)
        except NotInvertibleAtPrecision:
            inv_ok = False
            break
        if not ((x * y) == ctx.one() and (y * x) == ctx.one()):
            inv_ok = False
            break
    results["random_elements_invert"] = inv_ok
    results["centralizer_dimension_1"] = centralizer_dimension(ctx) == 1
    rep = splitting_rep(ctx, pairs=20, seed=seed)
    results["splitting_multiplicative"] = rep.multiplicative
    results["monomial_images_span_h2"] = rep.span_dimension == h * h
    results["f_to_pi"] = f_to_pi_check(p, Fraction(d, h), prec)
    results["depends_on_lambda_mod_1"] = shift_by_one_check(p, Fraction(d, h), prec)
    return results
