"""Finite fields F_{p^h} as F_p[x]/(f) with f a primitive polynomial.

Elements are stored as coefficient tuples (constant term first).  For fields
with at most 2**16 elements exp/log tables are built once, which makes the
point counting in :mod:`slopelab.legendre` cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

# Conway polynomials, coefficients ascending, monic.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}

TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over Z/m (lists, constant term first) -----------------

def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], m: int) -> list[int]:
    """``a*b mod (modulus, m)`` for a monic ``modulus`` of degree h."""
    h = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, h - 1, -1):
        c = prod[k] % m
        if c:
            for j in range(h):
                prod[k - h + j] -= c * modulus[j]
        prod[k] = 0
    out = [c % m for c in prod[:h]]
    out += [0] * (h - len(out))
    return out


def _is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin's test: x^{p^h} = x mod f and gcd(x^{p^{h/r}} - x, f) = 1."""
    h = len(f) - 1
    if h == 1:
        return True

    def xpow(e_exp: int) -> list[int]:
        # x^(p^e_exp) mod f, by repeated p-th powering
        r = [0, 1] + [0] * (h - 2) if h > 1 else [0]
        r = r[:h]
        for _ in range(e_exp):
            r = _powmod(r, p, f, p)
        return r

    if xpow(h) != ([0, 1] + [0] * (h - 2)):
        return False
    for r in prime_factors(h):
        g = xpow(h // r)
        g = g[:]
        g[1] = (g[1] - 1) % p
        if _poly_gcd_mod_p(poly_trim(g[:]), list(f), p) != [1]:
            return False
    return True


def _powmod(a: list[int], e: int, f: Sequence[int], m: int) -> list[int]:
    h = len(f) - 1
    result = [1] + [0] * (h - 1)
    base = a
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, m)
        base = poly_mulmod(base, base, f, m)
        e >>= 1
    return result


def _poly_divmod_p(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = [c % p for c in a]
    b = poly_trim([c % p for c in b])
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    a = poly_trim(a)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = (a[k + j] - c * y) % p
        poly_trim(a)
    return q, a


def _poly_gcd_mod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = poly_trim([c % p for c in a]), poly_trim([c % p for c in b])
    while b:
        _, r = _poly_divmod_p(a, b, p)
        a, b = b, r
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _is_primitive(f: Sequence[int], p: int) -> bool:
    h = len(f) - 1
    order = p**h - 1
    x = [0, 1] + [0] * (h - 2) if h > 1 else [(-f[0]) % p]
    one = [1] + [0] * (h - 1)
    return all(_powmod(x, order // r, f, p) != one for r in prime_factors(order))


def search_modulus(p: int, h: int) -> tuple[int, ...]:
    """Lexicographically first monic primitive polynomial of degree h mod p."""
    for tail in product(range(p), repeat=h):
        f = tuple(reversed(tail)) + (1,)
        if f[0] == 0:
            continue
        if _is_irreducible_mod_p(f, p) and _is_primitive(f, p):
            return f
    raise ValueError(f"no primitive polynomial of degree {h} mod {p}")


def default_modulus(p: int, h: int) -> tuple[int, ...]:
    return CONWAY.get((p, h)) or search_modulus(p, h)


@dataclass(frozen=True)
class FiniteField:
    p: int
    h: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not self.modulus:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.h))
        if len(self.modulus) != self.h + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree h")

    @property
    def order(self) -> int:
        return self.p**self.h

    # element constructors
    def __call__(self, value) -> "FFElement":
        if isinstance(value, FFElement):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, int):
            return FFElement(self, (value % self.p,) + (0,) * (self.h - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.h:
            raise ValueError("too many coefficients")
        return FFElement(self, coeffs + (0,) * (self.h - len(coeffs)))

    def zero(self) -> "FFElement":
        return self(0)

    def one(self) -> "FFElement":
        return self(1)

    def gen(self) -> "FFElement":
        """Class of x; a primitive element because the modulus is primitive."""
        if self.h == 1:
            return self((-self.modulus[0]) % self.p)
        return self((0, 1))

    def elements(self) -> Iterator["FFElement"]:
        for i in range(self.order):
            yield self.from_index(i)

    def from_index(self, i: int) -> "FFElement":
        coeffs = []
        for _ in range(self.h):
            i, r = divmod(i, self.p)
            coeffs.append(r)
        return FFElement(self, tuple(coeffs))

    def index(self, a: "FFElement") -> int:
        return sum(c * self.p**k for k, c in enumerate(a.coeffs))

    def _mul_coeffs(self, a, b) -> tuple[int, ...]:
        if self.h == 1:
            return (a[0] * b[0] % self.p,)
        return tuple(poly_mulmod(a, b, self.modulus, self.p))

    @cached_property
    def tables(self):
        """(exp, log) lists indexed by element index; None if the field is large."""
        if self.order > TABLE_LIMIT:
            return None
        q = self.order
        exp = [0] * (q - 1)
        log = [-1] * q
        g = self.gen().coeffs
        cur = (1,) + (0,) * (self.h - 1)
        for k in range(q - 1):
            idx = sum(c * self.p**j for j, c in enumerate(cur))
            exp[k] = idx
            log[idx] = k
            cur = self._mul_coeffs(cur, g)
        return exp, log

    def is_subfield_element(self, a: "FFElement", k: int) -> bool:
        """Whether a lies in the subfield F_{p^k}."""
        return a ** (self.p**k) == a


@lru_cache(maxsize=None)
def GF(p: int, h: int = 1) -> FiniteField:
    return FiniteField(p, h)


@dataclass(frozen=True)
class FFElement:
    field: FiniteField
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> "FFElement":
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, tuple((a + b) % self.field.p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, tuple((-a) % self.field.p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FFElement(self.field, self.field._mul_coeffs(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def inverse(self) -> "FFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self) -> int:
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.coeffs[0]

    def __str__(self) -> str:
        if self.in_prime_field():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mon = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
                terms.append(f"{c}{'*' if mon else ''}{mon}" if c != 1 or not mon else mon)
        return " + ".join(reversed(terms))

    __repr__ = __str__
