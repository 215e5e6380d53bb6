"""Finite-precision p-adic numbers and unramified extensions.

Both scalar types use a capped-relative model: a nonzero value is
``p**val * unit`` with the unit known modulo ``p**prec``.  A value that
cancels below its precision becomes an *inexact zero* ``O(p**val)`` with
``prec == 0``; the literal ``0`` is an *exact zero* (``val is None``).
Arithmetic never reports more precision than its inputs justify.

``UnramifiedExtension(p, h)`` realizes Q_{p^h} = Q_p[x]/(f) where f lifts a
primitive (Conway-style) polynomial mod p.  The Frobenius sigma is computed
once per extension by Hensel-lifting ``x**p`` to the root of f it
approximates, then applied as a matrix on coefficient vectors.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence, Union

from .errors import DivisionByZero, PrecisionExhausted
from .finite_field import FFElement, FiniteField, GF, default_modulus, is_prime, poly_mulmod

DEFAULT_PREC = 32


def default_precision() -> int:
    env = os.environ.get("SLOPELAB_PREC")
    return int(env) if env else DEFAULT_PREC


def valuation(x: Union[int, Fraction], p: int) -> int | None:
    """p-adic valuation of a rational; None for 0."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _split_rational(x: Fraction, p: int, prec: int) -> tuple[int, int]:
    """(val, unit mod p^prec) of a nonzero rational."""
    v = valuation(x, p)
    num, den = x.numerator, x.denominator
    if v > 0:
        num //= p**v
    elif v < 0:
        den //= p ** (-v)
    m = p**prec
    return v, num * pow(den, -1, m) % m


def _vp_int(n: int, p: int, cap: int) -> int:
    """Valuation of an integer, capped at ``cap`` (n == 0 gives cap)."""
    if n == 0:
        return cap
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """Element of Q_p at finite relative precision."""

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, value: Union[int, Fraction, str] = 0, prec: int | None = None):
        prec = default_precision() if prec is None else prec
        x = Fraction(value)
        self.p = p
        if x == 0:
            self.val, self.unit, self.prec = None, 0, None
        else:
            self.val, self.unit = _split_rational(x, p, prec)
            self.prec = prec

    @classmethod
    def _raw(cls, p: int, val, unit: int, prec) -> "PadicNumber":
        obj = cls.__new__(cls)
        obj.p, obj.val, obj.unit, obj.prec = p, val, unit, prec
        return obj

    @classmethod
    def from_parts(cls, p: int, val: int, digits: int, absprec: int) -> "PadicNumber":
        """``p**val * digits`` known modulo ``p**absprec`` (normalizes)."""
        rel = absprec - val
        if rel <= 0:
            return cls._raw(p, absprec, 0, 0)
        digits %= p**rel
        k = _vp_int(digits, p, rel)
        if k >= rel:
            return cls._raw(p, absprec, 0, 0)
        val += k
        rel -= k
        return cls._raw(p, val, (digits // p**k) % p**rel, rel)

    @classmethod
    def zero_to(cls, p: int, absprec: int) -> "PadicNumber":
        return cls._raw(p, absprec, 0, 0)

    # -- predicates -------------------------------------------------------
    def is_exact_zero(self) -> bool:
        return self.val is None

    def is_zero(self) -> bool:
        """Zero to the available precision."""
        return self.val is None or self.prec == 0

    @property
    def absprec(self) -> float | int:
        return float("inf") if self.val is None else self.val + self.prec

    def valuation(self) -> int | None:
        """Exact valuation, or None for (exact or inexact) zero."""
        return None if self.is_zero() else self.val

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber(self.p, other, self.prec if self.prec else default_precision())
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.val is None:
            return o
        if o.val is None:
            return self
        absprec = min(self.absprec, o.absprec)
        v0 = min(self.val, o.val)
        total = 0
        for x in (self, o):
            if x.prec and x.val < absprec:
                total += x.unit * self.p ** (x.val - v0)
        return PadicNumber.from_parts(self.p, v0, total, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None or self.prec == 0:
            return self
        return PadicNumber._raw(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.val is None or o.val is None:
            return PadicNumber._raw(self.p, None, 0, None)
        val = self.val + o.val
        prec = min(self.prec, o.prec)
        if prec == 0:
            return PadicNumber._raw(self.p, val, 0, 0)
        return PadicNumber._raw(self.p, val, self.unit * o.unit % self.p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.val is None:
            raise DivisionByZero("inverse of exact zero")
        if self.prec == 0:
            raise PrecisionExhausted(f"inverse of O({self.p}^{self.val})")
        return PadicNumber._raw(self.p, -self.val, pow(self.unit, -1, self.p**self.prec), self.prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = PadicNumber(self.p, 1, self.prec or default_precision())
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        """Equality to the joint precision."""
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def with_prec(self, prec: int) -> "PadicNumber":
        if self.val is None or self.prec == 0:
            return self
        prec = min(prec, self.prec)
        return PadicNumber._raw(self.p, self.val, self.unit % self.p**prec, prec)

    def to_fraction(self) -> Fraction:
        """Rational representative ``p**val * unit`` (unit in [0, p^prec))."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** self.val * self.unit

    def digits(self) -> list[int]:
        out, u = [], self.unit
        for _ in range(self.prec or 0):
            u, r = divmod(u, self.p)
            out.append(r)
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "val": self.val, "unit_digits": self.digits(), "prec": self.prec}

    @classmethod
    def from_json(cls, data: dict) -> "PadicNumber":
        p = int(data["p"])
        if data.get("val") is None:
            return cls._raw(p, None, 0, None)
        prec = int(data["prec"])
        unit = sum(int(d) * p**k for k, d in enumerate(data.get("unit_digits", [])[:prec]))
        return cls.from_parts(p, int(data["val"]), unit, int(data["val"]) + prec)

    def __repr__(self) -> str:
        if self.val is None:
            return "0"
        if self.prec == 0:
            return f"O({self.p}^{self.val})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.absprec})"


# -- unramified extensions -----------------------------------------------------

@dataclass(frozen=True)
class UnramifiedExtension:
    """Q_{p^h} at working precision ``prec`` (digits)."""

    p: int
    h: int
    prec: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.h < 1 or self.prec < 1:
            raise ValueError("degree and precision must be positive")

    @cached_property
    def modulus(self) -> tuple[int, ...]:
        return default_modulus(self.p, self.h)

    @cached_property
    def residue_field(self) -> FiniteField:
        return GF(self.p, self.h)

    @property
    def mod(self) -> int:
        return self.p**self.prec

    # constructors
    def __call__(self, value) -> "UnramifiedElement":
        if isinstance(value, UnramifiedElement):
            if value.ext != self:
                raise ValueError("element of another extension; use embed()")
            return value
        if isinstance(value, PadicNumber):
            if value.val is None:
                return self.zero()
            if value.prec == 0:
                return UnramifiedElement(self, value.val, (0,) * self.h, 0)
            prec = min(value.prec, self.prec)
            return UnramifiedElement(self, value.val, (value.unit % self.p**prec,) + (0,) * (self.h - 1), prec)
        if isinstance(value, (list, tuple)):
            return self.from_coefficients(value)
        x = Fraction(value)
        if x == 0:
            return self.zero()
        v, u = _split_rational(x, self.p, self.prec)
        return UnramifiedElement(self, v, (u,) + (0,) * (self.h - 1), self.prec)

    def zero(self) -> "UnramifiedElement":
        return UnramifiedElement(self, None, (0,) * self.h, None)

    def one(self) -> "UnramifiedElement":
        return self(1)

    def gen(self) -> "UnramifiedElement":
        """Class of x (a root of the modulus)."""
        if self.h == 1:
            return self(-self.modulus[0])
        return UnramifiedElement(self, 0, (0, 1) + (0,) * (self.h - 2), self.prec)

    def from_coefficients(self, coeffs: Sequence, absprec: int | None = None) -> "UnramifiedElement":
        """Element sum c_j x^j from rational or PadicNumber coefficients."""
        if len(coeffs) != self.h:
            raise ValueError(f"expected {self.h} coefficients")
        result = self.zero()
        x = self.gen() if self.h > 1 else None
        for j, c in enumerate(coeffs):
            term = self(c)
            if j:
                term = term * x**j
            result = result + term
        if absprec is not None:
            result = result.with_absprec(absprec)
        return result

    def from_integer_coeffs(self, coeffs: Sequence[int], val: int = 0, absprec: int | None = None) -> "UnramifiedElement":
        absprec = val + self.prec if absprec is None else absprec
        return _normalize(self, val, list(coeffs), absprec)

    # Frobenius data
    @cached_property
    def frobenius_of_gen(self) -> tuple[int, ...]:
        """Coefficients of sigma(x) mod p^prec: the root of f congruent to x^p."""
        if self.h == 1:
            return ((-self.modulus[0]) % self.mod,)
        m = self.mod
        f = self.modulus
        y = _unit_pow(self, (0, 1) + (0,) * (self.h - 2), self.p)
        fprime = [k * f[k] for k in range(1, len(f))]
        for _ in range(self.prec.bit_length() + 2):
            fy = _eval_int_poly(self, f, y)
            if not any(fy):
                break
            dfy = _eval_int_poly(self, fprime, y)
            y = tuple((a - b) % m for a, b in zip(y, poly_mulmod(fy, _unit_inverse(self, dfy, self.prec), f, m)))
        if any(_eval_int_poly(self, f, y)):
            raise PrecisionExhausted("Hensel lifting of Frobenius did not converge")
        return y

    @cached_property
    def frobenius_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Columns are sigma(x^j) for j < h, mod p^prec."""
        m = self.mod
        s = self.frobenius_of_gen
        cols = []
        cur = (1,) + (0,) * (self.h - 1)
        for _ in range(self.h):
            cols.append(cur)
            cur = tuple(poly_mulmod(cur, s, self.modulus, m)) if self.h > 1 else ((cur[0] * s[0]) % m,)
        return tuple(cols)

    def frobenius_power_matrix(self, k: int) -> tuple[tuple[int, ...], ...]:
        return _frob_power(self, k % self.h)

    def teichmuller(self, residue) -> "UnramifiedElement":
        """Teichmüller lift of an element of F_{p^h}."""
        r = self.residue_field(residue) if not isinstance(residue, FFElement) else residue
        if r.field != self.residue_field:
            raise ValueError("residue from another field")
        if r.is_zero():
            return self.zero()
        q = self.p**self.h
        x = tuple(r.coeffs)
        for _ in range(self.prec):
            nxt = _unit_pow(self, x, q)
            if nxt == x:
                break
            x = nxt
        return UnramifiedElement(self, 0, x, self.prec)

    def random_element(self, rng, val_range=(0, 0), prec: int | None = None) -> "UnramifiedElement":
        prec = self.prec if prec is None else prec
        v = rng.randint(*val_range)
        while True:
            coeffs = [rng.randrange(self.p**prec) for _ in range(self.h)]
            if any(c % self.p for c in coeffs):
                return UnramifiedElement(self, v, tuple(coeffs), prec)

    def embed_into(self, target: "UnramifiedExtension"):
        """Field embedding Q_{p^h} -> Q_{p^H} (h | H), as a callable."""
        if target.p != self.p or target.h % self.h:
            raise ValueError("no embedding between these extensions")
        root = _root_in(target, self.modulus, self.h)

        def embed(a: UnramifiedElement) -> UnramifiedElement:
            if a.val is None:
                return target.zero()
            if a.prec == 0:
                return UnramifiedElement(target, a.val, (0,) * target.h, 0)
            acc = target.zero()
            power = target.one()
            for c in a.unit:
                if c:
                    acc = acc + target(c) * power
                power = power * root
            res = acc.with_relprec(a.prec)
            return UnramifiedElement(target, res.val + a.val, res.unit, res.prec) if res.val is not None else res

        return embed


@lru_cache(maxsize=None)
def unramified_extension(p: int, h: int, prec: int | None = None) -> UnramifiedExtension:
    return UnramifiedExtension(p, h, default_precision() if prec is None else prec)


@lru_cache(maxsize=None)
def _frob_power(ext: UnramifiedExtension, k: int):
    m = ext.mod
    cols = [tuple(1 if i == j else 0 for i in range(ext.h)) for j in range(ext.h)]
    for _ in range(k):
        cols = [_apply_matrix(ext.frobenius_matrix, c, m) for c in cols]
    return tuple(cols)


def _apply_matrix(cols, vec, m: int) -> tuple[int, ...]:
    h = len(vec)
    out = [0] * h
    for j, c in enumerate(vec):
        if c:
            col = cols[j]
            for i in range(h):
                out[i] += c * col[i]
    return tuple(x % m for x in out)


def _eval_int_poly(ext: UnramifiedExtension, f: Sequence[int], y: Sequence[int]) -> list[int]:
    m = ext.mod
    acc = [0] * ext.h
    for c in reversed(f):
        acc = poly_mulmod(acc, y, ext.modulus, m) if ext.h > 1 else [acc[0] * y[0] % m]
        acc[0] = (acc[0] + c) % m
    return acc


def _unit_pow(ext: UnramifiedExtension, x: Sequence[int], e: int, modexp: int | None = None) -> tuple[int, ...]:
    m = ext.mod if modexp is None else ext.p**modexp
    result = [1] + [0] * (ext.h - 1)
    base = list(x)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, ext.modulus, m)
        base = poly_mulmod(base, base, ext.modulus, m)
        e >>= 1
    return tuple(result)


def _unit_inverse(ext: UnramifiedExtension, u: Sequence[int], prec: int) -> list[int]:
    """Inverse of a unit of Z_{p^h} modulo p^prec (Newton iteration)."""
    p = ext.p
    residue = ext.residue_field(u)
    if residue.is_zero():
        raise PrecisionExhausted("not a unit")
    y = list(residue.inverse().coeffs)
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        m = p**k
        uy = poly_mulmod(u, y, ext.modulus, m)
        two_minus = [(-c) % m for c in uy]
        two_minus[0] = (two_minus[0] + 2) % m
        y = poly_mulmod(y, two_minus, ext.modulus, m)
    m = p**prec
    return [c % m for c in y]


def _root_in(target: UnramifiedExtension, f: Sequence[int], h: int) -> "UnramifiedElement":
    """Hensel-lifted root in ``target`` of the degree-h polynomial f."""
    F = target.residue_field
    p = target.p
    g = F.gen() ** ((F.order - 1) // (p**h - 1))
    cand = F.one()
    fbar = [c % p for c in f]
    for _ in range(p**h - 1):
        acc = F.zero()
        for c in reversed(fbar):
            acc = acc * cand + c
        if acc.is_zero():
            break
        cand = cand * g
    else:
        raise ValueError("no residue root found")
    m = target.mod
    y = tuple(cand.coeffs)
    fprime = [k * f[k] for k in range(1, len(f))]
    for _ in range(target.prec.bit_length() + 2):
        fy = _eval_int_poly(target, f, y)
        if not any(fy):
            break
        dfy = _eval_int_poly(target, fprime, y)
        y = tuple((a - b) % m for a, b in zip(y, poly_mulmod(fy, _unit_inverse(target, dfy, target.prec), target.modulus, m)))
    return UnramifiedElement(target, 0, y, target.prec)


def _normalize(ext: UnramifiedExtension, val: int, coeffs: list[int], absprec) -> "UnramifiedElement":
    p = ext.p
    rel = absprec - val
    if rel <= 0:
        return UnramifiedElement(ext, absprec, (0,) * ext.h, 0)
    rel = int(rel)
    m = p**rel
    coeffs = [c % m for c in coeffs]
    k = min(_vp_int(c, p, rel) for c in coeffs)
    if k >= rel:
        return UnramifiedElement(ext, absprec, (0,) * ext.h, 0)
    rel_out = min(rel - k, ext.prec)
    mm = p**rel_out
    return UnramifiedElement(ext, val + k, tuple((c // p**k) % mm for c in coeffs), rel_out)


class UnramifiedElement:
    """Element of Q_{p^h}: ``p**val * unit`` with unit in Z_{p^h} mod p^prec."""

    __slots__ = ("ext", "val", "unit", "prec")

    def __init__(self, ext: UnramifiedExtension, val, unit: tuple[int, ...], prec):
        self.ext, self.val, self.unit, self.prec = ext, val, tuple(unit), prec

    # predicates
    def is_exact_zero(self) -> bool:
        return self.val is None

    def is_zero(self) -> bool:
        return self.val is None or self.prec == 0

    @property
    def absprec(self):
        return float("inf") if self.val is None else self.val + self.prec

    def valuation(self) -> int | None:
        return None if self.is_zero() else self.val

    def residue(self) -> FFElement:
        """Reduction mod p of an integral element."""
        F = self.ext.residue_field
        if self.is_zero():
            if self.val is not None and self.val <= 0:
                raise PrecisionExhausted("residue of O(p^k) with k <= 0")
            return F.zero()
        if self.val < 0:
            raise ValueError("element is not integral")
        if self.val > 0:
            return F.zero()
        return F(self.unit)

    # arithmetic
    def _coerce(self, other) -> "UnramifiedElement":
        if isinstance(other, UnramifiedElement):
            if other.ext != self.ext:
                raise ValueError("elements of different extensions")
            return other
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.ext(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.val is None:
            return o
        if o.val is None:
            return self
        absprec = min(self.absprec, o.absprec)
        v0 = min(self.val, o.val)
        total = [0] * self.ext.h
        p = self.ext.p
        for x in (self, o):
            if x.prec and x.val < absprec:
                scale = p ** (x.val - v0)
                for i, c in enumerate(x.unit):
                    total[i] += c * scale
        return _normalize(self.ext, v0, total, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        m = self.ext.p**self.prec
        return UnramifiedElement(self.ext, self.val, tuple((-c) % m for c in self.unit), self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        ext = self.ext
        if self.val is None or o.val is None:
            return ext.zero()
        val = self.val + o.val
        prec = min(self.prec, o.prec)
        if prec == 0:
            return UnramifiedElement(ext, val, (0,) * ext.h, 0)
        m = ext.p**prec
        if ext.h == 1:
            unit = (self.unit[0] * o.unit[0] % m,)
        else:
            unit = tuple(poly_mulmod(self.unit, o.unit, ext.modulus, m))
        return UnramifiedElement(ext, val, unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "UnramifiedElement":
        if self.val is None:
            raise DivisionByZero("inverse of exact zero")
        if self.prec == 0:
            raise PrecisionExhausted(f"inverse of O(p^{self.val})")
        if self.ext.h == 1:
            unit = (pow(self.unit[0], -1, self.ext.p**self.prec),)
        else:
            unit = tuple(_unit_inverse(self.ext, self.unit, self.prec))
        return UnramifiedElement(self.ext, -self.val, unit, self.prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ext.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def frobenius(self, k: int = 1) -> "UnramifiedElement":
        """sigma^k; sigma is the unique lift of x -> x^p."""
        if self.is_zero() or self.ext.h == 1 or k % self.ext.h == 0:
            return self
        cols = self.ext.frobenius_power_matrix(k)
        unit = _apply_matrix(cols, self.unit, self.ext.p**self.prec)
        return UnramifiedElement(self.ext, self.val, unit, self.prec)

    def with_relprec(self, prec: int) -> "UnramifiedElement":
        if self.is_zero():
            return self
        prec = min(prec, self.prec)
        m = self.ext.p**prec
        return UnramifiedElement(self.ext, self.val, tuple(c % m for c in self.unit), prec)

    def with_absprec(self, absprec: int) -> "UnramifiedElement":
        if self.val is None:
            return self
        return _normalize(self.ext, self.val, list(self.unit), min(absprec, self.absprec))

    def coefficients(self) -> list[PadicNumber]:
        """Coefficients in Q_p of 1, x, ..., x^{h-1}."""
        p = self.ext.p
        if self.val is None:
            return [PadicNumber._raw(p, None, 0, None) for _ in range(self.ext.h)]
        return [PadicNumber.from_parts(p, self.val, c, self.absprec) for c in self.unit]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coefficients()]

    @classmethod
    def from_json(cls, ext: UnramifiedExtension, data) -> "UnramifiedElement":
        if isinstance(data, dict):
            return ext(PadicNumber.from_json(data))
        coeffs = [PadicNumber.from_json(c) if isinstance(c, dict) else Fraction(c) for c in data]
        return ext.from_coefficients(coeffs)

    def __repr__(self) -> str:
        if self.val is None:
            return "0"
        if self.prec == 0:
            return f"O(p^{self.val})"
        return f"p^{self.val}*{list(self.unit)} + O(p^{self.absprec})"


def teichmuller(residue: FFElement, prec: int | None = None) -> UnramifiedElement:
    F = residue.field
    return unramified_extension(F.p, F.h, prec).teichmuller(residue)


def frobenius(a: UnramifiedElement) -> UnramifiedElement:
    return a.frobenius()
