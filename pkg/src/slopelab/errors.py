"""Error hierarchy.

Every domain error carries the name of the module that raised it so the CLI
can emit a structured message (``{"module": ..., "error": ...}``).
"""


class SlopelabError(Exception):
    module = "slopelab"

    @property
    def variant(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"module": self.module, "error": self.variant, "message": str(self)}


# np_calculus
class EmptyMultiset(SlopelabError, ValueError):
    module = "np_calculus"


class IntervalMismatch(SlopelabError, ValueError):
    module = "np_calculus"


# padic
class DivisionByZero(SlopelabError, ZeroDivisionError):
    module = "padic"


class PrecisionExhausted(SlopelabError, ArithmeticError):
    module = "padic"


# isocrystals
class SingularFrobenius(SlopelabError, ValueError):
    module = "isocrystals"


class NotLowestTerms(SlopelabError, ValueError):
    module = "isocrystals"


# hn_kottwitz
class NotStrictlyDecreasing(SlopelabError, ValueError):
    module = "hn_kottwitz"


class NotDiagonal(SlopelabError, ValueError):
    module = "hn_kottwitz"


class SizeMismatch(SlopelabError, ValueError):
    module = "hn_kottwitz"


class NotSplit(SlopelabError, ValueError):
    module = "hn_kottwitz"


# division_algebras
class ContextMismatch(SlopelabError, ValueError):
    module = "division_algebras"


class NotInvertibleAtPrecision(SlopelabError, ArithmeticError):
    module = "division_algebras"


# adic_disk
class ZeroPolynomial(SlopelabError, ValueError):
    module = "adic_disk"


class OutsideUnitDisk(SlopelabError, ValueError):
    module = "adic_disk"


# legendre
class EvenPrime(SlopelabError, ValueError):
    module = "legendre"


class SingularCurve(SlopelabError, ValueError):
    module = "legendre"


class ExcludedPoint(SlopelabError, ValueError):
    module = "legendre"
