"""Small dense linear algebra over p-adic (or any exact) scalars.

Matrices are lists of rows.  Only ring operations plus ``inverse``,
``is_zero`` and ``valuation`` are used, so the same code runs over
:class:`PadicNumber`, :class:`UnramifiedElement` and :class:`Fraction`
(for which valuation-based pivoting falls back to "first nonzero").
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Matrix = list[list]


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _val(x):
    return x.valuation() if hasattr(x, "valuation") else 0


def identity(n: int, one, zero) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, zero) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if not (_exact_zero(x) or _exact_zero(y)):
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def _exact_zero(x) -> bool:
    return x.is_exact_zero() if hasattr(x, "is_exact_zero") else x == 0


def map_matrix(a: Matrix, fn: Callable) -> Matrix:
    return [[fn(x) for x in row] for row in a]


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_mul(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def charpoly(a: Matrix, one, zero) -> list:
    """Coefficients [c_0, ..., c_n] of det(t*I - A) = sum c_k t^(n-k), c_0 = 1.

    Berkowitz's algorithm: division free, so no precision is lost to
    divisions by small integers.
    """
    n = len(a)
    if n == 0:
        return [one]
    # vector of coefficients for the leading 1x1 block
    coeffs = [one, zero - a[0][0]]
    for r in range(1, n):
        # A_r = [[M, col], [row, a_rr]] with M the leading r x r block
        M = [row[:r] for row in a[:r]]
        R = a[r][:r]
        C = [a[i][r] for i in range(r)]
        arr = a[r][r]
        # Toeplitz column: 1, -arr, -R C, -R M C, -R M^2 C, ...
        toe = [one, zero - arr]
        v = C
        for _ in range(r):
            s = zero
            for x, y in zip(R, v):
                if not (_exact_zero(x) or _exact_zero(y)):
                    s = s + x * y
            toe.append(zero - s)
            v = [sum((M[i][j] * v[j] for j in range(r) if not (_exact_zero(M[i][j]) or _exact_zero(v[j]))), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                t, c = toe[i - j], coeffs[j]
                if not (_exact_zero(t) or _exact_zero(c)):
                    acc = acc + t * c
            new.append(acc)
        coeffs = new
    return coeffs


def row_reduce(rows: Matrix, zero) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with minimal-valuation pivoting.

    Entries that are zero to precision are treated as zero, so for p-adic
    inputs the rank is the rank "to precision".
    """
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        best, best_v = None, None
        for i in range(r, nrows):
            x = a[i][c]
            if _is_zero(x):
                continue
            v = _val(x)
            if best is None or v < best_v:
                best, best_v = i, v
        if best is None:
            continue
        a[r], a[best] = a[best], a[r]
        inv = a[r][c].inverse() if hasattr(a[r][c], "inverse") else 1 / Fraction(a[r][c])
        a[r] = [x * inv if not _exact_zero(x) else x for x in a[r]]
        for i in range(nrows):
            if i != r and not _is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y if not _exact_zero(y) else x for x, y in zip(a[i], a[r])]
                a[i][c] = zero
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(rows: Matrix, zero) -> int:
    return len(row_reduce(rows, zero)[1])


def solve(a: Matrix, b: Sequence, zero):
    """Solve a x = b for square invertible a; raises ArithmeticError if singular."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, piv = row_reduce(aug, zero)
    if piv[:n] != list(range(n)):
        raise ArithmeticError("matrix is singular to working precision")
    return [red[i][n] for i in range(n)]


def is_diagonal(a: Matrix) -> bool:
    return all(_exact_zero(a[i][j]) or _is_zero(a[i][j]) for i in range(len(a)) for j in range(len(a)) if i != j)
