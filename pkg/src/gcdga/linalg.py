"""Exact dense linear algebra over Q(i).

Matrices are lists of rows of :class:`GaussianRational`. Ranks go through a
fraction-free Bareiss elimination over the Gaussian integers; kernels,
solutions and inverses through reduced row echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .scalars import ONE, ZERO, GaussianRational

Matrix = list[list[GaussianRational]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def coerce_matrix(m) -> Matrix:
    return [[GaussianRational.coerce(x) for x in row] for row in m]


def transpose(m: Matrix, cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x.is_zero():
                continue
            bk = b[k]
            orow = out[i]
            for j in range(cols):
                y = bk[j]
                if not y.is_zero():
                    orow[j] = orow[j] + x * y
    return out


def matvec(a: Matrix, v: Sequence[GaussianRational]) -> list[GaussianRational]:
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                s = s + x * y
        out.append(s)
    return out


def is_zero_matrix(m: Matrix) -> bool:
    return all(x.is_zero() for row in m for x in row)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def kernel(m: Matrix, cols: int | None = None) -> list[list[GaussianRational]]:
    """Basis of the right null space, one vector per free column."""
    ncols = len(m[0]) if m else (cols or 0)
    if not m:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence[GaussianRational]):
    """One solution of ``m x = b``, or ``None`` when inconsistent."""
    rows = len(m)
    cols = len(m[0]) if m else 0
    aug = [list(m[i]) + [b[i]] for i in range(rows)]
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for row, pc in zip(r, pivots):
        x[pc] = row[cols]
    return x


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(m[i]) + identity(n)[i] for i in range(n)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def rank(m: Matrix) -> int:
    return bareiss_rank(m)


def rank_rref(m: Matrix) -> int:
    return len(rref(m)[1]) if m else 0


# fraction-free elimination ----------------------------------------------------

def _to_gaussian_integers(m: Matrix) -> list[list[tuple[int, int]]]:
    out = []
    for row in m:
        dens = [x.re.denominator for x in row] + [x.im.denominator for x in row]
        s = lcm(*dens) if dens else 1
        out.append([(int(x.re * s), int(x.im * s)) for x in row])
    return out


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gdiv_exact(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    num = _gmul(a, (b[0], -b[1]))
    if num[0] % n or num[1] % n:
        raise ArithmeticError("inexact Gaussian integer division in Bareiss step")
    return (num[0] // n, num[1] // n)


def bareiss_rank(m: Matrix) -> int:
    """Rank by fraction-free elimination; rows are first scaled into Z[i]."""
    if not m or not m[0]:
        return 0
    a = _to_gaussian_integers(m)
    rows, cols = len(a), len(a[0])
    prev = (1, 0)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != (0, 0)), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            ai = a[i]
            aic = ai[c]
            for j in range(c + 1, cols):
                val = _gsub(_gmul(piv, ai[j]), _gmul(aic, a[r][j]))
                ai[j] = _gdiv_exact(val, prev)
            ai[c] = (0, 0)
        prev = piv
        r += 1
    return r


def determinant(m: Matrix) -> GaussianRational:
    n = len(m)
    a = [list(row) for row in m]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def span_contains(basis: Sequence[Sequence[GaussianRational]], v: Sequence[GaussianRational]) -> bool:
    if not basis:
        return all(x.is_zero() for x in v)
    return rank([list(b) for b in basis] + [list(v)]) == rank([list(b) for b in basis])


def same_span(a: Sequence[Sequence[GaussianRational]], b: Sequence[Sequence[GaussianRational]]) -> bool:
    ra = rank([list(x) for x in a]) if a else 0
    rb = rank([list(x) for x in b]) if b else 0
    if ra != rb:
        return False
    both = [list(x) for x in a] + [list(x) for x in b]
    return (rank(both) if both else 0) == ra


def to_fraction_matrix(m: Matrix) -> list[list[Fraction]]:
    return [[x.re for x in row] for row in m]
