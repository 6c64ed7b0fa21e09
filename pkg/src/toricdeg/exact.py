"""Exact rational and integer linear algebra used by the polyhedral engine."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = list[list[Fraction]]


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected; exact code paths must never see them.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    # numpy integers
    if hasattr(x, "dtype") and x.dtype.kind in "iu":
        return Fraction(int(x))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def fmt(q: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    q = frac(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer vector on the ray through ``v`` (zero stays zero)."""
    den = reduce(lcm, (frac(x).denominator for x in v), 1)
    ints = [int(frac(x) * den) for x in v]
    g = reduce(gcd, (abs(i) for i in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(frac, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Rational basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(piv):
            x[p] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector | None:
    """One rational solution of ``rows @ x = rhs`` or None if inconsistent."""
    ncols = len(rows[0])
    aug = [list(map(frac, r)) + [frac(b)] for r, b in zip(rows, rhs)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(piv):
        x[p] = red[r][ncols]
    return tuple(x)


def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(map(frac, r)) for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def _column_hnf(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular column reduction ``A U = [H | 0]``.

    Returns (H-part of A U, U, rank).  Integer-only extended Euclid steps.
    """
    rows = len(a)
    n = len(a[0]) if rows else 0
    a = [r[:] for r in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (a, u):
            for row in mat:
                x, y = row[i], row[j]
                row[i], row[j] = p * x + q * y, r * x + s * y

    k = 0
    for row in range(rows):
        if k == n:
            break
        for j in range(k + 1, n):
            x, y = a[row][k], a[row][j]
            if y == 0:
                continue
            # extended gcd: g = s*x + t*y
            g, s, t = _egcd(x, y)
            colop(k, j, s, t, -y // g, x // g)
        if a[row][k] != 0:
            if a[row][k] < 0:
                for mat in (a, u):
                    for rr in mat:
                        rr[k] = -rr[k]
            k += 1
    return a, u, k


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    aa, bb = a, b
    while bb:
        q = aa // bb
        aa, bb = bb, aa - q * bb
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if aa < 0:
        aa, x0, y0 = -aa, -x0, -y0
    return aa, x0, y0


def integer_kernel(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Lattice basis of ``{x in Z^n : rows @ x = 0}`` (rows rational).

    The basis is put in reduced row echelon shape over Z so coordinate
    subspaces come back as standard unit vectors.
    """
    ints = [list(primitive(r)) for r in rows if any(frac(x) != 0 for x in r)]
    if not ints:
        basis = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    else:
        _, u, k = _column_hnf(ints)
        basis = [[u[i][j] for i in range(ncols)] for j in range(k, ncols)]
    return [tuple(b) for b in _row_hnf(basis)]


def _row_hnf(basis: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of a lattice basis (same lattice)."""
    b = [r[:] for r in basis]
    if not b:
        return b
    n = len(b[0])
    r = 0
    for c in range(n):
        if r == len(b):
            break
        for i in range(r + 1, len(b)):
            while b[i][c] != 0:
                if b[r][c] == 0 or abs(b[i][c]) < abs(b[r][c]):
                    b[r], b[i] = b[i], b[r]
                    continue
                q = b[i][c] // b[r][c]
                b[i] = [x - q * y for x, y in zip(b[i], b[r])]
        if b[r][c] == 0:
            continue
        if b[r][c] < 0:
            b[r] = [-x for x in b[r]]
        for i in range(r):
            q = b[i][c] // b[r][c]
            b[i] = [x - q * y for x, y in zip(b[i], b[r])]
        r += 1
    return b[:r]


def integer_solution(rows: Sequence[Sequence], rhs: Sequence) -> tuple[int, ...] | None:
    """One integer solution of ``rows @ x = rhs`` or None.

    ``rows``/``rhs`` may be rational; each equation is scaled to integers.
    """
    ncols = len(rows[0])
    a: list[list[int]] = []
    b: list[int] = []
    for r, v in zip(rows, rhs):
        fr = [frac(x) for x in r] + [frac(v)]
        den = reduce(lcm, (x.denominator for x in fr), 1)
        a.append([int(x * den) for x in fr[:-1]])
        b.append(int(fr[-1] * den))
    h, u, k = _column_hnf(a)
    # h is lower-echelon in its first k columns: solve by forward substitution
    w = [0] * ncols
    col = 0
    for i, row in enumerate(h):
        acc = b[i] - sum(row[j] * w[j] for j in range(col))
        if col < k and row[col] != 0:
            if acc % row[col]:
                return None
            w[col] = acc // row[col]
            col += 1
        elif acc != 0:
            return None
    return tuple(sum(u[i][j] * w[j] for j in range(ncols)) for i in range(ncols))
