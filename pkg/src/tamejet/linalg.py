"""Dense exact linear algebra over a :class:`~tamejet.field.Field`.

Matrices are lists of rows. Everything is Gaussian elimination; sizes here
stay in the tens.
"""

from __future__ import annotations

from .field import Field


def _copy(rows):
    return [list(r) for r in rows]


def rref(field: Field, rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = [[field.reduce(c) for c in r] for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if not field.is_zero(a[i][c])), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.reduce(v * inv) for v in a[r]]
        for i in range(len(a)):
            if i != r and not field.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [field.reduce(v - f * w) for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(field: Field, rows) -> int:
    return len(rref(field, rows)[1])


def det(field: Field, rows):
    a = _copy(rows)
    n = len(a)
    d = field(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if not field.is_zero(a[i][c])), None)
        if piv is None:
            return field(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = field.neg(d)
        d = field.reduce(d * a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(a[i][c]):
                f = field.reduce(a[i][c] * inv)
                a[i] = [field.reduce(v - f * w) for v, w in zip(a[i], a[c])]
    return d


def inverse(field: Field, rows):
    n = len(rows)
    aug = [list(r) + [field(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(field, aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in red]


def solve(field: Field, rows, rhs):
    """Solve ``rows @ x = rhs``. Returns one solution or None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(field, aug)
    if n in piv:
        return None
    x = [field(0)] * n
    for i, c in enumerate(piv):
        x[c] = red[i][n]
    return x


def nullspace(field: Field, rows, ncols: int | None = None):
    """A basis of {x : rows @ x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[field(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(field, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [field(0)] * ncols
        v[f] = field(1)
        for i, c in enumerate(piv):
            v[c] = field.neg(red[i][f])
        basis.append(v)
    return basis


def matmul(field: Field, a, b):
    return [[field.reduce(sum(x * y for x, y in zip(row, col))) for col in zip(*b)] for row in a]


def identity(field: Field, n: int):
    return [[field(int(i == j)) for j in range(n)] for i in range(n)]
