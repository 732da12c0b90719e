"""Small exact linear algebra over any field type with ``+ - * /``.

Works for :class:`heiscat.core.Scalar` as well as ``Fraction``; zero is tested
by truthiness.  Matrices are lists of rows.
"""

from __future__ import annotations


def _copy(rows):
    return [list(r) for r in rows]


def _pivot_row(rows, col, start):
    # prefer entries that are cheap to divide by
    best = None
    for r in range(start, len(rows)):
        v = rows[r][col]
        if v:
            cost = _cost(v)
            if best is None or cost < best[0]:
                best = (cost, r)
                if cost <= 1:
                    break
    return None if best is None else best[1]


def _cost(v):
    num = getattr(v, "num", None)
    if num is None:
        return 1
    return len(num) + (3 * len(v.den) if v.den else 0)


def rref(rows, ncols=None):
    """Return ``(reduced_rows, pivot_columns)`` of the row-reduced echelon form."""
    m = _copy(rows)
    if not m:
        return [], []
    if ncols is None:
        ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = _pivot_row(m, c, r)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row_r = m[r]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of ``{v : rows @ v = 0}`` as a list of vectors."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(mat):
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve(mat, rhs):
    """Solve ``mat @ x = rhs`` for square invertible ``mat``."""
    inv = inverse(mat)
    return [sum((a * b for a, b in zip(row, rhs) if a and b), 0) for row in inv]


def matmul(a, b):
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([_dot(nz, col) for col in cols])
    return out


def _dot(nz, col):
    total = 0
    for k, x in nz:
        y = col[k]
        if y:
            total = x * y + total
    return total


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
