"""Dense exact linear algebra over an arbitrary coefficient field.

Matrices are lists of rows of field values. Sizes in this package stay
small (tens of generators), so everything is straightforward Gaussian
elimination with deterministic pivoting: first nonzero entry wins.
"""
from __future__ import annotations


def zeros(field, nrows, ncols):
    z = field.zero
    return [[z] * ncols for _ in range(nrows)]


def identity(field, n):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def mat_add(field, a, b):
    return [[field.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_sub(field, a, b):
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(field, c, a):
    return [[field.mul(c, x) for x in row] for row in a]


def mat_mul(field, a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shape mismatch: %dx%d times %dx%d"
                         % (len(a), len(a[0]), len(b), len(b[0]) if b else 0))
    if not b:
        return [[] for _ in a] if not a or not a[0] else [[]] * len(a)
    ncols = len(b[0])
    out = zeros(field, len(a), ncols)
    for i, row in enumerate(a):
        for k, c in enumerate(row):
            if field.is_zero(c):
                continue
            brow = b[k]
            orow = out[i]
            for j in range(ncols):
                orow[j] = field.add(orow[j], field.mul(c, brow[j]))
    return out


def mat_apply(field, a, v):
    return [c for row in mat_mul(field, a, [[x] for x in v]) for c in row]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def is_zero_matrix(field, a):
    return all(field.is_zero(x) for row in a for x in row)


def rref(field, a):
    """Reduced row echelon form. Returns (rows, pivot column indices)."""
    m = [row[:] for row in a]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        hit = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                hit = i
                break
        if hit is None:
            continue
        m[r], m[hit] = m[hit], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y))
                        for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field, a):
    return len(rref(field, a)[1])


def nullspace(field, a, ncols=None):
    """Basis of the right kernel, as vectors of length ncols."""
    if ncols is None:
        if not a:
            raise ValueError("cannot infer width of an empty matrix")
        ncols = len(a[0])
    rows, pivots = rref(field, a)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for ri, pc in enumerate(pivots):
            v[pc] = field.neg(rows[ri][free])
        basis.append(v)
    return basis


def solve(field, a, b):
    """One solution x of a x = b, or None. a is m x n, b has length m."""
    n = len(a[0]) if a else 0
    aug = [row[:] + [bv] for row, bv in zip(a, b)]
    if not a:
        return [] if all(field.is_zero(x) for x in b) else None
    rows, pivots = rref(field, aug)
    if n in pivots:
        return None
    x = [field.zero] * n
    for ri, pc in enumerate(pivots):
        x[pc] = rows[ri][n]
    return x


def solve_matrix(field, a, b):
    """Solve a X = b column by column; None if any column fails."""
    cols = []
    bt = transpose(b)
    for col in bt:
        x = solve(field, a, col)
        if x is None:
            return None
        cols.append(x)
    out = transpose(cols)
    if not out and a:
        out = [[] for _ in range(len(a[0]))]
    return out


def inverse(field, a):
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse of a non-square matrix")
    aug = [row[:] + idr[:] for row, idr in zip(a, identity(field, n))]
    rows, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]


def column_space_basis(field, a):
    """Indices of a maximal independent set of columns."""
    _, pivots = rref(field, a)
    return pivots


def stack_columns(vectors, field, nrows):
    """Matrix whose columns are the given vectors."""
    m = zeros(field, nrows, len(vectors))
    for j, v in enumerate(vectors):
        for i, x in enumerate(v):
            m[i][j] = x
    return m
