"""Exact rational linear algebra over integer and Fraction vectors.

Everything downstream (facet tests, rotations, double description) relies on
these kernels being exact.  Vectors and matrices are plain tuples/lists; the
elimination routines are fraction-free (Bareiss) on integer data, so no
Fraction objects appear on the hot paths.  Rationals, where needed at the
boundaries, are stdlib ``fractions.Fraction`` (always stored reduced with a
positive denominator, which makes equality a field-wise comparison).
"""

from fractions import Fraction
from math import gcd, lcm

Rational = Fraction


def dot(u, v):
    """Exact inner product of two equal-length vectors."""
    return sum(a * b for a, b in zip(u, v, strict=True))


def vec_gcd(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def primitive(vec):
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = vec_gcd(vec)
    if g in (0, 1):
        return tuple(vec)
    return tuple(x // g for x in vec)


def clear_denominators(row):
    """Scale a rational row by the positive lcm of denominators, return ints."""
    mult = 1
    for x in row:
        if isinstance(x, Fraction):
            mult = lcm(mult, x.denominator)
    return tuple(int(x * mult) for x in row)


def _int_rows(rows):
    return [clear_denominators(r) if any(isinstance(x, Fraction) for x in r)
            else tuple(int(x) for x in r) for r in rows]


def rank(rows):
    """Linear rank over Q, by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in _int_rows(rows)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev_piv = 1
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev_piv
        prev_piv = p
        r += 1
        if r == len(m):
            break
    return r


def affine_rank(points):
    """Number of affinely independent points (rank of differences, plus 1)."""
    pts = _int_rows(points)
    if not pts:
        raise ValueError("affine_rank needs at least one point")
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    return rank(diffs) + 1


def rref(rows):
    """Reduced row echelon form over Fraction; returns (rows, pivot_cols)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
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


def nullspace(rows):
    """Primitive integer basis of {x : rows . x = 0}."""
    if not rows:
        raise ValueError("nullspace of empty matrix is ambiguous (no ncols)")
    ncols = len(rows[0])
    red, pivots = rref(_int_rows(rows))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(primitive(clear_denominators(v)))
    return basis


def solve(rows, rhs):
    """One exact solution x of rows . x = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs, strict=True)]
    ncols = len(rows[0])
    red, pivots = rref(aug)
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = red[i][ncols]
    # consistency: rows past the pivots are all-zero by rref construction
    return x


def invert(rows):
    """Exact inverse of a square matrix as Fraction rows; None if singular."""
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def independent_rows(rows):
    """Indices of a maximal linearly independent subset, greedily in order."""
    chosen = []
    basis = []
    for i, r in enumerate(_int_rows(rows)):
        cand = basis + [r]
        if rank(cand) == len(cand):
            basis.append(r)
            chosen.append(i)
    return chosen
