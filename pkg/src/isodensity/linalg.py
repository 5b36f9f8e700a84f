"""Exact rational linear algebra on small (mostly 4x4) matrices.

Matrices are lists of lists of Fraction.  Nothing here is performance
critical; clarity and exactness win.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def mat_fraction(rows):
    return [[Fraction(x) for x in row] for row in rows]


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_det(a):
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(a)
    m = [row[:] for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [m[r][j] - factor * m[col][j] for j in range(n)]
    return det


def solve(a, b):
    """Solve a @ x = b exactly; raises ValueError if singular."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [m[r][j] - factor * m[col][j] for j in range(n + 1)]
    return [m[i][n] for i in range(n)]


def mat_inverse(a):
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve(a, e))
    return mat_transpose(cols)


def hnf_rows(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero rows of the HNF (pivots positive, entries above a
    pivot reduced into [0, pivot)).
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    row_idx = 0
    for col in range(ncols):
        # find a pivot for this column among remaining rows
        pivots = [i for i in range(row_idx, len(m)) if m[i][col] != 0]
        if not pivots:
            continue
        # euclidean elimination within the column
        while len(pivots) > 1:
            pivots.sort(key=lambda i: abs(m[i][col]))
            i0 = pivots[0]
            for i in pivots[1:]:
                q = m[i][col] // m[i0][col]
                m[i] = [m[i][j] - q * m[i0][j] for j in range(ncols)]
            pivots = [i for i in pivots if m[i][col] != 0]
        i0 = pivots[0]
        m[row_idx], m[i0] = m[i0], m[row_idx]
        if m[row_idx][col] < 0:
            m[row_idx] = [-x for x in m[row_idx]]
        # reduce rows above
        for i in range(row_idx):
            q = m[i][col] // m[row_idx][col]
            if q:
                m[i] = [m[i][j] - q * m[row_idx][j] for j in range(ncols)]
        out.append(row_idx)
        row_idx += 1
    return [m[i] for i in out]


def lattice_hnf(basis_rows):
    """HNF basis of the lattice spanned by rational rows (full rank assumed)."""
    den = 1
    for row in basis_rows:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    int_rows = [[int(x * den) for x in row] for row in basis_rows]
    reduced = hnf_rows(int_rows)
    return [[Fraction(x, den) for x in row] for row in reduced]


def integer_kernel_of_vector(tau):
    """Basis of {x in Z^n : tau . x == 0} plus a particular solution helper.

    Returns (g, x_part, kernel_rows) where tau . x_part == g == gcd(tau).
    """
    n = len(tau)
    # unimodular column operations on tau, tracked in u (rows = images of e_i)
    t = list(map(int, tau))
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # sweep: reduce to single nonzero entry via extended euclid
    while True:
        nz = [i for i in range(n) if t[i] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda i: abs(t[i]))
        i0 = nz[0]
        for i in nz[1:]:
            q = t[i] // t[i0]
            t[i] -= q * t[i0]
            u[i] = [u[i][j] - q * u[i0][j] for j in range(n)]
    nz = [i for i in range(n) if t[i] != 0]
    if not nz:
        raise ValueError("zero trace vector")
    i0 = nz[0]
    g = t[i0]
    if g < 0:
        g = -g
        u[i0] = [-x for x in u[i0]]
    x_part = u[i0]
    kernel = [u[i] for i in range(n) if i != i0]
    return g, x_part, kernel


def ldl(a):
    """LDL^T-style decomposition of a symmetric positive definite matrix.

    Returns (d, l) with Q(x) = sum_i d[i] * (x[i] + sum_{j>i} l[i][j]*x[j])^2.
    """
    n = len(a)
    q = [row[:] for row in a]
    d = [Fraction(0)] * n
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = q[i][i]
        if d[i] <= 0:
            raise ValueError("matrix not positive definite")
        for j in range(i + 1, n):
            l[i][j] = q[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(r, n):
                q[r][c] = q[r][c] - d[i] * l[i][r] * l[i][c]
                q[c][r] = q[r][c]
    return d, l
